#include "vmiq/vmdm.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "vmiq/errors.hpp"
#include "vmiq/stats.hpp"

namespace vmiq {

namespace {

void check_phi(double phi, const char* what) {
    if (!(phi > 0.0 && phi <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must lie in (0, 1], got " +
                                    std::to_string(phi));
    }
}

}  // namespace

double estimate_beta(double phi, double phi_next) {
    check_phi(phi, "estimate_beta: phi");
    check_phi(phi_next, "estimate_beta: phi_next");
    return std::log(phi / phi_next);
}

double vmdm_degradation(double phi, double beta, double phi0) {
    check_phi(phi, "vmdm_degradation: phi");
    check_phi(phi0, "vmdm_degradation: phi0");
    if (!std::isfinite(beta) || beta == 0.0) {
        throw std::invalid_argument("vmdm_degradation: beta must be finite and nonzero, got " +
                                    std::to_string(beta));
    }
    return -(std::log(phi) - std::log(phi0)) / beta;
}

VmdmResult vmdm_score(const GrayImage& img, const VmdmOptions& opts) {
    img.validate();
    check_phi(opts.phi0, "vmdm_score: phi0");
    if (!(opts.beta_min > 0.0)) {
        throw std::invalid_argument("vmdm_score: beta_min must be > 0");
    }

    VmdmResult res;
    res.phi = fit_vonmises(mean_directional_entropy(img, opts.window), opts.fit).phi;
    GrayImage probed = convolve(img, opts.probe);
    res.phi_next = fit_vonmises(mean_directional_entropy(probed, opts.window), opts.fit).phi;

    res.beta = estimate_beta(res.phi, res.phi_next);
    if (res.beta <= opts.beta_min) throw UnstableMeasure(res.phi, res.phi_next);

    res.d = vmdm_degradation(res.phi, res.beta, opts.phi0);
    if (res.d <= -1.0) {
        throw std::domain_error("vmdm_score: degradation measure " + std::to_string(res.d) +
                                " is <= -1, ln(1 + d) undefined");
    }
    res.log_d = std::log1p(res.d);
    return res;
}

double transform(double d, const TransformParams& params) {
    if (!std::isfinite(d)) {
        throw std::invalid_argument("transform: d must be finite");
    }
    double t = d;
    for (std::size_t i = 0; i < params.a.size(); ++i) {
        if (!(params.a[i] >= 0.0) || !(params.b[i] >= 0.0) || !std::isfinite(params.c[i])) {
            throw std::invalid_argument("transform: a and b must be >= 0 and c finite (term " +
                                        std::to_string(i) + ")");
        }
        t += params.a[i] * std::tanh(params.b[i] * (d + params.c[i]));
    }
    return t;
}

LearnOutcome learn_transform(std::span<const double> scores, std::span<const double> opinions,
                             const LearnConfig& cfg) {
    if (scores.size() != opinions.size()) {
        throw std::invalid_argument("learn_transform: length mismatch (" +
                                    std::to_string(scores.size()) + " vs " +
                                    std::to_string(opinions.size()) + ")");
    }
    if (scores.size() < 3) {
        throw std::invalid_argument("learn_transform: need at least 3 samples, got " +
                                    std::to_string(scores.size()));
    }
    if (cfg.iterations < 0) {
        throw std::invalid_argument("learn_transform: iterations must be >= 0");
    }

    std::vector<double> mapped(scores.size());
    auto objective = [&](const TransformParams& p) {
        for (std::size_t i = 0; i < scores.size(); ++i) mapped[i] = transform(scores[i], p);
        return pearson(mapped, opinions) + spearman(mapped, opinions);
    };

    LearnOutcome out;
    out.params = TransformParams{};  // identity: all a_i = 0
    out.identity_objective = objective(out.params);
    out.objective = out.identity_objective;

    // Plain mt19937_64 words mapped to [0, 1) keep the draw sequence
    // platform-independent; std::uniform_real_distribution is not.
    std::mt19937_64 rng(cfg.seed);
    auto uniform01 = [&rng] { return (rng() >> 11) * 0x1.0p-53; };

    for (int iter = 0; iter < cfg.iterations; ++iter) {
        TransformParams cand;
        for (std::size_t i = 0; i < 5; ++i) cand.a[i] = cfg.a_max * uniform01();
        for (std::size_t i = 0; i < 5; ++i) cand.b[i] = cfg.b_max * uniform01();
        for (std::size_t i = 0; i < 5; ++i) cand.c[i] = cfg.c_abs * (2.0 * uniform01() - 1.0);
        double obj = objective(cand);
        if (std::isfinite(obj) && obj > out.objective) {
            out.params = cand;
            out.objective = obj;
        }
    }
    return out;
}

}  // namespace vmiq
