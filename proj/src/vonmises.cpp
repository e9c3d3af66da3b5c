#include "vmiq/vonmises.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vmiq {

namespace {

constexpr double pi = std::numbers::pi;

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be finite, got " +
                                    std::to_string(v));
    }
}

void check_entropies(const DirectionalEntropy& e) {
    for (double v : e.values) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("directional entropy " + std::to_string(v) +
                                        " outside [0, 1]");
        }
    }
}

}  // namespace

double bessel_i0(double x) {
    check_finite(x, "bessel_i0: x");
    double q = x * x / 4.0;
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j <= 1000; ++j) {
        term *= q / (static_cast<double>(j) * j);
        sum += term;
        if (term < 1e-16 * sum) break;
    }
    return sum;
}

double bessel_i0_scaled(double x) {
    check_finite(x, "bessel_i0_scaled: x");
    double ax = std::abs(x);
    if (ax <= 650.0) return bessel_i0(ax) * std::exp(-ax);
    // Asymptotic expansion I0(x) e^(-x) ~ (2 pi x)^(-1/2) sum_k a_k x^(-k);
    // at x = 650 the truncation error is below 1e-14 relative.
    double inv = 1.0 / ax;
    double series = 1.0 + inv * (0.125 + inv * (0.0703125 + inv * (0.0732421875 + inv * 0.112152099609375)));
    return series / std::sqrt(2.0 * pi * ax);
}

double vm_density(double theta, double mu, double kappa) {
    check_finite(theta, "vm_density: theta");
    check_finite(mu, "vm_density: mu");
    check_finite(kappa, "vm_density: kappa");
    double ak = std::abs(kappa);
    double t = ak * std::cos(theta - mu);
    // cosh(t) / I0(k) = (e^(|t| - k) + e^(-|t| - k)) / (2 i0e(k)), all factors
    // bounded, so the quotient survives arbitrarily large kappa.
    double at = std::abs(t);
    return (std::exp(at - ak) + std::exp(-at - ak)) / (4.0 * pi * bessel_i0_scaled(ak));
}

EntropyVectors to_vectors(const DirectionalEntropy& e) {
    check_entropies(e);
    EntropyVectors out;
    for (std::size_t i = 0; i < e.angles.size(); ++i) {
        out.v[i] = {e.values[i] * std::cos(e.angles[i]), e.values[i] * std::sin(e.angles[i])};
    }
    return out;
}

double estimate_mu(const EntropyVectors& vecs) {
    Eigen::Matrix<double, 4, 2> x;
    bool all_zero = true;
    for (int i = 0; i < 4; ++i) {
        x(i, 0) = vecs.v[i].x;
        x(i, 1) = vecs.v[i].y;
        if (vecs.v[i].x != 0.0 || vecs.v[i].y != 0.0) all_zero = false;
    }
    if (all_zero) throw std::invalid_argument("estimate_mu: all entropy vectors are zero");

    Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>> svd(x, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s(0) - s(1) <= 1e-9 * s(0)) return pi / 2.0;  // no preferred direction

    Eigen::Vector2d v1 = svd.matrixV().col(0);
    if (v1.y() < 0.0 || (v1.y() == 0.0 && v1.x() < 0.0)) v1 = -v1;
    return std::atan2(v1.y(), v1.x());
}

KappaInit estimate_kappa_init(const EntropyVectors& vecs) {
    double sx = 0.0, sy = 0.0;
    for (const Vec2& v : vecs.v) {
        sx += v.x;
        sy += v.y;
    }
    double rbar = std::hypot(sx, sy) / 4.0;
    if (1.0 - rbar <= 1e-12) return {1e6, true};
    return {1.0 / (2.0 * (1.0 - rbar)), false};
}

LinearFit linear_fit_error(const DirectionalEntropy& e, double mu, double kappa) {
    check_entropies(e);
    std::array<double, 4> f{};
    double fmean = 0.0, rmean = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        f[i] = vm_density(e.angles[i], mu, kappa);
        fmean += f[i];
        rmean += e.values[i];
    }
    fmean /= 4.0;
    rmean /= 4.0;

    double sff = 0.0, sfr = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double df = f[i] - fmean;
        sff += df * df;
        sfr += df * (e.values[i] - rmean);
    }

    LinearFit fit;
    if (sff / 4.0 < 1e-12) {
        // Constant densities: gain indeterminate, model the mean only.
        fit.a = 0.0;
        fit.b = rmean;
    } else {
        fit.a = sfr / sff;
        fit.b = rmean - fit.a * fmean;
    }
    fit.epsilon = std::hypot(fit.a - 1.0, fit.b);
    return fit;
}

double fitness(double epsilon) {
    if (!(epsilon >= 0.0)) {
        throw std::invalid_argument("fitness: epsilon must be >= 0, got " +
                                    std::to_string(epsilon));
    }
    return std::exp(-epsilon);
}

VonMisesFit fit_vonmises(const DirectionalEntropy& e, const FitOptions& opts) {
    check_entropies(e);
    if (!(opts.step > 0.0 && opts.step < 1.0)) {
        throw std::invalid_argument("fit_vonmises: step must lie in (0, 1), got " +
                                    std::to_string(opts.step));
    }
    if (opts.max_iterations < 0) {
        throw std::invalid_argument("fit_vonmises: max_iterations must be >= 0");
    }

    VonMisesFit out;

    double vmin = e.values[0], vmax = e.values[0];
    for (double v : e.values) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    bool flat = vmax - vmin <= 1e-12;

    if (flat) {
        // No anisotropy to fit; report the uniform-density limit.
        out.mu = pi / 2.0;
        out.kappa = 0.0;
        out.degenerate = true;
    } else {
        EntropyVectors vecs = to_vectors(e);
        out.mu = estimate_mu(vecs);
        KappaInit seed = estimate_kappa_init(vecs);
        out.saturated = seed.saturated;
        out.kappa = opts.kappa0.value_or(seed.kappa);
    }

    LinearFit best = linear_fit_error(e, out.mu, out.kappa);

    if (!flat && out.kappa != 0.0) {
        // Multiplicative descent on epsilon(kappa). A fixed step stalls as
        // soon as both neighbors of the optimum straddle it, so once neither
        // direction improves the step is halved; min_step bounds the final
        // resolution. kappa only ever scales by 1 +/- c, so its sign is
        // invariant throughout.
        double c = opts.step;
        while (out.iterations < opts.max_iterations && c >= opts.min_step) {
            double up_kappa = out.kappa * (1.0 + c);
            double down_kappa = out.kappa * (1.0 - c);
            LinearFit up = linear_fit_error(e, out.mu, up_kappa);
            LinearFit down = linear_fit_error(e, out.mu, down_kappa);
            if (up.epsilon < best.epsilon && up.epsilon <= down.epsilon) {
                out.kappa = up_kappa;
                best = up;
                ++out.iterations;
            } else if (down.epsilon < best.epsilon) {
                out.kappa = down_kappa;
                best = down;
                ++out.iterations;
            } else {
                c *= 0.5;
            }
        }
    }

    out.epsilon = best.epsilon;
    out.phi = fitness(best.epsilon);
    out.a_coef = best.a;
    out.b_coef = best.b;
    return out;
}

}  // namespace vmiq
