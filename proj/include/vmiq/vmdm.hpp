#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "vmiq/degrade.hpp"
#include "vmiq/vonmises.hpp"

namespace vmiq {

/// Decay rate of fitness under one probe degradation: beta = ln(phi / phi_next).
/// Both arguments must lie in (0, 1].
double estimate_beta(double phi, double phi_next);

/// Degradation count implied by an exponential fitness decay
///   phi = phi0 e^(-beta d)   =>   d = -(ln phi - ln phi0) / beta.
/// phi and phi0 must lie in (0, 1]; beta must be nonzero and finite. The
/// caller is expected to reject beta below its stability floor first.
double vmdm_degradation(double phi, double beta, double phi0);

struct VmdmResult {
    double phi = 0.0;       // fitness of the input image
    double phi_next = 0.0;  // fitness after one probe blur
    double beta = 0.0;      // estimated decay rate
    double d = 0.0;         // degradation measure
    double log_d = 0.0;     // ln(1 + d), the compressed score
};

struct VmdmOptions {
    double phi0 = 0.88;      // fitness assigned to a pristine natural image
    double beta_min = 1e-4;  // below this the decay model is unusable
    int window = 8;
    Kernel2D probe = gaussian_kernel(5, 1.5);
    FitOptions fit{};
};

/// Blind degradation measure of one image: fits the von Mises model, applies
/// the probe blur once, fits again, and places the image on the exponential
/// decay curve anchored at phi0. Throws UnstableMeasure when the probe fails
/// to reduce fitness by more than beta_min (beta <= beta_min), and
/// std::domain_error when d <= -1 so that ln(1 + d) is undefined.
VmdmResult vmdm_score(const GrayImage& img, const VmdmOptions& opts = {});

/// Monotone score-to-opinion mapping
///   t(d) = d + sum_i a_i tanh(b_i (d + c_i)),  a_i, b_i >= 0,
/// a sum of soft steps that can locally expand or compress the scale while
/// never reordering scores.
struct TransformParams {
    std::array<double, 5> a{};
    std::array<double, 5> b{};
    std::array<double, 5> c{};
};

double transform(double d, const TransformParams& params);

struct LearnConfig {
    int iterations = 20000;
    std::uint64_t seed = 0;
    double a_max = 3.0;  // a_i ~ U[0, a_max]
    double b_max = 5.0;  // b_i ~ U[0, b_max]
    double c_abs = 5.0;  // c_i ~ U[-c_abs, c_abs]
};

struct LearnOutcome {
    TransformParams params;
    double objective = 0.0;           // pearson + spearman of the winner
    double identity_objective = 0.0;  // same for the untransformed scores
};

/// Random search for transform parameters maximizing pearson + spearman
/// against the opinions. The identity transform is candidate zero, so the
/// result never scores below the raw input. Deterministic for a given seed.
/// Requires equal-length samples of at least 3; propagates
/// UndefinedCorrelation when either sample is constant.
LearnOutcome learn_transform(std::span<const double> scores, std::span<const double> opinions,
                             const LearnConfig& cfg = {});

}  // namespace vmiq
