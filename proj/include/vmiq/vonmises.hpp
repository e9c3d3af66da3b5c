#pragma once

#include <array>
#include <optional>

#include "vmiq/entropy.hpp"

namespace vmiq {

/// Modified Bessel function of the first kind, order zero, by power series.
/// Overflows to +inf for |x| above roughly 713.
double bessel_i0(double x);

/// exp(-|x|) I0(x); stays finite for all finite x.
double bessel_i0_scaled(double x);

/// Axially symmetric (period pi) von Mises density
///   f(theta | mu, kappa) = cosh(kappa cos(theta - mu)) / (2 pi I0(kappa)).
/// Even in kappa, so the sign of kappa never changes the value; kappa = 0
/// gives the uniform density 1/(2 pi). Evaluated in exp-scaled form so large
/// |kappa| cannot overflow.
double vm_density(double theta, double mu, double kappa);

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Mean entropies turned into plane vectors r_i (cos theta_i, sin theta_i).
struct EntropyVectors {
    std::array<Vec2, 4> v{};
};

EntropyVectors to_vectors(const DirectionalEntropy& e);

/// Dominant orientation: the first right singular vector of the 4 x 2 matrix
/// stacking the entropy vectors, with its y component made nonnegative so the
/// angle lands in [0, pi]. Rotation-degenerate spectra (equal singular
/// values) fall back to pi/2. Throws std::invalid_argument when every vector
/// is zero.
double estimate_mu(const EntropyVectors& vecs);

struct KappaInit {
    double kappa = 0.0;
    bool saturated = false;
};

/// Concentration seed 1 / (2 (1 - rbar)) with rbar = |sum v_i| / 4. As rbar
/// approaches 1 the estimate diverges; at 1 - rbar <= 1e-12 it is pinned to
/// 1e6 and flagged.
KappaInit estimate_kappa_init(const EntropyVectors& vecs);

struct LinearFit {
    double a = 0.0;
    double b = 0.0;
    double epsilon = 0.0;
};

/// Least-squares fit of r_i = a f(theta_i | mu, kappa) + b over the four
/// orientations, scored by epsilon = sqrt((a - 1)^2 + b^2): zero when the
/// density reproduces the entropies with unit gain and no offset. When the
/// four densities are (numerically) constant the slope is indeterminate; the
/// fit falls back to a = 0, b = mean(r).
LinearFit linear_fit_error(const DirectionalEntropy& e, double mu, double kappa);

/// Goodness-of-fit phi = exp(-epsilon), in (0, 1]. Requires epsilon >= 0.
double fitness(double epsilon);

struct FitOptions {
    double step = 0.01;          // initial relative kappa step
    double min_step = 1e-9;      // refinement floor; the search stops below it
    int max_iterations = 10000;  // cap on accepted kappa moves
    std::optional<double> kappa0;  // override for the concentration seed
};

struct VonMisesFit {
    double mu = 0.0;       // radians, in [0, pi]
    double kappa = 0.0;
    double epsilon = 0.0;
    double phi = 0.0;
    double a_coef = 0.0;   // gain of the final linear fit
    double b_coef = 0.0;   // offset of the final linear fit
    int iterations = 0;
    bool degenerate = false;  // orientation carried no signal; mu, kappa are fallbacks
    bool saturated = false;   // kappa seed hit its cap (rbar ~ 1)
};

/// Full model fit: mu from the singular direction, kappa seeded by
/// estimate_kappa_init and then refined by a multiplicative descent on
/// epsilon. Each round tries kappa (1 +/- c); when neither move improves,
/// c is halved, until c falls below min_step. epsilon never increases and
/// kappa never changes sign. All-equal entropies short-circuit to the
/// degenerate result (mu = pi/2, kappa = 0).
VonMisesFit fit_vonmises(const DirectionalEntropy& e, const FitOptions& opts = {});

}  // namespace vmiq
