#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "vmiq/image.hpp"

namespace vmiq {

/// The four analysis orientations: pi/8, 3pi/8, 5pi/8, 7pi/8. Spacing them a
/// half step off the pixel axes keeps every window endpoint at the same
/// Euclidean distance from the center, so all four directions probe the image
/// at one spatial scale.
std::array<double, 4> octagon_angles();

/// Integer pixel offsets of a 1-D oriented window.
struct DirectionalWindow {
    double theta = 0.0;
    std::vector<std::pair<int, int>> offsets;  // (dx, dy), in order t = -n/2 .. n/2
};

/// Offsets (round(t cos theta), round(t sin theta)) for t = -n/2 .. n/2,
/// rounding half away from zero; n must be even and >= 2, theta one of
/// octagon_angles() (within 1e-12). The window has n + 1 entries and is
/// symmetric: the offset at -t is the negation of the offset at t.
DirectionalWindow directional_offsets(double theta, int n);

/// Samples the window centered at (cx, cy); out-of-range coordinates are
/// mirrored. The center must lie inside the image.
std::vector<double> extract_window(const GrayImage& img, int cx, int cy,
                                   const DirectionalWindow& window);

/// Discrete pseudo-Wigner distribution over one window position.
struct Pwd {
    std::vector<double> values;  // index i holds frequency k = i - n/2, k in [-n/2, n/2 - 1]
};

/// PWD of a (2m + 1)-sample window z:
///   w[k] = 2 sum_m z[m] z[-m] e^(-i 2 pi k m / n),   n = window size - 1.
/// The product z[m] z[-m] is even in m, so w is real; the imaginary residue
/// is asserted below 1e-9 and dropped. Requires an odd length >= 3.
Pwd pwd(const std::vector<double>& window_values);

/// Normalizes w pointwise to w[k]^2 / sum(w^2), a unit-sum distribution.
/// Returns nullopt for an identically zero spectrum (flat window), which
/// carries no orientation signal.
std::optional<Pwd> normalize_pwd(const Pwd& w);

/// Renyi entropy of order 3 of a normalized spectrum, rescaled by log2(n)
/// into [0, 1]:  r = -1/2 log2(sum p^3) / log2(n). Requires unit sum within
/// 1e-9 and nonnegative entries.
double renyi_entropy(const Pwd& w_normalized);

/// Per-pixel Renyi entropy along one orientation; flat-spectrum pixels score
/// 0. Returns a row-major width x height map with every value in [0, 1].
std::vector<double> directional_entropy_map(const GrayImage& img, double theta, int n = 8);

/// Mean directional entropy, one value per analysis orientation.
struct DirectionalEntropy {
    std::array<double, 4> angles{};
    std::array<double, 4> values{};
};

/// Averages the four directional entropy maps of an image. This is the
/// expectation step that turns per-pixel spectral information into the four
/// (angle, entropy) points the von Mises stage fits.
DirectionalEntropy mean_directional_entropy(const GrayImage& img, int n = 8);

}  // namespace vmiq
