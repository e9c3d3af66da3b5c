#pragma once

#include <cstdint>
#include <vector>

#include "vmiq/image.hpp"

namespace vmiq {

/// Square convolution kernel with odd side length, stored row-major.
struct Kernel2D {
    int size = 0;
    std::vector<double> weights;

    double at(int x, int y) const { return weights[static_cast<std::size_t>(y) * size + x]; }
};

/// Sampled Gaussian kernel, normalized to unit sum. Requires odd size >= 3
/// and sigma > 0.
Kernel2D gaussian_kernel(int size, double sigma);

/// 2-D convolution with mirrored borders (see mirror_index); the result is
/// clamped to [0, 1]. The image must be at least as large as the kernel in
/// both dimensions.
GrayImage convolve(const GrayImage& img, const Kernel2D& kernel);

/// Adds zero-mean Gaussian noise of standard deviation sigma, then clamps to
/// [0, 1]. Deterministic for a given seed; sigma = 0 returns the input
/// unchanged. Requires sigma >= 0.
GrayImage add_gaussian_noise(const GrayImage& img, double sigma, std::uint64_t seed);

enum class Degradation { blur, noise, blur_noise };

struct DegradeOptions {
    int blur_size = 5;
    double blur_sigma = 1.0;
    double noise_sigma = 0.01;
    std::uint64_t seed = 0;
};

/// Progressive degradation ladder: element 0 is the input itself, element i
/// applies one more round of the chosen degradation to element i-1. For
/// blur_noise each round blurs first, then adds noise. Noise rounds use
/// seed + i so no two steps share a noise pattern. Requires steps >= 1.
std::vector<GrayImage> degradation_series(const GrayImage& img, Degradation kind, int steps,
                                          const DegradeOptions& opts = {});

}  // namespace vmiq
