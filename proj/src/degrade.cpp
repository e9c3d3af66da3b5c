#include "vmiq/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace vmiq {

Kernel2D gaussian_kernel(int size, double sigma) {
    if (size < 3 || size % 2 == 0) {
        throw std::invalid_argument("gaussian_kernel: size must be odd and >= 3, got " +
                                    std::to_string(size));
    }
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("gaussian_kernel: sigma must be > 0, got " +
                                    std::to_string(sigma));
    }
    Kernel2D k;
    k.size = size;
    k.weights.resize(static_cast<std::size_t>(size) * size);
    int r = size / 2;
    double inv = 1.0 / (2.0 * sigma * sigma);
    double sum = 0.0;
    for (int y = -r; y <= r; ++y) {
        for (int x = -r; x <= r; ++x) {
            double w = std::exp(-(x * x + y * y) * inv);
            k.weights[static_cast<std::size_t>(y + r) * size + (x + r)] = w;
            sum += w;
        }
    }
    for (double& w : k.weights) w /= sum;
    return k;
}

GrayImage convolve(const GrayImage& img, const Kernel2D& kernel) {
    img.validate();
    int size = kernel.size;
    if (size < 1 || size % 2 == 0 ||
        kernel.weights.size() != static_cast<std::size_t>(size) * size) {
        throw std::invalid_argument("convolve: malformed kernel");
    }
    if (img.width < size || img.height < size) {
        throw std::invalid_argument("convolve: image " + std::to_string(img.width) + "x" +
                                    std::to_string(img.height) + " smaller than kernel " +
                                    std::to_string(size) + "x" + std::to_string(size));
    }

    int r = size / 2;
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        bool edge_row = y < r || y >= img.height - r;
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            if (!edge_row && x >= r && x < img.width - r) {
                for (int v = -r; v <= r; ++v) {
                    const double* src = &img.data[static_cast<std::size_t>(y - v) * img.width];
                    const double* kw = &kernel.weights[static_cast<std::size_t>(v + r) * size];
                    for (int u = -r; u <= r; ++u) acc += kw[u + r] * src[x - u];
                }
            } else {
                for (int v = -r; v <= r; ++v) {
                    int sy = mirror_index(y - v, img.height);
                    for (int u = -r; u <= r; ++u) {
                        int sx = mirror_index(x - u, img.width);
                        acc += kernel.at(u + r, v + r) * img.at(sx, sy);
                    }
                }
            }
            out.at(x, y) = std::clamp(acc, 0.0, 1.0);
        }
    }
    return out;
}

GrayImage add_gaussian_noise(const GrayImage& img, double sigma, std::uint64_t seed) {
    img.validate();
    if (!(sigma >= 0.0)) {
        throw std::invalid_argument("add_gaussian_noise: sigma must be >= 0, got " +
                                    std::to_string(sigma));
    }
    GrayImage out = img;
    if (sigma == 0.0) return out;

    // Box-Muller on top of mt19937_64 keeps the byte stream identical across
    // platforms; std::normal_distribution is implementation-defined.
    std::mt19937_64 rng(seed);
    auto uniform01 = [&rng] { return (rng() >> 11) * 0x1.0p-53; };
    bool have_spare = false;
    double spare = 0.0;
    for (double& v : out.data) {
        double z;
        if (have_spare) {
            z = spare;
            have_spare = false;
        } else {
            double radius = std::sqrt(-2.0 * std::log(1.0 - uniform01()));
            double angle = 2.0 * std::numbers::pi * uniform01();
            z = radius * std::cos(angle);
            spare = radius * std::sin(angle);
            have_spare = true;
        }
        v = std::clamp(v + sigma * z, 0.0, 1.0);
    }
    return out;
}

std::vector<GrayImage> degradation_series(const GrayImage& img, Degradation kind, int steps,
                                          const DegradeOptions& opts) {
    img.validate();
    if (steps < 1) {
        throw std::invalid_argument("degradation_series: steps must be >= 1, got " +
                                    std::to_string(steps));
    }

    Kernel2D blur;
    if (kind != Degradation::noise) blur = gaussian_kernel(opts.blur_size, opts.blur_sigma);

    std::vector<GrayImage> series;
    series.reserve(static_cast<std::size_t>(steps));
    series.push_back(img);
    for (int i = 1; i < steps; ++i) {
        const GrayImage& prev = series.back();
        switch (kind) {
            case Degradation::blur:
                series.push_back(convolve(prev, blur));
                break;
            case Degradation::noise:
                series.push_back(add_gaussian_noise(prev, opts.noise_sigma, opts.seed + i));
                break;
            case Degradation::blur_noise:
                series.push_back(
                    add_gaussian_noise(convolve(prev, blur), opts.noise_sigma, opts.seed + i));
                break;
        }
    }
    return series;
}

}  // namespace vmiq
