#include "vmiq/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vmiq {

namespace {

constexpr double pi = std::numbers::pi;

// round half away from zero, independent of the FPU rounding mode
int round_half_away(double v) { return static_cast<int>(v < 0.0 ? std::ceil(v - 0.5) : std::floor(v + 0.5)); }

// DFT twiddle factors for w[k] = 2 sum_m r[m] e^(-i 2 pi k m / n), tabulated
// once per window size so the per-pixel loop is pure multiply-add.
struct DftTable {
    int n;
    std::vector<double> cosv, sinv;  // [(k + n/2) * n + (m + n/2)]

    explicit DftTable(int n_) : n(n_) {
        cosv.resize(static_cast<std::size_t>(n) * n);
        sinv.resize(static_cast<std::size_t>(n) * n);
        for (int k = -n / 2; k < n / 2; ++k) {
            for (int m = -n / 2; m < n / 2; ++m) {
                double angle = -2.0 * pi * k * m / n;
                std::size_t at = static_cast<std::size_t>(k + n / 2) * n + (m + n / 2);
                cosv[at] = std::cos(angle);
                sinv[at] = std::sin(angle);
            }
        }
    }
};

// Core PWD evaluation: z has n + 1 samples centered at index n/2; out receives
// n real coefficients for k = -n/2 .. n/2 - 1. r is caller scratch of size n.
void pwd_into(const double* z, int n, const DftTable& table, double* r, double* out) {
    int half = n / 2;
    // r[m] = z[m] z[-m]; m = half (i.e. t = n/2) has no partner in the k grid
    // and is excluded, matching the summation range of the definition.
    for (int m = -half; m < half; ++m) {
        r[m + half] = z[half + m] * z[half - m];
    }
    for (int ki = 0; ki < n; ++ki) {
        const double* c = &table.cosv[static_cast<std::size_t>(ki) * n];
        const double* s = &table.sinv[static_cast<std::size_t>(ki) * n];
        double re = 0.0, im = 0.0;
        for (int mi = 0; mi < n; ++mi) {
            re += r[mi] * c[mi];
            im += r[mi] * s[mi];
        }
        if (std::abs(im) > 1e-9 * std::max(1.0, std::abs(re))) {
            throw std::logic_error("pwd: non-real coefficient, imaginary part " +
                                   std::to_string(im));
        }
        out[ki] = 2.0 * re;
    }
}

// Entropy of one spectrum, with the flat-spectrum case folded in; this is the
// composition normalize_pwd + renyi_entropy without the intermediate copies.
double entropy_of_spectrum(const double* w, int n) {
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) sum_sq += w[i] * w[i];
    if (sum_sq <= 0.0) return 0.0;
    double sum_cubes = 0.0;
    for (int i = 0; i < n; ++i) {
        double p = w[i] * w[i] / sum_sq;
        sum_cubes += p * p * p;
    }
    double r = -0.5 * std::log2(sum_cubes) / std::log2(static_cast<double>(n));
    return std::clamp(r, 0.0, 1.0);
}

void check_window_size(int n) {
    if (n < 2 || n % 2 != 0) {
        throw std::invalid_argument("window size n must be even and >= 2, got " +
                                    std::to_string(n));
    }
}

}  // namespace

std::array<double, 4> octagon_angles() {
    return {pi / 8.0, 3.0 * pi / 8.0, 5.0 * pi / 8.0, 7.0 * pi / 8.0};
}

DirectionalWindow directional_offsets(double theta, int n) {
    check_window_size(n);
    bool known = false;
    for (double a : octagon_angles()) {
        if (std::abs(theta - a) <= 1e-12) known = true;
    }
    if (!known) {
        throw std::invalid_argument("directional_offsets: theta " + std::to_string(theta) +
                                    " is not one of the analysis orientations");
    }
    DirectionalWindow w;
    w.theta = theta;
    w.offsets.reserve(static_cast<std::size_t>(n) + 1);
    double c = std::cos(theta), s = std::sin(theta);
    for (int t = -n / 2; t <= n / 2; ++t) {
        w.offsets.emplace_back(round_half_away(t * c), round_half_away(t * s));
    }
    return w;
}

std::vector<double> extract_window(const GrayImage& img, int cx, int cy,
                                   const DirectionalWindow& window) {
    img.validate();
    if (cx < 0 || cx >= img.width || cy < 0 || cy >= img.height) {
        throw std::invalid_argument("extract_window: center (" + std::to_string(cx) + ", " +
                                    std::to_string(cy) + ") outside image");
    }
    std::vector<double> values;
    values.reserve(window.offsets.size());
    for (auto [dx, dy] : window.offsets) {
        values.push_back(img.at(mirror_index(cx + dx, img.width), mirror_index(cy + dy, img.height)));
    }
    return values;
}

Pwd pwd(const std::vector<double>& window_values) {
    if (window_values.size() < 3 || window_values.size() % 2 == 0) {
        throw std::invalid_argument("pwd: window length must be odd and >= 3, got " +
                                    std::to_string(window_values.size()));
    }
    int n = static_cast<int>(window_values.size()) - 1;
    DftTable table(n);
    std::vector<double> scratch(static_cast<std::size_t>(n));
    Pwd out;
    out.values.resize(static_cast<std::size_t>(n));
    pwd_into(window_values.data(), n, table, scratch.data(), out.values.data());
    return out;
}

std::optional<Pwd> normalize_pwd(const Pwd& w) {
    double sum_sq = 0.0;
    for (double v : w.values) sum_sq += v * v;
    if (sum_sq <= 0.0) return std::nullopt;
    Pwd out;
    out.values.reserve(w.values.size());
    for (double v : w.values) out.values.push_back(v * v / sum_sq);
    return out;
}

double renyi_entropy(const Pwd& w_normalized) {
    std::size_t n = w_normalized.values.size();
    if (n < 2) throw std::invalid_argument("renyi_entropy: need at least 2 bins");
    double sum = 0.0;
    for (double p : w_normalized.values) {
        if (!(p >= 0.0)) {
            throw std::invalid_argument("renyi_entropy: negative probability " +
                                        std::to_string(p));
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("renyi_entropy: probabilities sum to " + std::to_string(sum));
    }
    double sum_cubes = 0.0;
    for (double p : w_normalized.values) sum_cubes += p * p * p;
    double r = -0.5 * std::log2(sum_cubes) / std::log2(static_cast<double>(n));
    return std::clamp(r, 0.0, 1.0);
}

std::vector<double> directional_entropy_map(const GrayImage& img, double theta, int n) {
    img.validate();
    DirectionalWindow window = directional_offsets(theta, n);
    DftTable table(n);

    int max_reach = 0;
    for (auto [dx, dy] : window.offsets) {
        max_reach = std::max({max_reach, std::abs(dx), std::abs(dy)});
    }

    std::vector<double> map(img.size());
    std::vector<double> z(window.offsets.size());
    std::vector<double> scratch(static_cast<std::size_t>(n));
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int y = 0; y < img.height; ++y) {
        bool edge_row = y < max_reach || y >= img.height - max_reach;
        for (int x = 0; x < img.width; ++x) {
            if (!edge_row && x >= max_reach && x < img.width - max_reach) {
                for (std::size_t i = 0; i < window.offsets.size(); ++i) {
                    auto [dx, dy] = window.offsets[i];
                    z[i] = img.at(x + dx, y + dy);
                }
            } else {
                for (std::size_t i = 0; i < window.offsets.size(); ++i) {
                    auto [dx, dy] = window.offsets[i];
                    z[i] = img.at(mirror_index(x + dx, img.width), mirror_index(y + dy, img.height));
                }
            }
            pwd_into(z.data(), n, table, scratch.data(), w.data());
            map[static_cast<std::size_t>(y) * img.width + x] = entropy_of_spectrum(w.data(), n);
        }
    }
    return map;
}

DirectionalEntropy mean_directional_entropy(const GrayImage& img, int n) {
    img.validate();
    check_window_size(n);
    DirectionalEntropy result;
    result.angles = octagon_angles();
    double inv_count = 1.0 / static_cast<double>(img.size());
    for (std::size_t i = 0; i < result.angles.size(); ++i) {
        std::vector<double> map = directional_entropy_map(img, result.angles[i], n);
        double sum = 0.0;
        for (double v : map) sum += v;
        result.values[i] = sum * inv_count;
    }
    return result;
}

}  // namespace vmiq
