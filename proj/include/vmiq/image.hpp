#pragma once

#include <cstdint>
#include <vector>

namespace vmiq {

/// Single-channel image, row-major, intensities in [0, 1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0);

    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

    std::size_t size() const { return data.size(); }

    /// Throws std::invalid_argument unless width, height >= 1, data.size() ==
    /// width * height and every sample lies in [0, 1].
    void validate() const;
};

/// Reflects an out-of-range coordinate back into [0, n) by mirroring at the
/// borders without repeating the edge sample: for n = 4 the extension reads
/// ... 2 1 | 0 1 2 3 | 2 1 0 ...  Requires n >= 1; any i is folded, however
/// far outside.
int mirror_index(int i, int n);

/// BT.601 luma from 8-bit RGB, exact in integer arithmetic:
/// (299 r + 587 g + 114 b) / 255000. Equal channels map to v / 255.
double luma8(std::uint8_t r, std::uint8_t g, std::uint8_t b);

}  // namespace vmiq
