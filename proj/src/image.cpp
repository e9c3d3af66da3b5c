#include "vmiq/image.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vmiq {

GrayImage::GrayImage(int w, int h, double fill) : width(w), height(h) {
    if (w < 1 || h < 1) {
        throw std::invalid_argument("GrayImage: dimensions must be >= 1, got " +
                                    std::to_string(w) + "x" + std::to_string(h));
    }
    data.assign(static_cast<std::size_t>(w) * h, fill);
}

void GrayImage::validate() const {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("GrayImage: dimensions must be >= 1, got " +
                                    std::to_string(width) + "x" + std::to_string(height));
    }
    if (data.size() != static_cast<std::size_t>(width) * height) {
        throw std::invalid_argument("GrayImage: buffer holds " + std::to_string(data.size()) +
                                    " samples, expected " + std::to_string(width * height));
    }
    for (double v : data) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("GrayImage: sample " + std::to_string(v) +
                                        " outside [0, 1]");
        }
    }
}

int mirror_index(int i, int n) {
    if (n < 1) throw std::invalid_argument("mirror_index: n must be >= 1");
    if (n == 1) return 0;
    // The reflected extension is periodic with period 2(n - 1); fold into one
    // period, then mirror the upper half.
    int period = 2 * (n - 1);
    int m = i % period;
    if (m < 0) m += period;
    return m < n ? m : period - m;
}

double luma8(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return (299 * static_cast<int>(r) + 587 * static_cast<int>(g) + 114 * static_cast<int>(b)) /
           255000.0;
}

}  // namespace vmiq
