#pragma once

#include <stdexcept>
#include <string>

namespace vmiq {

/// File could not be opened or read.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File opened but its contents are not a supported/valid raster format.
struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed text input (opinion tables, score CSV). Message names the line.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Correlation is undefined for the given samples (zero variance / all pairs tied).
struct UndefinedCorrelation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The exponential-decay model behind the degradation measure does not hold
/// for this image (probe blur did not reduce fitness by a usable margin).
struct UnstableMeasure : std::runtime_error {
    UnstableMeasure(double phi_i, double phi_next_i)
        : std::runtime_error("degradation measure unstable: beta <= beta_min (phi=" +
                             std::to_string(phi_i) + ", phi_next=" + std::to_string(phi_next_i) + ")"),
          phi(phi_i),
          phi_next(phi_next_i) {}

    double phi;
    double phi_next;
};

}  // namespace vmiq
