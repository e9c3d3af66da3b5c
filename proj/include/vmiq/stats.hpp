#pragma once

#include <span>
#include <vector>

namespace vmiq {

/// Pearson linear correlation. Requires n >= 2 with equal lengths and finite
/// values; throws UndefinedCorrelation when either sample has zero variance.
/// Result is clamped to [-1, 1].
double pearson(std::span<const double> x, std::span<const double> y);

/// Average (fractional) ranks, 1-based: ties share the mean of the positions
/// they occupy, so e.g. {10, 20, 20, 30} -> {1, 2.5, 2.5, 4}.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman rank correlation: Pearson on average ranks. Same error contract
/// as pearson(); an all-tied sample has zero rank variance and is rejected.
double spearman(std::span<const double> x, std::span<const double> y);

/// Kendall's tau-b with tie corrections,
///   tau_b = (nc - nd) / sqrt((n0 - tx) (n0 - ty)),
/// where n0 = n(n-1)/2 and tx, ty count pairs tied in x resp. y. Runs in
/// O(n log n) (merge-sort inversion counting). Throws UndefinedCorrelation
/// when all x or all y are tied.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

}  // namespace vmiq
