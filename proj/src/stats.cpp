#include "vmiq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

#include "vmiq/errors.hpp"

namespace vmiq {

namespace {

void check_paired(std::span<const double> x, std::span<const double> y, const char* who) {
    if (x.size() != y.size()) {
        throw std::invalid_argument(std::string(who) + ": length mismatch (" +
                                    std::to_string(x.size()) + " vs " + std::to_string(y.size()) +
                                    ")");
    }
    if (x.size() < 2) {
        throw std::invalid_argument(std::string(who) + ": need at least 2 samples, got " +
                                    std::to_string(x.size()));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
            throw std::invalid_argument(std::string(who) + ": non-finite value at index " +
                                        std::to_string(i));
        }
    }
}

double clamp_corr(double r) { return std::min(1.0, std::max(-1.0, r)); }

// Counts pairs i < j with v[i] > v[j] (strict inversions) by merge sort.
std::uint64_t count_inversions(std::vector<double>& v, std::vector<double>& scratch,
                               std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t count = count_inversions(v, scratch, lo, mid) +
                          count_inversions(v, scratch, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (v[j] < v[i]) {
            count += mid - i;
            scratch[k++] = v[j++];
        } else {
            scratch[k++] = v[i++];
        }
    }
    while (i < mid) scratch[k++] = v[i++];
    while (j < hi) scratch[k++] = v[j++];
    std::copy(scratch.begin() + lo, scratch.begin() + hi, v.begin() + lo);
    return count;
}

std::uint64_t tied_pairs(std::vector<double> sorted) {
    std::uint64_t t = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i + 1;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        std::uint64_t run = j - i;
        t += run * (run - 1) / 2;
        i = j;
    }
    return t;
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
    check_paired(x, y, "pearson");
    std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        throw UndefinedCorrelation("pearson: zero variance in one of the samples");
    }
    return clamp_corr(sxy / std::sqrt(sxx * syy));
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        // Positions i..j-1 (0-based) share the mean 1-based rank.
        double shared = 0.5 * static_cast<double>(i + j - 1) + 1.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = shared;
        i = j;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    check_paired(x, y, "spearman");
    std::vector<double> rx = average_ranks(x);
    std::vector<double> ry = average_ranks(y);
    return pearson(rx, ry);
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
    check_paired(x, y, "kendall_tau_b");
    std::size_t n = x.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;

    // Pairs tied in x, and tied in both, from runs in the (x, y) sort.
    std::uint64_t tx = 0, txy = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && x[order[j]] == x[order[i]]) ++j;
        std::uint64_t run = j - i;
        tx += run * (run - 1) / 2;
        std::size_t k = i;
        while (k < j) {
            std::size_t l = k + 1;
            while (l < j && y[order[l]] == y[order[k]]) ++l;
            std::uint64_t jr = l - k;
            txy += jr * (jr - 1) / 2;
            k = l;
        }
        i = j;
    }

    std::vector<double> ty_sorted(n);
    for (std::size_t k = 0; k < n; ++k) ty_sorted[k] = y[k];
    std::sort(ty_sorted.begin(), ty_sorted.end());
    std::uint64_t ty = tied_pairs(std::move(ty_sorted));

    if (tx == n0 || ty == n0) {
        throw UndefinedCorrelation("kendall_tau_b: all pairs tied in one of the samples");
    }

    // Discordant pairs are inversions of y taken in (x, y) order; pairs tied
    // in x sit in ascending y within their run and contribute none.
    std::vector<double> yx(n);
    for (std::size_t k = 0; k < n; ++k) yx[k] = y[order[k]];
    std::vector<double> scratch(n);
    std::uint64_t discordant = count_inversions(yx, scratch, 0, n);

    // nc - nd = n0 - tx - ty + txy - 2 nd.
    double num = static_cast<double>(n0 - tx) - static_cast<double>(ty) +
                 static_cast<double>(txy) - 2.0 * static_cast<double>(discordant);
    double den = std::sqrt(static_cast<double>(n0 - tx)) * std::sqrt(static_cast<double>(n0 - ty));
    return clamp_corr(num / den);
}

}  // namespace vmiq
