#pragma once

#include <cmath>
#include <cstddef>

#include "relscan/series.hpp"

namespace relscan {

struct LrvEstimate {
    double sigma2 = 0.0;
    std::size_t m = 0;
    std::size_t blocks_used = 0;  // floor(n/m) - 1 difference terms
};

// Long-run variance via nonoverlapping block means: average over consecutive
// block pairs of (block-mean difference)^2 * m / 2. Equivalently
// (block-sum difference)^2 / (2m): each difference of adjacent block sums has
// variance ~ 2m*sigma2, so the per-term normalization makes the estimator
// consistent for the long-run variance. Trailing partial block is discarded.
inline LrvEstimate estimate_lrv(const TimeSeries& x, std::size_t m) {
    const std::size_t n = x.size();
    if (m < 1) throw invalid_input("block length m must be >= 1");
    const std::size_t nblocks = n / m;
    if (nblocks < 2) throw invalid_input("series too short for block length m");

    // Sum each block independently (not via prefix sums) so that identical
    // blocks produce bitwise-identical means and a constant series yields an
    // exact zero estimate.
    const auto block_mean = [&x, m](std::size_t b) {
        double s = 0.0;
        const std::size_t begin = b * m;
        for (std::size_t i = begin; i < begin + m; ++i) s += x[i];
        return s / static_cast<double>(m);
    };
    double acc = 0.0;
    double prev = block_mean(0);
    for (std::size_t b = 0; b + 1 < nblocks; ++b) {
        const double next = block_mean(b + 1);
        const double d = prev - next;
        acc += d * d * static_cast<double>(m) / 2.0;
        prev = next;
    }
    LrvEstimate e;
    e.m = m;
    e.blocks_used = nblocks - 1;
    e.sigma2 = acc / static_cast<double>(nblocks - 1);
    return e;
}

enum class BlockRule { paper_default, cube_root };

// Simulation default is the constant 5; the asymptotic rate rule ~ n^{1/3}
// is available for callers that want it.
inline std::size_t default_block_length(std::size_t n, BlockRule rule = BlockRule::paper_default) {
    if (n < 10) throw invalid_input("default_block_length: n too small");
    if (rule == BlockRule::paper_default) return 5;
    const double r = std::round(std::cbrt(static_cast<double>(n)));
    return static_cast<std::size_t>(r < 2.0 ? 2.0 : r);
}

}  // namespace relscan
