#pragma once

#include <cmath>
#include <cstddef>

#include "relscan/series.hpp"

namespace relscan {

struct ScaleWindow {
    std::size_t j = 0;
    std::size_t k = 0;
    std::size_t c = 0;  // k - j
};

struct StatisticResult {
    double value = 0.0;          // penalized multiscale maximum
    ScaleWindow argmax;          // ties: smallest c, then smallest j
    double signed_diff_at_argmax = 0.0;  // baseline mean minus window mean
};

// Scale-balancing penalty sqrt(2*log(n*e/c)); strictly decreasing in c,
// equals sqrt(2) at c == n.
inline double penalty(std::size_t n, std::size_t c) {
    if (c < 1 || c > n) throw invalid_input("penalty: c out of [1, n]");
    return std::sqrt(2.0 * (1.0 + std::log(static_cast<double>(n) / static_cast<double>(c))));
}

// Score of one window: sqrt(c)*|baseline - window mean| - penalty - sqrt(c)*delta.
inline double pairwise_score(const PrefixSums& prefix, const BaselineSpec& spec,
                             std::size_t j, std::size_t k, double delta) {
    if (!(j >= spec.k0) || !(j < k) || k > spec.n) throw invalid_input("window outside admissible range");
    const double sc = std::sqrt(static_cast<double>(k - j));
    const double diff = baseline_mean(prefix, spec) - prefix.local_mean(j, k);
    return sc * std::fabs(diff) - penalty(spec.n, k - j) - sc * delta;
}

// Max of pairwise_score over all scales c in [c_min, n-k0] and all windows
// (j, j+c] with j >= k0. O((n-k0)^2) via prefix sums.
StatisticResult multiscale_statistic(const PrefixSums& prefix, const BaselineSpec& spec,
                                     std::size_t c_min, double delta);

}  // namespace relscan
