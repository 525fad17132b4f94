#include "relscan/multiscale.hpp"

#include <limits>

namespace relscan {

StatisticResult multiscale_statistic(const PrefixSums& prefix, const BaselineSpec& spec,
                                     std::size_t c_min, double delta) {
    if (c_min < 1) throw invalid_input("c_min must be >= 1");
    if (delta < 0.0) throw invalid_input("delta must be >= 0");
    const std::size_t n = spec.n;
    const std::size_t k0 = spec.k0;
    if (k0 + c_min > n) throw invalid_input("scale range empty: k0 + c_min > n");

    const double mu0 = baseline_mean(prefix, spec);
    StatisticResult best;
    best.value = -std::numeric_limits<double>::infinity();

    // c ascending, j ascending; strict improvement keeps the first maximizer,
    // which realizes the smallest-c-then-smallest-j tie rule.
    for (std::size_t c = c_min; c <= n - k0; ++c) {
        const double sc = std::sqrt(static_cast<double>(c));
        const double pen_plus_shift = penalty(n, c) + sc * delta;
        const double inv_c = 1.0 / static_cast<double>(c);
        for (std::size_t j = k0; j + c <= n; ++j) {
            const double diff = mu0 - prefix.sum(j, j + c) * inv_c;
            const double score = sc * std::fabs(diff) - pen_plus_shift;
            if (score > best.value) {
                best.value = score;
                best.argmax = ScaleWindow{j, j + c, c};
                best.signed_diff_at_argmax = diff;
            }
        }
    }
    return best;
}

}  // namespace relscan
