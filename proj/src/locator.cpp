#include "relscan/locator.hpp"

#include <cmath>
#include <limits>

#include "relscan/errors.hpp"

namespace relscan {

std::size_t locator_default_c_min(std::size_t n) {
    return 20 + static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
}

LocatorResult locate_first_deviation(const PrefixSums& prefix, const BaselineSpec& spec,
                                     std::size_t c_min, double delta, double sigma_hat) {
    const std::size_t n = prefix.n();
    if (spec.n != n) throw invalid_input("baseline spec does not match series length");
    if (c_min < 1) throw invalid_input("c_min must be at least 1");
    if (spec.k0 + c_min > n)
        throw invalid_input("c_min leaves no scan window after the baseline segment");
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw invalid_input("delta must be finite and non-negative");
    if (!(sigma_hat > 0.0) || !std::isfinite(sigma_hat))
        throw degenerate_variance("sigma_hat must be positive and finite");

    const double mu0 = baseline_mean(prefix, spec);
    const double logn = std::log(static_cast<double>(n));
    for (std::size_t k = spec.k0 + c_min; k <= n; ++k) {
        for (std::size_t j = spec.k0; j + c_min <= k; ++j) {
            const double slack = sigma_hat * logn / std::sqrt(static_cast<double>(k - j));
            if (std::fabs(mu0 - prefix.local_mean(j, k)) >= delta - slack) {
                LocatorResult r;
                r.detected = true;
                r.k_hat = k;
                r.t_hat = static_cast<double>(k) / static_cast<double>(n);
                r.witness_j = j;
                r.witness_k = k;
                return r;
            }
        }
    }
    LocatorResult r;
    r.t_hat = std::numeric_limits<double>::infinity();
    return r;
}

}  // namespace relscan
