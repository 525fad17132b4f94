#pragma once

#include <cstddef>

#include "relscan/series.hpp"

namespace relscan {

struct LocatorResult {
    bool detected = false;
    std::size_t k_hat = 0;    // first qualifying right endpoint (defined iff detected)
    double t_hat = 0.0;       // k_hat / n; +infinity when not detected
    std::size_t witness_j = 0;
    std::size_t witness_k = 0;
};

// Smallest right endpoint k >= k0 + c_min such that some window [j, k) with
// j in {k0, ..., k - c_min} satisfies
//     |baseline_mean - local_mean(j, k)| >= delta - sigma_hat * log(n) / sqrt(k - j).
// Scans k ascending and j ascending, so the witness is the first qualifying
// pair in that order. No qualifying k => detected = false, t_hat = +infinity.
LocatorResult locate_first_deviation(const PrefixSums& prefix, const BaselineSpec& spec,
                                     std::size_t c_min, double delta, double sigma_hat);

// Scan-window floor used for localization studies: 20 + floor(sqrt(n)).
std::size_t locator_default_c_min(std::size_t n);

}  // namespace relscan
