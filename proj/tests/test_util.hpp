// Shared test helpers: independent brute-force re-implementations of the core
// operations (direct summation, no prefix sums, no shared code paths) used as
// oracles, plus small random-series generators.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <tuple>
#include <vector>

#include "relscan/rng.hpp"

namespace testutil {

inline double window_mean(const std::vector<double>& x, std::size_t j, std::size_t k) {
    double s = 0.0;
    for (std::size_t i = j; i < k; ++i) s += x[i];
    return s / static_cast<double>(k - j);
}

inline double brute_penalty(std::size_t n, std::size_t c) {
    return std::sqrt(2.0 * (1.0 + std::log(static_cast<double>(n) / static_cast<double>(c))));
}

struct BruteStat {
    double value = -std::numeric_limits<double>::infinity();
    std::size_t j = 0, k = 0, c = 0;
};

inline BruteStat brute_statistic(const std::vector<double>& x, std::size_t k0,
                                 std::size_t c_min, double delta) {
    const std::size_t n = x.size();
    const double mu0 = window_mean(x, 0, k0);
    BruteStat best;
    for (std::size_t c = c_min; c + k0 <= n; ++c) {
        for (std::size_t j = k0; j + c <= n; ++j) {
            const double sc = std::sqrt(static_cast<double>(c));
            const double score = sc * std::fabs(mu0 - window_mean(x, j, j + c)) -
                                 brute_penalty(n, c) - sc * delta;
            if (score > best.value) {
                best.value = score;
                best.j = j;
                best.k = j + c;
                best.c = c;
            }
        }
    }
    return best;
}

// (c, j, sign) triples of every extremal-set member.
inline std::set<std::tuple<std::size_t, std::size_t, int>> brute_extremal_members(
    const std::vector<double>& x, std::size_t k0, std::size_t c_min, double sigma_hat) {
    const std::size_t n = x.size();
    const double mu0 = window_mean(x, 0, k0);
    const double logn = std::log(static_cast<double>(n));
    std::set<std::tuple<std::size_t, std::size_t, int>> members;
    for (std::size_t c = c_min; c + k0 <= n; ++c) {
        double dmax = -1.0;
        for (std::size_t j = k0; j + c <= n; ++j) {
            const double ad = std::fabs(mu0 - window_mean(x, j, j + c));
            if (ad > dmax) dmax = ad;
        }
        const double threshold = dmax - sigma_hat * logn / std::sqrt(static_cast<double>(c));
        for (std::size_t j = k0; j + c <= n; ++j) {
            const double diff = mu0 - window_mean(x, j, j + c);
            if (std::fabs(diff) >= threshold)
                members.insert({c, j, diff >= 0.0 ? +1 : -1});
        }
    }
    return members;
}

struct BruteLocate {
    bool detected = false;
    std::size_t k_hat = 0, witness_j = 0;
};

inline BruteLocate brute_locate(const std::vector<double>& x, std::size_t k0,
                                std::size_t c_min, double delta, double sigma_hat) {
    const std::size_t n = x.size();
    const double mu0 = window_mean(x, 0, k0);
    const double logn = std::log(static_cast<double>(n));
    for (std::size_t k = k0 + c_min; k <= n; ++k) {
        for (std::size_t j = k0; j + c_min <= k; ++j) {
            const double slack = sigma_hat * logn / std::sqrt(static_cast<double>(k - j));
            if (std::fabs(mu0 - window_mean(x, j, k)) >= delta - slack)
                return BruteLocate{true, k, j};
        }
    }
    return BruteLocate{};
}

// Random series with a mild drift after position k0 so tests exercise both
// rejection and non-rejection regimes.
inline std::vector<double> random_series(relscan::RngStream& rng, std::size_t n,
                                         std::size_t k0, double drift) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = rng.gaussian();
        if (i >= k0) {
            const double f = static_cast<double>(i - k0) / static_cast<double>(n - k0);
            v += drift * f * f;
        }
        x[i] = v;
    }
    return x;
}

}  // namespace testutil
