#pragma once

#include <cstdint>
#include <vector>

#include "relscan/gaussian_limit.hpp"
#include "relscan/rng.hpp"
#include "relscan/series.hpp"

namespace relscan {

// Contiguous block of window starts j in [j_begin, j_end] (windows (j, j+c])
// that qualify for a scale's extremal set and share the same deviation sign.
// Run-length storage keeps adversarial inputs (e.g. near-constant series,
// where every pair qualifies) at O(runs) instead of O(pairs) memory.
struct MemberRun {
    std::size_t j_begin = 0;
    std::size_t j_end = 0;  // inclusive
    int sign = +1;          // sign of (baseline mean - window mean); 0 maps to +1
};

struct ScaleEntry {
    std::size_t c = 0;
    double d_max = 0.0;  // max over the scale of |baseline - window mean|
    std::vector<MemberRun> runs;
};

struct ExtremalSetFamily {
    std::size_t n = 0;
    std::size_t k0 = 0;
    std::size_t c_min = 0;
    std::vector<ScaleEntry> scales;  // c ascending, one entry per scale

    std::size_t member_count() const {
        std::size_t total = 0;
        for (const auto& s : scales)
            for (const auto& r : s.runs) total += r.j_end - r.j_begin + 1;
        return total;
    }
};

// Per scale c: members are windows with |baseline - window mean| within
// sigma_hat*log(n)/sqrt(c) of the scale maximum (natural log). The argmax
// window always qualifies, so no scale entry is empty when sigma_hat > 0.
ExtremalSetFamily estimate_extremal_sets(const PrefixSums& prefix, const BaselineSpec& spec,
                                         std::size_t c_min, double sigma_hat);

// One simulated value of the plug-in statistic: standard Brownian motion on
// integer times 0..n (unit-variance increments), then
//   sigma_hat * max over members of [ sign*(sqrt(c)*B(k0)/k0 - (B(k)-B(j))/sqrt(c)) - penalty(n,c) ].
// An all-empty family yields 0 (suprema over empty sets are defined as 0).
double draw_T_star(const ExtremalSetFamily& family, const BaselineSpec& spec, std::size_t n,
                   double sigma_hat, RngStream& rng);

QuantileTable build_bootstrap_quantile_table(const ExtremalSetFamily& family,
                                             const BaselineSpec& spec, std::size_t n,
                                             double sigma_hat, std::size_t replications,
                                             std::uint64_t seed);

}  // namespace relscan
