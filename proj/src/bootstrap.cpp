#include "relscan/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relscan/multiscale.hpp"
#include "relscan/parallel.hpp"

namespace relscan {

ExtremalSetFamily estimate_extremal_sets(const PrefixSums& prefix, const BaselineSpec& spec,
                                         std::size_t c_min, double sigma_hat) {
    if (!(sigma_hat > 0.0)) throw degenerate_variance("sigma_hat must be > 0");
    if (c_min < 1) throw invalid_input("c_min must be >= 1");
    const std::size_t n = spec.n;
    const std::size_t k0 = spec.k0;
    if (k0 + c_min > n) throw invalid_input("scale range empty: k0 + c_min > n");

    const double mu0 = baseline_mean(prefix, spec);
    const double logn = std::log(static_cast<double>(n));

    ExtremalSetFamily family;
    family.n = n;
    family.k0 = k0;
    family.c_min = c_min;
    family.scales.resize(n - k0 - c_min + 1);

    parallel_for(family.scales.size(), [&](std::size_t ci) {
        const std::size_t c = c_min + ci;
        ScaleEntry entry;
        entry.c = c;
        const double inv_c = 1.0 / static_cast<double>(c);
        double dmax = -1.0;
        for (std::size_t j = k0; j + c <= n; ++j) {
            const double ad = std::fabs(mu0 - prefix.sum(j, j + c) * inv_c);
            if (ad > dmax) dmax = ad;
        }
        entry.d_max = dmax;
        const double threshold = dmax - sigma_hat * logn / std::sqrt(static_cast<double>(c));
        MemberRun open;
        bool in_run = false;
        for (std::size_t j = k0; j + c <= n; ++j) {
            const double diff = mu0 - prefix.sum(j, j + c) * inv_c;
            const bool member = std::fabs(diff) >= threshold;
            const int sign = diff >= 0.0 ? +1 : -1;
            if (member && in_run && sign == open.sign) {
                open.j_end = j;
            } else if (member) {
                if (in_run) entry.runs.push_back(open);
                open = MemberRun{j, j, sign};
                in_run = true;
            } else if (in_run) {
                entry.runs.push_back(open);
                in_run = false;
            }
        }
        if (in_run) entry.runs.push_back(open);
        family.scales[ci] = std::move(entry);
    });
    return family;
}

double draw_T_star(const ExtremalSetFamily& family, const BaselineSpec& spec, std::size_t n,
                   double sigma_hat, RngStream& rng) {
    if (!(sigma_hat > 0.0)) throw degenerate_variance("sigma_hat must be > 0");
    if (n != family.n) throw invalid_input("draw_T_star: n mismatch with family");

    // B on integer times: B[0]=0, B[i] = sum of i unit normals.
    std::vector<double> B(n + 1);
    B[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) B[i] = B[i - 1] + rng.gaussian();

    const double base = B[spec.k0] / static_cast<double>(spec.k0);
    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& entry : family.scales) {
        if (entry.runs.empty()) continue;
        const std::size_t c = entry.c;
        const double sc = std::sqrt(static_cast<double>(c));
        const double drift = sc * base;
        const double inv_sc = 1.0 / sc;
        const double pen = penalty(n, c);
        for (const auto& run : entry.runs) {
            const double s = static_cast<double>(run.sign);
            for (std::size_t j = run.j_begin; j <= run.j_end; ++j) {
                const double g = s * (drift - (B[j + c] - B[j]) * inv_sc) - pen;
                if (g > best) best = g;
                any = true;
            }
        }
    }
    if (!any) return 0.0;
    return sigma_hat * best;
}

QuantileTable build_bootstrap_quantile_table(const ExtremalSetFamily& family,
                                             const BaselineSpec& spec, std::size_t n,
                                             double sigma_hat, std::size_t replications,
                                             std::uint64_t seed) {
    if (replications < 50) throw invalid_input("bootstrap quantile table needs >= 50 replications");
    QuantileTable table;
    table.label = TableLabel::bootstrap;
    table.draws.resize(replications);
    RngStream master(seed);
    parallel_for(replications, [&](std::size_t r) {
        RngStream sub = master.substream(r);
        table.draws[r] = draw_T_star(family, spec, n, sigma_hat, sub);
    });
    std::sort(table.draws.begin(), table.draws.end());
    return table;
}

}  // namespace relscan
