#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relscan/errors.hpp"
#include "relscan/rng.hpp"

namespace relscan {

struct BrownianPath {
    double step = 0.0;
    std::vector<double> values;  // B(0)=0, B(step), ...
};

enum class TableLabel { gaussian_bound, bootstrap };

struct QuantileTable {
    std::vector<double> draws;  // sorted ascending
    TableLabel label = TableLabel::gaussian_bound;
};

BrownianPath simulate_brownian(double step, double horizon, RngStream& rng);

// Distribution-free bound: max over grid points t0 <= s < t <= 1 of
//   |sqrt(t-s)*B(t0)/t0 - (B(t)-B(s))/sqrt(t-s)| - sqrt(2*log(e/(t-s))).
// The grid implicitly floors t-s at one step; no scale floor beyond that.
double draw_M(const BrownianPath& path, double t0);

// `replications` independent draws of M, reproducible from `seed`; draws are
// computed on per-replication substreams and merged by sorting, so the result
// does not depend on execution order.
QuantileTable build_gaussian_quantile_table(double t0, double step, std::size_t replications,
                                            std::uint64_t seed);

// Empirical quantile: order statistic at ceil(level * N), 1-based.
double quantile(const QuantileTable& table, double level);

// Flat CSV serialization for the on-disk cache keyed by (t0, step, replications, seed).
std::string quantile_table_cache_name(double t0, double step, std::size_t replications,
                                      std::uint64_t seed);
void save_quantile_table(const QuantileTable& table, const std::string& path);
bool load_quantile_table(const std::string& path, QuantileTable& out);

}  // namespace relscan
