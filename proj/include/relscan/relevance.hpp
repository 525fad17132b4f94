#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "relscan/bootstrap.hpp"
#include "relscan/gaussian_limit.hpp"
#include "relscan/lrv.hpp"
#include "relscan/multiscale.hpp"
#include "relscan/series.hpp"

namespace relscan {

enum class TestMethod { conservative, bootstrap };

struct TestConfig {
    double t0 = 0.25;
    // When set, the baseline is exactly the first k0 rows and t0 is ignored
    // (used by cutoff-row inputs, where floor(n*t0) could misround).
    std::optional<std::size_t> k0;
    double delta = 1.0;
    std::size_t c_min = 20;
    std::size_t m = 5;
    double alpha = 0.05;
    double grid_step = 0.001;
    std::size_t gaussian_replications = 1000;
    std::size_t bootstrap_replications = 200;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TestReport {
    TestMethod method = TestMethod::conservative;
    std::size_t n = 0;
    double t0 = 0.0;
    std::size_t k0 = 0;
    double delta = 0.0;
    std::size_t c_min = 0;
    std::size_t m = 0;
    double alpha = 0.0;
    double statistic = 0.0;
    double threshold = 0.0;
    double sigma2_hat = 0.0;
    double p_value = 0.0;
    bool reject = false;
    std::uint64_t seed = 0;
    std::size_t replications = 0;
};

struct MinimalDelta {
    double delta_hat = 0.0;
    double alpha = 0.0;
};

// (1 + #{draws: scale*draw >= statistic}) / (N + 1); never 0, at most 1.
double p_value(double statistic, const QuantileTable& table, double scale);

// Decision threshold that makes `p_value <= alpha  <=>  statistic >= threshold`
// exact for tie-free inputs: the K-th order statistic of the scaled draws with
// K = ceil((1-alpha)*(N+1)). Requires alpha*(N+1) >= 1 (else no achievable
// rejection and the equivalence degenerates) — enforced here.
double decision_threshold(const QuantileTable& table, double scale, double alpha);

// Gaussian-bound test: statistic vs sigma_hat * quantile of M.
// The overload with a prebuilt table skips the Monte-Carlo simulation of M
// (the table is data-independent, so replication studies share one).
TestReport run_conservative_test(const TimeSeries& x, const TestConfig& config);
TestReport run_conservative_test(const TimeSeries& x, const TestConfig& config,
                                 const QuantileTable& gaussian_table);

// Plug-in bootstrap test: statistic vs quantile of simulated T* built on the
// series' own extremal sets.
TestReport run_bootstrap_test(const TimeSeries& x, const TestConfig& config);

// Smallest delta at which the bootstrap test no longer rejects, computed in
// closed form from the per-window scores (each affine in delta with slope
// -sqrt(c)) and then nudged up by ULPs so the non-rejection invariant holds
// exactly at delta_hat despite the knife-edge equality.
MinimalDelta minimal_delta(const TimeSeries& x, const TestConfig& config);

// Grid width adjusted so that every multiple of 1/n lies on the Brownian
// grid: the number of steps is rounded up to a multiple of n. Keeps draw_M's
// "t0 on the grid" precondition satisfiable for t0 = k0/n from cutoff-row
// inputs while staying within one step of the requested width.
double snapped_grid_step(double requested_step, std::size_t n);

std::string method_name(TestMethod m);

}  // namespace relscan
