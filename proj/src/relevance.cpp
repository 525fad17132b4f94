#include "relscan/relevance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relscan/errors.hpp"

namespace relscan {

void TestConfig::validate() const {
    if (!k0 && !(t0 > 0.0 && t0 < 1.0)) throw invalid_input("t0 must be in (0, 1)");
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw invalid_input("delta must be finite and non-negative");
    if (c_min < 1) throw invalid_input("c_min must be at least 1");
    if (m < 1) throw invalid_input("block length m must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw invalid_input("alpha must be in (0, 1)");
    if (!(grid_step > 0.0)) throw invalid_input("grid step must be positive");
    if (gaussian_replications < 100)
        throw invalid_input("need at least 100 Gaussian-bound replications");
    if (bootstrap_replications < 50)
        throw invalid_input("need at least 50 bootstrap replications");
}

double p_value(double statistic, const QuantileTable& table, double scale) {
    if (table.draws.empty()) throw invalid_input("empty quantile table");
    std::size_t ge = 0;
    for (double d : table.draws) {
        if (scale * d >= statistic) ++ge;
    }
    return static_cast<double>(1 + ge) / static_cast<double>(table.draws.size() + 1);
}

double decision_threshold(const QuantileTable& table, double scale, double alpha) {
    const std::size_t n = table.draws.size();
    if (n == 0) throw invalid_input("empty quantile table");
    if (!(alpha > 0.0 && alpha < 1.0)) throw invalid_input("alpha must be in (0, 1)");
    const double np1 = static_cast<double>(n + 1);
    if (alpha * np1 < 1.0)
        throw invalid_input(
            "alpha too small for the replication count: need alpha*(replications+1) >= 1");
    // K-th order statistic with K = ceil((1-alpha)*(n+1)); the alpha check
    // above guarantees 1 <= K <= n.
    auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * np1));
    k = std::min(std::max<std::size_t>(k, 1), n);
    return scale * table.draws[k - 1];
}

double snapped_grid_step(double requested_step, std::size_t n) {
    if (!(requested_step > 0.0)) throw invalid_input("grid step must be positive");
    if (n == 0) throw invalid_input("series length must be positive");
    auto steps = static_cast<std::size_t>(std::llround(1.0 / requested_step));
    if (steps == 0) steps = 1;
    const std::size_t snapped = ((steps + n - 1) / n) * n;
    return 1.0 / static_cast<double>(snapped);
}

std::string method_name(TestMethod m) {
    return m == TestMethod::conservative ? "conservative" : "bootstrap";
}

namespace {

struct Prepared {
    BaselineSpec spec;
    PrefixSums prefix;
    double sigma2 = 0.0;
    double sigma_hat = 0.0;
    StatisticResult stat;
};

Prepared prepare(const TimeSeries& x, const TestConfig& config) {
    config.validate();
    BaselineSpec spec = config.k0 ? BaselineSpec::from_k0(x.size(), *config.k0)
                                  : BaselineSpec::make(x.size(), config.t0);
    PrefixSums prefix(x);
    const double sigma2 = estimate_lrv(x, config.m).sigma2;
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw degenerate_variance("long-run variance estimate is not positive");
    StatisticResult stat = multiscale_statistic(prefix, spec, config.c_min, config.delta);
    return Prepared{spec, std::move(prefix), sigma2, std::sqrt(sigma2), stat};
}

TestReport make_report(const Prepared& prep, const TestConfig& config, TestMethod method,
                       const QuantileTable& table, double scale) {
    TestReport r;
    r.method = method;
    r.n = prep.prefix.n();
    r.t0 = prep.spec.t0;
    r.k0 = prep.spec.k0;
    r.delta = config.delta;
    r.c_min = config.c_min;
    r.m = config.m;
    r.alpha = config.alpha;
    r.statistic = prep.stat.value;
    r.threshold = decision_threshold(table, scale, config.alpha);
    r.sigma2_hat = prep.sigma2;
    r.p_value = p_value(prep.stat.value, table, scale);
    r.reject = prep.stat.value >= r.threshold;
    r.seed = config.seed;
    r.replications = table.draws.size();
    return r;
}

}  // namespace

TestReport run_conservative_test(const TimeSeries& x, const TestConfig& config,
                                 const QuantileTable& gaussian_table) {
    Prepared prep = prepare(x, config);
    return make_report(prep, config, TestMethod::conservative, gaussian_table, prep.sigma_hat);
}

TestReport run_conservative_test(const TimeSeries& x, const TestConfig& config) {
    Prepared prep = prepare(x, config);
    // Simulate the limit at the realized baseline fraction k0/n, which the
    // snapped grid can represent exactly.
    const double t0_sim =
        static_cast<double>(prep.spec.k0) / static_cast<double>(prep.prefix.n());
    const double step = snapped_grid_step(config.grid_step, prep.prefix.n());
    QuantileTable table = build_gaussian_quantile_table(t0_sim, step,
                                                        config.gaussian_replications, config.seed);
    return make_report(prep, config, TestMethod::conservative, table, prep.sigma_hat);
}

TestReport run_bootstrap_test(const TimeSeries& x, const TestConfig& config) {
    Prepared prep = prepare(x, config);
    ExtremalSetFamily family =
        estimate_extremal_sets(prep.prefix, prep.spec, config.c_min, prep.sigma_hat);
    QuantileTable table =
        build_bootstrap_quantile_table(family, prep.spec, prep.prefix.n(), prep.sigma_hat,
                                       config.bootstrap_replications, config.seed);
    return make_report(prep, config, TestMethod::bootstrap, table, 1.0);
}

MinimalDelta minimal_delta(const TimeSeries& x, const TestConfig& config) {
    Prepared prep = prepare(x, config);
    ExtremalSetFamily family =
        estimate_extremal_sets(prep.prefix, prep.spec, config.c_min, prep.sigma_hat);
    QuantileTable table =
        build_bootstrap_quantile_table(family, prep.spec, prep.prefix.n(), prep.sigma_hat,
                                       config.bootstrap_replications, config.seed);
    const double qstar = decision_threshold(table, 1.0, config.alpha);

    // Every window score is affine in delta with slope -sqrt(c), so the test
    // rejects at delta iff some window has |diff| - (penalty + qstar)/sqrt(c)
    // >= delta. The closed-form boundary is the max of those expressions.
    const std::size_t n = prep.prefix.n();
    const std::size_t k0 = prep.spec.k0;
    const double mu0 = baseline_mean(prep.prefix, prep.spec);
    double boundary = 0.0;
    for (std::size_t c = config.c_min; c + k0 <= n; ++c) {
        const double sc = std::sqrt(static_cast<double>(c));
        const double offset = (penalty(n, c) + qstar) / sc;
        for (std::size_t j = k0; j + c <= n; ++j) {
            const double cand = std::fabs(mu0 - prep.prefix.local_mean(j, j + c)) - offset;
            if (cand > boundary) boundary = cand;
        }
    }

    auto rejects = [&](double d) {
        return multiscale_statistic(prep.prefix, prep.spec, config.c_min, d).value >= qstar;
    };

    double d = boundary;
    if (rejects(d)) {
        // Knife edge: rounding can leave the statistic exactly at (or a hair
        // above) the threshold at the closed-form boundary. Find the smallest
        // representable delta where the test stops rejecting: grow an upper
        // bracket by doubling a ULP-sized step, then bisect down.
        constexpr double inf = std::numeric_limits<double>::infinity();
        double h = std::nextafter(d, inf) - d;
        if (h <= 0.0) h = std::numeric_limits<double>::denorm_min();
        while (rejects(d + h)) h *= 2.0;
        double lo = d;        // rejects
        double hi = d + h;    // does not reject
        while (std::nextafter(lo, inf) < hi) {
            const double mid = lo + (hi - lo) / 2.0;
            if (rejects(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        d = hi;
    }
    return MinimalDelta{d, config.alpha};
}

}  // namespace relscan
