// Python bindings for the core operations: relevance tests, minimal
// detectable deviation, first-deviation localization, and the synthetic
// scenario generators.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>

#include "relscan/errors.hpp"
#include "relscan/harness.hpp"
#include "relscan/locator.hpp"
#include "relscan/lrv.hpp"
#include "relscan/multiscale.hpp"
#include "relscan/relevance.hpp"
#include "relscan/synthetic.hpp"

namespace py = pybind11;

namespace {

relscan::TestConfig make_config(double t0, std::optional<std::size_t> k0, double delta,
                                std::size_t c_min, std::size_t m, double alpha,
                                double grid_step, std::size_t replications,
                                std::uint64_t seed) {
    relscan::TestConfig config;
    config.t0 = t0;
    config.k0 = k0;
    config.delta = delta;
    config.c_min = c_min;
    config.m = m;
    config.alpha = alpha;
    config.grid_step = grid_step;
    config.gaussian_replications = replications;
    config.bootstrap_replications = replications;
    config.seed = seed;
    return config;
}

py::dict report_dict(const relscan::TestReport& r) {
    py::dict d;
    d["method"] = relscan::method_name(r.method);
    d["n"] = r.n;
    d["t0"] = r.t0;
    d["k0"] = r.k0;
    d["delta"] = r.delta;
    d["c_min"] = r.c_min;
    d["m"] = r.m;
    d["alpha"] = r.alpha;
    d["statistic"] = r.statistic;
    d["threshold"] = r.threshold;
    d["sigma2_hat"] = r.sigma2_hat;
    d["p_value"] = r.p_value;
    d["reject"] = r.reject;
    d["seed"] = r.seed;
    d["replications"] = r.replications;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() =
        "Multiscale tests for relevant deviations of a gradually varying mean "
        "from its historical baseline, with bootstrap calibration, a minimal "
        "detectable deviation estimator, and a first-deviation-time locator.";

    // register_exception attaches the attribute only on the first init of this
    // shared object; reassign explicitly so the module also works when loaded
    // both as top-level `_core` and as `relscan._core` in one process.
    mod.attr("InvalidInput") =
        py::register_exception<relscan::invalid_input>(mod, "InvalidInput", PyExc_ValueError);
    mod.attr("DegenerateVariance") = py::register_exception<relscan::degenerate_variance>(
        mod, "DegenerateVariance", PyExc_ArithmeticError);

    mod.def(
        "conservative_test",
        [](const std::vector<double>& x, double t0, std::optional<std::size_t> k0,
           double delta, std::size_t c_min, std::size_t m, double alpha, double grid_step,
           std::size_t replications, std::uint64_t seed) {
            return report_dict(relscan::run_conservative_test(
                x, make_config(t0, k0, delta, c_min, m, alpha, grid_step, replications, seed)));
        },
        py::arg("x"), py::arg("t0") = 0.25, py::arg("k0") = std::nullopt,
        py::arg("delta") = 1.0, py::arg("c_min") = 20, py::arg("m") = 5,
        py::arg("alpha") = 0.05, py::arg("grid_step") = 0.001,
        py::arg("replications") = 1000, py::arg("seed") = 0,
        "Test against the simulated Gaussian bound; returns the report as a dict.");

    mod.def(
        "bootstrap_test",
        [](const std::vector<double>& x, double t0, std::optional<std::size_t> k0,
           double delta, std::size_t c_min, std::size_t m, double alpha, double grid_step,
           std::size_t replications, std::uint64_t seed) {
            return report_dict(relscan::run_bootstrap_test(
                x, make_config(t0, k0, delta, c_min, m, alpha, grid_step, replications, seed)));
        },
        py::arg("x"), py::arg("t0") = 0.25, py::arg("k0") = std::nullopt,
        py::arg("delta") = 1.0, py::arg("c_min") = 20, py::arg("m") = 5,
        py::arg("alpha") = 0.05, py::arg("grid_step") = 0.001,
        py::arg("replications") = 1000, py::arg("seed") = 0,
        "Test against the bootstrap quantile built on the estimated extremal sets.");

    mod.def(
        "minimal_delta",
        [](const std::vector<double>& x, double t0, std::optional<std::size_t> k0,
           std::size_t c_min, std::size_t m, double alpha, std::size_t replications,
           std::uint64_t seed) {
            return relscan::minimal_delta(
                       x, make_config(t0, k0, 0.0, c_min, m, alpha, 0.001, replications, seed))
                .delta_hat;
        },
        py::arg("x"), py::arg("t0") = 0.25, py::arg("k0") = std::nullopt,
        py::arg("c_min") = 20, py::arg("m") = 5, py::arg("alpha") = 0.05,
        py::arg("replications") = 1000, py::arg("seed") = 0,
        "Smallest margin at which the bootstrap test stops rejecting.");

    mod.def(
        "locate",
        [](const std::vector<double>& x, double t0, std::optional<std::size_t> k0,
           double delta, std::optional<std::size_t> c_min, std::size_t m) {
            const relscan::BaselineSpec spec =
                k0 ? relscan::BaselineSpec::from_k0(x.size(), *k0)
                   : relscan::BaselineSpec::make(x.size(), t0);
            const relscan::PrefixSums prefix(x);
            const double sigma2 = relscan::estimate_lrv(x, m).sigma2;
            if (!(sigma2 > 0.0))
                throw relscan::degenerate_variance(
                    "long-run variance estimate is not positive");
            const std::size_t cm =
                c_min ? *c_min : relscan::locator_default_c_min(x.size());
            const relscan::LocatorResult loc = relscan::locate_first_deviation(
                prefix, spec, cm, delta, std::sqrt(sigma2));
            py::dict d;
            d["detected"] = loc.detected;
            d["delta"] = delta;
            d["c_min"] = cm;
            d["sigma2_hat"] = sigma2;
            if (loc.detected) {
                d["k_hat"] = loc.k_hat;
                d["t_hat"] = loc.t_hat;
                d["witness_j"] = loc.witness_j;
                d["witness_k"] = loc.witness_k;
            }
            return d;
        },
        py::arg("x"), py::arg("t0") = 0.25, py::arg("k0") = std::nullopt,
        py::arg("delta") = 1.0, py::arg("c_min") = std::nullopt, py::arg("m") = 5,
        "First time the deviation from the baseline reaches delta.");

    mod.def(
        "statistic",
        [](const std::vector<double>& x, double t0, std::size_t c_min, double delta) {
            const relscan::BaselineSpec spec = relscan::BaselineSpec::make(x.size(), t0);
            const relscan::PrefixSums prefix(x);
            const relscan::StatisticResult r =
                relscan::multiscale_statistic(prefix, spec, c_min, delta);
            py::dict d;
            d["value"] = r.value;
            d["j"] = r.argmax.j;
            d["k"] = r.argmax.k;
            d["c"] = r.argmax.c;
            d["signed_diff"] = r.signed_diff_at_argmax;
            return d;
        },
        py::arg("x"), py::arg("t0") = 0.25, py::arg("c_min") = 20, py::arg("delta") = 1.0,
        "Multiscale scan statistic and its maximizing window.");

    mod.def(
        "estimate_lrv",
        [](const std::vector<double>& x, std::size_t m) {
            return relscan::estimate_lrv(x, m).sigma2;
        },
        py::arg("x"), py::arg("m") = 5,
        "Block-difference estimate of the long-run variance.");

    mod.def(
        "generate_series",
        [](double a, const std::string& error, std::size_t n, std::uint64_t seed, double t0) {
            relscan::RngStream stream(seed);
            return relscan::gen_series(relscan::MeanSpec::curved(a, t0),
                                       relscan::ErrorModel{relscan::error_kind_from_name(error),
                                                           false},
                                       n, stream);
        },
        py::arg("a"), py::arg("error") = "iid", py::arg("n") = 500, py::arg("seed") = 0,
        py::arg("t0") = 0.25,
        "Synthetic scenario series: curved mean plus iid/ma/ar noise.");

    mod.def(
        "oracle_d_inf",
        [](double a, double t0) { return relscan::oracle_d_inf(relscan::MeanSpec::curved(a, t0)); },
        py::arg("a"), py::arg("t0") = 0.25,
        "Numeric sup-deviation of the curved mean from its baseline average.");

    mod.def(
        "oracle_t_star",
        [](double a, double delta, double t0) {
            return relscan::oracle_t_star(relscan::MeanSpec::curved(a, t0), delta);
        },
        py::arg("a"), py::arg("delta") = 1.0, py::arg("t0") = 0.25,
        "Numeric first time the curved mean deviates by delta; None if never.");
}
