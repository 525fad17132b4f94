// Command-line front end: relevance tests, first-deviation localization,
// minimal detectable deviation, and simulation studies on CSV series.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relscan/csv_io.hpp"
#include "relscan/errors.hpp"
#include "relscan/harness.hpp"
#include "relscan/locator.hpp"
#include "relscan/lrv.hpp"
#include "relscan/relevance.hpp"

namespace {

using nlohmann::json;

struct CommonOpts {
    std::string input;
    std::optional<double> t0;
    std::optional<std::size_t> cutoff;
    std::vector<double> deltas;
    double alpha = 0.05;
    std::string method = "bootstrap";
    std::optional<std::size_t> cmin;
    std::size_t m = 5;
    std::size_t reps = 1000;
    double grid_step = 0.001;
    std::optional<std::uint64_t> seed;
    std::optional<int> first_year;
    std::string out;
    bool force_locate = false;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& given) {
    if (given) return *given;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void apply_baseline(relscan::TestConfig& config, const CommonOpts& o) {
    if (o.t0.has_value() == o.cutoff.has_value())
        throw relscan::invalid_input("provide exactly one of --t0 and --cutoff-row");
    if (o.t0) {
        config.t0 = *o.t0;
    } else {
        config.k0 = *o.cutoff;
    }
}

relscan::BaselineSpec resolve_spec(std::size_t n, const CommonOpts& o) {
    if (o.t0.has_value() == o.cutoff.has_value())
        throw relscan::invalid_input("provide exactly one of --t0 and --cutoff-row");
    return o.t0 ? relscan::BaselineSpec::make(n, *o.t0)
                : relscan::BaselineSpec::from_k0(n, *o.cutoff);
}

json report_to_json(const relscan::TestReport& r) {
    return json{{"method", relscan::method_name(r.method)},
                {"n", r.n},
                {"t0", r.t0},
                {"k0", r.k0},
                {"delta", r.delta},
                {"c_min", r.c_min},
                {"m", r.m},
                {"alpha", r.alpha},
                {"statistic", r.statistic},
                {"threshold", r.threshold},
                {"sigma2_hat", r.sigma2_hat},
                {"p_value", r.p_value},
                {"reject", r.reject},
                {"seed", r.seed},
                {"replications", r.replications}};
}

json locator_to_json(const relscan::LocatorResult& loc, double delta, std::size_t c_min,
                     double sigma2_hat, const std::optional<int>& first_year) {
    json j{{"detected", loc.detected},
           {"delta", delta},
           {"c_min", c_min},
           {"sigma2_hat", sigma2_hat}};
    if (loc.detected) {
        j["k_hat"] = loc.k_hat;
        j["t_hat"] = loc.t_hat;
        j["witness_j"] = loc.witness_j;
        j["witness_k"] = loc.witness_k;
        if (first_year) j["year_hat"] = *first_year + static_cast<long long>(loc.k_hat) - 1;
    }
    return j;
}

void emit(const json& j, const std::string& out) {
    const std::string text = j.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        relscan::atomic_write_text(out, text);
    }
}

relscan::TestConfig base_config(const CommonOpts& o) {
    relscan::TestConfig config;
    apply_baseline(config, o);
    config.alpha = o.alpha;
    config.c_min = o.cmin.value_or(20);
    config.m = o.m;
    config.grid_step = o.grid_step;
    config.gaussian_replications = o.reps;
    config.bootstrap_replications = o.reps;
    config.seed = resolve_seed(o.seed);
    return config;
}

int cmd_test(const CommonOpts& o) {
    const relscan::TimeSeries x = relscan::read_series_csv(o.input);
    relscan::TestMethod method;
    if (o.method == "conservative") {
        method = relscan::TestMethod::conservative;
    } else if (o.method == "bootstrap") {
        method = relscan::TestMethod::bootstrap;
    } else {
        throw relscan::invalid_input("--method must be 'conservative' or 'bootstrap'");
    }
    relscan::TestConfig config = base_config(o);
    std::vector<double> deltas = o.deltas.empty() ? std::vector<double>{1.0} : o.deltas;

    json reports = json::array();
    for (double delta : deltas) {
        config.delta = delta;
        const relscan::TestReport report =
            method == relscan::TestMethod::conservative
                ? relscan::run_conservative_test(x, config)
                : relscan::run_bootstrap_test(x, config);
        json j = report_to_json(report);
        if (report.reject || o.force_locate) {
            // Companion localization of the first relevant deviation; uses the
            // localization window floor 20 + floor(sqrt(n)) unless --cmin was
            // given explicitly.
            const relscan::PrefixSums prefix(x);
            const relscan::BaselineSpec spec = resolve_spec(x.size(), o);
            const std::size_t loc_cmin = o.cmin.value_or(relscan::locator_default_c_min(x.size()));
            const double sigma2 = report.sigma2_hat;
            const relscan::LocatorResult loc = relscan::locate_first_deviation(
                prefix, spec, loc_cmin, delta, std::sqrt(sigma2));
            j["locator"] = locator_to_json(loc, delta, loc_cmin, sigma2, o.first_year);
        }
        reports.push_back(std::move(j));
    }
    emit(reports.size() == 1 ? reports.front() : json{{"delta_scan", reports}}, o.out);
    return 0;
}

int cmd_locate(const CommonOpts& o) {
    const relscan::TimeSeries x = relscan::read_series_csv(o.input);
    if (o.deltas.size() > 1)
        throw relscan::invalid_input("locate takes a single --delta");
    const double delta = o.deltas.empty() ? 1.0 : o.deltas.front();
    const relscan::BaselineSpec spec = resolve_spec(x.size(), o);
    const relscan::PrefixSums prefix(x);
    const double sigma2 = relscan::estimate_lrv(x, o.m).sigma2;
    if (!(sigma2 > 0.0))
        throw relscan::degenerate_variance("long-run variance estimate is not positive");
    const std::size_t cmin = o.cmin.value_or(relscan::locator_default_c_min(x.size()));
    const relscan::LocatorResult loc =
        relscan::locate_first_deviation(prefix, spec, cmin, delta, std::sqrt(sigma2));
    emit(locator_to_json(loc, delta, cmin, sigma2, o.first_year), o.out);
    return 0;
}

int cmd_delta_min(const CommonOpts& o) {
    const relscan::TimeSeries x = relscan::read_series_csv(o.input);
    relscan::TestConfig config = base_config(o);
    const relscan::MinimalDelta md = relscan::minimal_delta(x, config);
    // Report the test evaluated at the estimated boundary (which by
    // construction no longer rejects) alongside the estimate itself.
    config.delta = md.delta_hat;
    const relscan::TestReport report = relscan::run_bootstrap_test(x, config);
    json j = report_to_json(report);
    j["delta_hat_alpha"] = md.delta_hat;
    emit(j, o.out);
    return 0;
}

int cmd_simulate(const std::string& plan_path) {
    const relscan::StudyPlan plan = relscan::load_study_plan(plan_path);
    const relscan::StudyResult result = relscan::run_study(plan);
    std::cout << "summary: " << result.summary_csv.string() << "\n"
              << "manifest: " << result.manifest_json.string() << "\n"
              << "raw files: " << result.raw_csvs.size() << "\n"
              << "cells x methods: " << result.rows.size() << "\n"
              << "wall seconds: " << result.wall_seconds << "\n";
    return 0;
}

void add_common(CLI::App* sub, CommonOpts& o, bool with_test_knobs) {
    sub->add_option("--input", o.input, "CSV file, one value per row (optional 'value' header)")
        ->required();
    sub->add_option("--t0", o.t0, "baseline fraction in (0,1); baseline = first floor(n*t0) rows");
    sub->add_option("--cutoff-row", o.cutoff, "baseline = the first CUTOFF rows (exact)");
    sub->add_option("--delta", o.deltas, "relevance margin(s); repeat for a scan")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--cmin", o.cmin, "smallest scan-window width");
    sub->add_option("--m", o.m, "block length for the long-run variance estimate")
        ->check(CLI::PositiveNumber);
    sub->add_option("--first-year", o.first_year,
                    "calendar year of row 1; adds year_hat to locator output");
    sub->add_option("--out", o.out, "write JSON here (atomically) instead of stdout");
    if (with_test_knobs) {
        sub->add_option("--alpha", o.alpha, "test level")->check(CLI::Range(0.0, 1.0));
        sub->add_option("--reps", o.reps, "Monte-Carlo replications for the quantile table");
        sub->add_option("--grid-step", o.grid_step, "Brownian grid width for the Gaussian bound")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", o.seed, "RNG seed (omitted: drawn from entropy, echoed)");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Multiscale relevant-deviation analysis of a time series against its "
        "historical baseline"};
    app.require_subcommand(1);

    CommonOpts test_opts;
    CLI::App* test = app.add_subcommand(
        "test", "Test whether the mean deviates from the baseline by more than delta");
    add_common(test, test_opts, true);
    test->add_option("--method", test_opts.method,
                     "decision threshold: 'conservative' (Gaussian bound) or 'bootstrap'")
        ->check(CLI::IsMember({"conservative", "bootstrap"}));
    test->add_flag("--force-locate", test_opts.force_locate,
                   "report the first-deviation locator even when the test does not reject");

    CommonOpts locate_opts;
    CLI::App* locate =
        app.add_subcommand("locate", "Estimate the first time the deviation exceeds delta");
    add_common(locate, locate_opts, false);

    CommonOpts dmin_opts;
    CLI::App* dmin = app.add_subcommand(
        "delta-min", "Smallest delta at which the bootstrap test stops rejecting");
    add_common(dmin, dmin_opts, true);

    std::string plan_path;
    CLI::App* simulate =
        app.add_subcommand("simulate", "Run a replication study from a JSON plan");
    simulate->add_option("plan", plan_path, "study plan JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (test->parsed()) return cmd_test(test_opts);
        if (locate->parsed()) return cmd_locate(locate_opts);
        if (dmin->parsed()) return cmd_delta_min(dmin_opts);
        if (simulate->parsed()) return cmd_simulate(plan_path);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const relscan::degenerate_variance& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const relscan::invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
