#include "relscan/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "relscan/csv_io.hpp"
#include "relscan/errors.hpp"
#include "relscan/locator.hpp"
#include "relscan/parallel.hpp"

namespace relscan {

namespace {

constexpr std::uint64_t kSaltSeries = 0x5eed5eed5eed5eedULL;
constexpr std::uint64_t kSaltTest = 0x7ab1e7ab1e7ab1e7ULL;
constexpr std::uint64_t kSaltGaussian = 0x9a0559a0559a0559ULL;

std::string csv_number(double v) {
    if (std::isnan(v)) return "";
    return format_value(v);
}

void check_label(const std::string& label) {
    if (label.find(',') != std::string::npos || label.find('\n') != std::string::npos)
        throw invalid_input("panel label must not contain commas or newlines: " + label);
}

std::string summary_header() {
    return "panel,a,n,method,rate_or_mean,std_or_se,nondetect,replications,seed\n";
}

void append_summary_row(std::string& out, const CellSummary& row) {
    out += row.panel;
    out += ',';
    out += format_value(row.a);
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += row.method;
    out += ',';
    out += csv_number(row.rate_or_mean);
    out += ',';
    out += csv_number(row.std_or_se);
    out += ',';
    out += csv_number(row.nondetect);
    out += ',';
    out += std::to_string(row.replications);
    out += ',';
    out += std::to_string(row.seed);
    out += '\n';
}

nlohmann::json plan_echo(const StudyPlan& plan) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : plan.cells)
        cells.push_back({{"panel", c.panel},
                         {"a", c.a},
                         {"error", error_kind_name(c.error)},
                         {"n", c.n}});
    nlohmann::json methods = nlohmann::json::array();
    for (auto m : plan.methods) methods.push_back(method_name(m));
    nlohmann::json j{
        {"kind", plan.kind == StudyPlan::Kind::rejection ? "rejection" : "locator"},
        {"cells", cells},
        {"replications", plan.replications},
        {"methods", methods},
        {"master_seed", plan.master_seed},
        {"output_dir", plan.output_dir.string()},
        {"t0", plan.t0},
        {"delta", plan.delta},
        {"alpha", plan.alpha},
        {"m", plan.m},
        {"bootstrap_replications", plan.bootstrap_replications},
        {"gaussian_replications", plan.gaussian_replications},
        {"grid_step", plan.grid_step},
    };
    if (plan.c_min) {
        j["c_min"] = *plan.c_min;
    } else {
        j["c_min"] = nullptr;
    }
    return j;
}

void write_manifest(const StudyPlan& plan, StudyResult& result, const char* study_name) {
    nlohmann::json raw = nlohmann::json::array();
    for (const auto& p : result.raw_csvs) raw.push_back(p.filename().string());
    // Deliberately no wall-clock entry: the manifest must be byte-identical
    // across reruns with the same seed.
    nlohmann::json manifest{
        {"study", study_name},
        {"plan", plan_echo(plan)},
        {"summary_csv", result.summary_csv.filename().string()},
        {"raw_csvs", raw},
    };
    result.manifest_json = plan.output_dir / "manifest.json";
    atomic_write_text(result.manifest_json, manifest.dump(2) + "\n");
}

double sample_std(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell_index,
                          std::uint64_t replication_index, std::uint64_t salt) {
    std::uint64_t s = master;
    s ^= 0x9E3779B97F4A7C15ULL * (cell_index + 1);
    s ^= 0xD1342543DE82EF95ULL * (replication_index + 1);
    s ^= salt;
    const std::uint64_t a = splitmix64(s);
    const std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

void StudyPlan::validate() const {
    if (cells.empty()) throw invalid_input("study plan has no cells");
    if (replications < 50) throw invalid_input("replications must be at least 50");
    if (!(t0 > 0.0 && t0 < 1.0)) throw invalid_input("t0 must be in (0, 1)");
    if (!(delta >= 0.0)) throw invalid_input("delta must be non-negative");
    if (!(alpha > 0.0 && alpha < 1.0)) throw invalid_input("alpha must be in (0, 1)");
    if (m < 1) throw invalid_input("m must be at least 1");
    if (kind == Kind::rejection && methods.empty())
        throw invalid_input("rejection study needs at least one test method");
    if (output_dir.empty()) throw invalid_input("output_dir must be set");
    for (const auto& c : cells) {
        check_label(c.panel);
        if (c.n < 2) throw invalid_input("cell series length must be at least 2");
        const std::size_t k0 = static_cast<std::size_t>(
            std::floor(static_cast<double>(c.n) * t0));
        const std::size_t eff_c =
            c_min ? *c_min
                  : (kind == Kind::rejection ? std::size_t{20} : locator_default_c_min(c.n));
        if (k0 < 1 || k0 + eff_c > c.n)
            throw invalid_input("cell n=" + std::to_string(c.n) +
                                " too short for the baseline segment plus c_min");
    }
}

StudyPlan load_study_plan(const std::filesystem::path& json_path) {
    std::ifstream in(json_path);
    if (!in) throw invalid_input("cannot open plan file: " + json_path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw invalid_input("plan file is not valid JSON: " + std::string(e.what()));
    }
    StudyPlan plan;
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "rejection") {
            plan.kind = StudyPlan::Kind::rejection;
        } else if (kind == "locator") {
            plan.kind = StudyPlan::Kind::locator;
        } else {
            throw invalid_input("field 'kind' must be 'rejection' or 'locator'");
        }
        plan.cells.clear();
        for (const auto& c : j.at("cells")) {
            ScenarioCell cell;
            cell.panel = c.at("panel").get<std::string>();
            cell.a = c.at("a").get<double>();
            cell.error = error_kind_from_name(c.at("error").get<std::string>());
            cell.n = c.at("n").get<std::size_t>();
            plan.cells.push_back(std::move(cell));
        }
        plan.replications = j.at("replications").get<std::size_t>();
        plan.master_seed = j.at("master_seed").get<std::uint64_t>();
        plan.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("methods")) {
            plan.methods.clear();
            for (const auto& m : j["methods"]) {
                const std::string name = m.get<std::string>();
                if (name == "conservative") {
                    plan.methods.push_back(TestMethod::conservative);
                } else if (name == "bootstrap") {
                    plan.methods.push_back(TestMethod::bootstrap);
                } else {
                    throw invalid_input("field 'methods' has unknown entry: " + name);
                }
            }
        }
        if (j.contains("t0")) plan.t0 = j["t0"].get<double>();
        if (j.contains("delta")) plan.delta = j["delta"].get<double>();
        if (j.contains("alpha")) plan.alpha = j["alpha"].get<double>();
        if (j.contains("m")) plan.m = j["m"].get<std::size_t>();
        if (j.contains("c_min") && !j["c_min"].is_null())
            plan.c_min = j["c_min"].get<std::size_t>();
        if (j.contains("bootstrap_replications"))
            plan.bootstrap_replications = j["bootstrap_replications"].get<std::size_t>();
        if (j.contains("gaussian_replications"))
            plan.gaussian_replications = j["gaussian_replications"].get<std::size_t>();
        if (j.contains("grid_step")) plan.grid_step = j["grid_step"].get<double>();
    } catch (const invalid_input&) {
        throw;
    } catch (const std::exception& e) {
        throw invalid_input("invalid plan: " + std::string(e.what()));
    }
    plan.validate();
    return plan;
}

StudyResult run_rejection_study(const StudyPlan& plan) {
    plan.validate();
    if (plan.kind != StudyPlan::Kind::rejection)
        throw invalid_input("plan kind is not 'rejection'");
    const auto start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(plan.output_dir);

    const std::size_t R = plan.replications;
    const std::size_t n_cells = plan.cells.size();
    const std::size_t n_methods = plan.methods.size();
    const std::size_t cmin = plan.c_min.value_or(20);

    // One Gaussian-bound table per distinct (realized baseline fraction,
    // snapped grid step); in the bundled plans all cells share one.
    std::map<std::pair<double, double>, QuantileTable> gaussian_tables;
    const bool need_gaussian =
        std::find(plan.methods.begin(), plan.methods.end(), TestMethod::conservative) !=
        plan.methods.end();
    if (need_gaussian) {
        for (const auto& cell : plan.cells) {
            const auto k0 = static_cast<std::size_t>(
                std::floor(static_cast<double>(cell.n) * plan.t0));
            const double t0_sim = static_cast<double>(k0) / static_cast<double>(cell.n);
            const double step = snapped_grid_step(plan.grid_step, cell.n);
            const auto key = std::make_pair(t0_sim, step);
            if (gaussian_tables.count(key) == 0) {
                gaussian_tables.emplace(
                    key, build_gaussian_quantile_table(
                             t0_sim, step, plan.gaussian_replications,
                             derive_seed(plan.master_seed, 0, 0, kSaltGaussian)));
            }
        }
    }

    struct RepOutcome {
        std::uint64_t seed = 0;
        std::vector<double> statistic, threshold, p;
        std::vector<char> reject;
    };
    std::vector<RepOutcome> outcomes(n_cells * R);

    parallel_for(n_cells * R, [&](std::size_t item) {
        const std::size_t ci = item / R;
        const std::size_t rep = item % R;
        const ScenarioCell& cell = plan.cells[ci];

        RngStream stream(derive_seed(plan.master_seed, ci, rep, kSaltSeries));
        const TimeSeries x = gen_series(MeanSpec::curved(cell.a, plan.t0),
                                        ErrorModel{cell.error, false}, cell.n, stream);

        TestConfig config;
        config.t0 = plan.t0;
        config.delta = plan.delta;
        config.c_min = cmin;
        config.m = plan.m;
        config.alpha = plan.alpha;
        config.grid_step = plan.grid_step;
        config.gaussian_replications = plan.gaussian_replications;
        config.bootstrap_replications = plan.bootstrap_replications;
        config.seed = derive_seed(plan.master_seed, ci, rep, kSaltTest);

        RepOutcome& out = outcomes[item];
        out.seed = config.seed;
        out.statistic.resize(n_methods);
        out.threshold.resize(n_methods);
        out.p.resize(n_methods);
        out.reject.resize(n_methods);
        for (std::size_t mi = 0; mi < n_methods; ++mi) {
            TestReport report;
            if (plan.methods[mi] == TestMethod::conservative) {
                const auto k0 = static_cast<std::size_t>(
                    std::floor(static_cast<double>(cell.n) * plan.t0));
                const double t0_sim =
                    static_cast<double>(k0) / static_cast<double>(cell.n);
                const double step = snapped_grid_step(plan.grid_step, cell.n);
                report = run_conservative_test(x, config,
                                               gaussian_tables.at({t0_sim, step}));
            } else {
                report = run_bootstrap_test(x, config);
            }
            out.statistic[mi] = report.statistic;
            out.threshold[mi] = report.threshold;
            out.p[mi] = report.p_value;
            out.reject[mi] = report.reject ? 1 : 0;
        }
    });

    StudyResult result;
    for (std::size_t ci = 0; ci < n_cells; ++ci) {
        const ScenarioCell& cell = plan.cells[ci];
        std::string raw = "panel,a,error,n,method,rep,seed,statistic,threshold,p_value,reject\n";
        for (std::size_t mi = 0; mi < n_methods; ++mi) {
            std::size_t rejects = 0;
            for (std::size_t rep = 0; rep < R; ++rep) {
                const RepOutcome& out = outcomes[ci * R + rep];
                rejects += out.reject[mi];
                raw += cell.panel;
                raw += ',';
                raw += format_value(cell.a);
                raw += ',';
                raw += error_kind_name(cell.error);
                raw += ',';
                raw += std::to_string(cell.n);
                raw += ',';
                raw += method_name(plan.methods[mi]);
                raw += ',';
                raw += std::to_string(rep);
                raw += ',';
                raw += std::to_string(out.seed);
                raw += ',';
                raw += format_value(out.statistic[mi]);
                raw += ',';
                raw += format_value(out.threshold[mi]);
                raw += ',';
                raw += format_value(out.p[mi]);
                raw += ',';
                raw += (out.reject[mi] ? "1" : "0");
                raw += '\n';
            }
            const double rate = static_cast<double>(rejects) / static_cast<double>(R);
            CellSummary row;
            row.panel = cell.panel;
            row.a = cell.a;
            row.n = cell.n;
            row.method = method_name(plan.methods[mi]);
            row.rate_or_mean = rate;
            row.std_or_se = std::sqrt(rate * (1.0 - rate) / static_cast<double>(R));
            row.nondetect = std::numeric_limits<double>::quiet_NaN();
            row.replications = R;
            row.seed = plan.master_seed;
            result.rows.push_back(std::move(row));
        }
        const std::filesystem::path raw_path =
            plan.output_dir / ("raw_cell" + std::to_string(ci) + ".csv");
        atomic_write_text(raw_path, raw);
        result.raw_csvs.push_back(raw_path);
    }

    std::string summary = summary_header();
    for (const auto& row : result.rows) append_summary_row(summary, row);
    result.summary_csv = plan.output_dir / "summary.csv";
    atomic_write_text(result.summary_csv, summary);

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(plan, result, "rejection");
    return result;
}

StudyResult run_locator_study(const StudyPlan& plan) {
    plan.validate();
    if (plan.kind != StudyPlan::Kind::locator) throw invalid_input("plan kind is not 'locator'");
    const auto start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(plan.output_dir);

    const std::size_t R = plan.replications;
    const std::size_t n_cells = plan.cells.size();

    struct RepOutcome {
        std::uint64_t seed = 0;
        LocatorResult loc;
    };
    std::vector<RepOutcome> outcomes(n_cells * R);

    parallel_for(n_cells * R, [&](std::size_t item) {
        const std::size_t ci = item / R;
        const std::size_t rep = item % R;
        const ScenarioCell& cell = plan.cells[ci];
        const std::size_t cmin = plan.c_min.value_or(locator_default_c_min(cell.n));

        RngStream stream(derive_seed(plan.master_seed, ci, rep, kSaltSeries));
        const TimeSeries x = gen_series(MeanSpec::curved(cell.a, plan.t0),
                                        ErrorModel{cell.error, false}, cell.n, stream);
        const PrefixSums prefix(x);
        const BaselineSpec spec = BaselineSpec::make(cell.n, plan.t0);
        const double sigma2 = estimate_lrv(x, plan.m).sigma2;
        if (!(sigma2 > 0.0)) throw degenerate_variance("long-run variance estimate is not positive");

        RepOutcome& out = outcomes[item];
        out.seed = derive_seed(plan.master_seed, ci, rep, kSaltSeries);
        out.loc = locate_first_deviation(prefix, spec, cmin, plan.delta, std::sqrt(sigma2));
    });

    StudyResult result;
    for (std::size_t ci = 0; ci < n_cells; ++ci) {
        const ScenarioCell& cell = plan.cells[ci];
        std::string raw = "panel,a,error,n,rep,seed,detected,k_hat,t_hat,witness_j,witness_k\n";
        std::vector<double> detected_times;
        for (std::size_t rep = 0; rep < R; ++rep) {
            const RepOutcome& out = outcomes[ci * R + rep];
            if (out.loc.detected) detected_times.push_back(out.loc.t_hat);
            raw += cell.panel;
            raw += ',';
            raw += format_value(cell.a);
            raw += ',';
            raw += error_kind_name(cell.error);
            raw += ',';
            raw += std::to_string(cell.n);
            raw += ',';
            raw += std::to_string(rep);
            raw += ',';
            raw += std::to_string(out.seed);
            raw += ',';
            raw += (out.loc.detected ? "1" : "0");
            raw += ',';
            raw += std::to_string(out.loc.k_hat);
            raw += ',';
            raw += format_value(out.loc.t_hat);
            raw += ',';
            raw += std::to_string(out.loc.witness_j);
            raw += ',';
            raw += std::to_string(out.loc.witness_k);
            raw += '\n';
        }
        double mean = std::numeric_limits<double>::quiet_NaN();
        if (!detected_times.empty()) {
            double acc = 0.0;
            for (double t : detected_times) acc += t;
            mean = acc / static_cast<double>(detected_times.size());
        }
        CellSummary row;
        row.panel = cell.panel;
        row.a = cell.a;
        row.n = cell.n;
        row.method = "locator";
        row.rate_or_mean = mean;
        row.std_or_se = sample_std(detected_times, mean);
        row.nondetect =
            1.0 - static_cast<double>(detected_times.size()) / static_cast<double>(R);
        row.replications = R;
        row.seed = plan.master_seed;
        result.rows.push_back(std::move(row));

        const std::filesystem::path raw_path =
            plan.output_dir / ("raw_cell" + std::to_string(ci) + ".csv");
        atomic_write_text(raw_path, raw);
        result.raw_csvs.push_back(raw_path);
    }

    std::string summary = summary_header();
    for (const auto& row : result.rows) append_summary_row(summary, row);
    result.summary_csv = plan.output_dir / "summary.csv";
    atomic_write_text(result.summary_csv, summary);

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(plan, result, "locator");
    return result;
}

StudyResult run_study(const StudyPlan& plan) {
    return plan.kind == StudyPlan::Kind::rejection ? run_rejection_study(plan)
                                                   : run_locator_study(plan);
}

}  // namespace relscan
