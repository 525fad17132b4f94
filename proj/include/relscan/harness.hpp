#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "relscan/relevance.hpp"
#include "relscan/synthetic.hpp"

namespace relscan {

struct ScenarioCell {
    std::string panel;  // grouping label in the output (e.g. "A", "B", "C")
    double a = 0.0;     // curvature of the curved mean family
    ErrorKind error = ErrorKind::iid;
    std::size_t n = 0;
};

struct StudyPlan {
    enum class Kind { rejection, locator };

    Kind kind = Kind::rejection;
    std::vector<ScenarioCell> cells;
    std::size_t replications = 300;
    std::vector<TestMethod> methods = {TestMethod::conservative, TestMethod::bootstrap};
    std::uint64_t master_seed = 1;
    std::filesystem::path output_dir;

    double t0 = 0.25;
    double delta = 1.0;
    double alpha = 0.05;
    std::size_t m = 5;
    // When absent: rejection studies use 20, locator studies use
    // 20 + floor(sqrt(n)) per cell.
    std::optional<std::size_t> c_min;
    std::size_t bootstrap_replications = 200;
    std::size_t gaussian_replications = 1000;
    double grid_step = 0.001;

    void validate() const;
};

struct CellSummary {
    std::string panel;
    double a = 0.0;
    std::size_t n = 0;
    std::string method;       // test method name, or "locator"
    double rate_or_mean = 0;  // rejection rate, or mean of t_hat over detected runs
    double std_or_se = 0;     // Monte-Carlo SE of the rate, or sample std of t_hat
    double nondetect = 0;     // locator only; NaN for rejection rows
    std::size_t replications = 0;
    std::uint64_t seed = 0;   // master seed governing the study
};

struct StudyResult {
    std::vector<CellSummary> rows;
    double wall_seconds = 0.0;
    std::filesystem::path summary_csv;
    std::filesystem::path manifest_json;
    std::vector<std::filesystem::path> raw_csvs;
};

StudyPlan load_study_plan(const std::filesystem::path& json_path);

// Per cell: generate `replications` seeded series and tabulate rejection
// rates of the requested test methods. The Gaussian-bound quantile table is
// data independent, so one table per distinct (baseline fraction, grid) pair
// is shared across all replications.
StudyResult run_rejection_study(const StudyPlan& plan);

// Per cell: mean and sample std of the first-deviation time conditional on
// detection, plus the non-detection proportion.
StudyResult run_locator_study(const StudyPlan& plan);

// Dispatch on plan.kind.
StudyResult run_study(const StudyPlan& plan);

// Deterministic seed for one work item of one study component.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell_index,
                          std::uint64_t replication_index, std::uint64_t salt);

}  // namespace relscan
