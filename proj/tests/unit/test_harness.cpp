#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "relscan/harness.hpp"
#include "relscan/synthetic.hpp"

using namespace relscan;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("relscan-harness-test-" + std::to_string(std::rand()) +
                std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_file(const TempDir& dir, const std::string& name, const std::string& body) {
    const fs::path p = dir.path / name;
    std::ofstream out(p, std::ios::binary);
    out << body;
    return p;
}

StudyPlan tiny_rejection_plan(const fs::path& out_dir) {
    StudyPlan plan;
    plan.kind = StudyPlan::Kind::rejection;
    plan.cells = {{"A", 3.0, ErrorKind::iid, 100}, {"A", kBoundaryCurvature, ErrorKind::iid, 100}};
    plan.replications = 50;
    plan.master_seed = 77;
    plan.output_dir = out_dir;
    plan.c_min = 10;
    plan.bootstrap_replications = 50;
    plan.gaussian_replications = 100;
    plan.grid_step = 0.01;
    return plan;
}

std::size_t count_rows_with(const std::string& csv, const std::string& needle,
                            char final_field) {
    std::size_t count = 0;
    std::istringstream lines(csv);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.find(needle) != std::string::npos && !line.empty() &&
            line.back() == final_field)
            ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("rejection study shape, rates, and determinism") {
    TempDir dir;
    const StudyPlan plan = tiny_rejection_plan(dir.path / "run");
    const StudyResult first = run_rejection_study(plan);

    REQUIRE(first.rows.size() == plan.cells.size() * plan.methods.size());
    for (const auto& row : first.rows) {
        CHECK(row.rate_or_mean >= 0.0);
        CHECK(row.rate_or_mean <= 1.0);
        CHECK(row.replications == 50);
        const double r = row.rate_or_mean;
        CHECK(row.std_or_se == doctest::Approx(std::sqrt(r * (1.0 - r) / 50.0)));
        CHECK(row.seed == 77);
    }
    REQUIRE(first.raw_csvs.size() == plan.cells.size());
    CHECK(fs::exists(first.summary_csv));
    CHECK(fs::exists(first.manifest_json));
    CHECK(first.wall_seconds > 0.0);

    // the raw per-replication rows reproduce the summary rate
    const std::string raw0 = slurp(first.raw_csvs[0]);
    const std::size_t boot_rejects = count_rows_with(raw0, ",bootstrap,", '1');
    const double boot_rate = static_cast<double>(boot_rejects) / 50.0;
    for (const auto& row : first.rows) {
        if (row.method == "bootstrap" && row.a == 3.0)
            CHECK(row.rate_or_mean == doctest::Approx(boot_rate));
    }

    // rerunning the identical plan rewrites byte-identical artifacts
    const std::string summary_before = slurp(first.summary_csv);
    const std::string manifest_before = slurp(first.manifest_json);
    std::vector<std::string> raws_before;
    for (const auto& p : first.raw_csvs) raws_before.push_back(slurp(p));

    const StudyResult second = run_rejection_study(plan);
    CHECK(slurp(second.summary_csv) == summary_before);
    CHECK(slurp(second.manifest_json) == manifest_before);
    for (std::size_t i = 0; i < second.raw_csvs.size(); ++i)
        CHECK(slurp(second.raw_csvs[i]) == raws_before[i]);

    // and a run into a different directory produces the same result tables
    StudyPlan other = plan;
    other.output_dir = dir.path / "other";
    const StudyResult third = run_rejection_study(other);
    CHECK(slurp(third.summary_csv) == summary_before);
    for (std::size_t i = 0; i < third.raw_csvs.size(); ++i)
        CHECK(slurp(third.raw_csvs[i]) == raws_before[i]);
}

TEST_CASE("locator study summarizes detection behaviour") {
    TempDir dir;
    StudyPlan plan;
    plan.kind = StudyPlan::Kind::locator;
    plan.cells = {{"A", 2.0, ErrorKind::iid, 200}};
    plan.replications = 50;
    plan.master_seed = 13;
    plan.output_dir = dir.path / "loc";
    const StudyResult res = run_study(plan);

    REQUIRE(res.rows.size() == 1);
    const CellSummary& row = res.rows[0];
    CHECK(row.method == "locator");
    CHECK(row.nondetect >= 0.0);
    CHECK(row.nondetect <= 1.0);
    REQUIRE(row.nondetect < 1.0);  // a = 2 deviates well past delta = 1
    CHECK(row.rate_or_mean > 0.25);
    CHECK(row.rate_or_mean <= 1.0);
    CHECK(std::isfinite(row.std_or_se));

    // detected count in the raw rows matches the summary's nondetect share
    const std::string raw = slurp(res.raw_csvs[0]);
    std::size_t detected = 0;
    std::istringstream lines(raw);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "panel,a,error,n,rep,seed,detected,k_hat,t_hat,witness_j,witness_k");
    while (std::getline(lines, line)) {
        // the detected flag is the 7th comma-separated field
        std::istringstream cells(line);
        std::string field;
        for (int i = 0; i < 7; ++i) std::getline(cells, field, ',');
        if (field == "1") ++detected;
    }
    CHECK(row.nondetect == doctest::Approx(1.0 - static_cast<double>(detected) / 50.0));

    // byte-identical rerun
    const std::string summary_before = slurp(res.summary_csv);
    const StudyResult again = run_study(plan);
    CHECK(slurp(again.summary_csv) == summary_before);
    CHECK(slurp(again.raw_csvs[0]) == raw);
}

TEST_CASE("study plans load from json with defaults and clear errors") {
    TempDir dir;
    const std::string out = (dir.path / "out").string();

    const fs::path good = write_file(dir, "good.json", R"({
        "kind": "rejection",
        "cells": [{"panel": "A", "a": 3.0, "error": "iid", "n": 120}],
        "replications": 60,
        "master_seed": 5,
        "output_dir": ")" + out + R"(",
        "methods": ["bootstrap"],
        "c_min": null,
        "delta": 0.5
    })");
    const StudyPlan plan = load_study_plan(good);
    CHECK(plan.kind == StudyPlan::Kind::rejection);
    REQUIRE(plan.cells.size() == 1);
    CHECK(plan.cells[0].panel == "A");
    CHECK(plan.cells[0].n == 120);
    CHECK(plan.replications == 60);
    CHECK(plan.master_seed == 5);
    CHECK(!plan.c_min.has_value());
    CHECK(plan.delta == 0.5);
    CHECK(plan.alpha == 0.05);  // default survives
    REQUIRE(plan.methods.size() == 1);
    CHECK(plan.methods[0] == TestMethod::bootstrap);

    const fs::path missing = write_file(dir, "missing.json", R"({
        "cells": [{"panel": "A", "a": 3.0, "error": "iid", "n": 120}],
        "replications": 60, "master_seed": 5, "output_dir": "x"
    })");
    CHECK_THROWS_WITH_AS(load_study_plan(missing), doctest::Contains("kind"), invalid_input);

    const fs::path badkind = write_file(dir, "badkind.json",
                                        R"({"kind": "banana", "cells": [], "replications": 60,
        "master_seed": 5, "output_dir": "x"})");
    CHECK_THROWS_WITH_AS(load_study_plan(badkind), doctest::Contains("kind"), invalid_input);

    const fs::path baderror = write_file(dir, "baderror.json", R"({
        "kind": "rejection",
        "cells": [{"panel": "A", "a": 3.0, "error": "garch", "n": 120}],
        "replications": 60, "master_seed": 5, "output_dir": "x"
    })");
    CHECK_THROWS_AS(load_study_plan(baderror), invalid_input);

    const fs::path badmethod = write_file(dir, "badmethod.json", R"({
        "kind": "rejection",
        "cells": [{"panel": "A", "a": 3.0, "error": "iid", "n": 120}],
        "replications": 60, "master_seed": 5, "output_dir": "x",
        "methods": ["exact"]
    })");
    CHECK_THROWS_WITH_AS(load_study_plan(badmethod), doctest::Contains("methods"),
                         invalid_input);

    const fs::path notjson = write_file(dir, "notjson.json", "kind: rejection\n");
    CHECK_THROWS_AS(load_study_plan(notjson), invalid_input);
    CHECK_THROWS_AS(load_study_plan(dir.path / "absent.json"), invalid_input);
}

TEST_CASE("plan validation rejects unusable settings") {
    TempDir dir;
    StudyPlan plan = tiny_rejection_plan(dir.path / "v");

    StudyPlan bad = plan;
    bad.cells.clear();
    CHECK_THROWS_AS(bad.validate(), invalid_input);

    bad = plan;
    bad.replications = 10;
    CHECK_THROWS_AS(bad.validate(), invalid_input);

    bad = plan;
    bad.cells[0].panel = "a,b";
    CHECK_THROWS_AS(bad.validate(), invalid_input);

    bad = plan;
    bad.c_min.reset();  // default 20
    bad.cells[0].n = 25;  // floor(25 * 0.25) = 6; 6 + 20 > 25
    CHECK_THROWS_AS(bad.validate(), invalid_input);

    bad = plan;
    bad.methods.clear();
    CHECK_THROWS_AS(bad.validate(), invalid_input);

    bad = plan;
    bad.output_dir.clear();
    CHECK_THROWS_AS(bad.validate(), invalid_input);

    bad = plan;
    bad.kind = StudyPlan::Kind::locator;
    CHECK_THROWS_AS(run_rejection_study(bad), invalid_input);
}

TEST_CASE("derived seeds separate cells, replications, and components") {
    const std::uint64_t base = derive_seed(1, 0, 0, 0);
    CHECK(base == derive_seed(1, 0, 0, 0));
    CHECK(base != derive_seed(2, 0, 0, 0));
    CHECK(base != derive_seed(1, 1, 0, 0));
    CHECK(base != derive_seed(1, 0, 1, 0));
    CHECK(base != derive_seed(1, 0, 0, 1));
}
