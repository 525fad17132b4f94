#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <vector>

#include "relscan/gaussian_limit.hpp"

using namespace relscan;

TEST_CASE("brownian path shape and determinism") {
    RngStream a(5), b(5);
    const BrownianPath p = simulate_brownian(0.001, 1.0, a);
    const BrownianPath q = simulate_brownian(0.001, 1.0, b);
    CHECK(p.values.size() == 1001);
    CHECK(p.values[0] == 0.0);
    CHECK(p.values == q.values);
    CHECK_THROWS_AS(simulate_brownian(0.0, 1.0, a), invalid_input);
    CHECK_THROWS_AS(simulate_brownian(2.0, 1.0, a), invalid_input);
}

TEST_CASE("zero path pins the bound draw to minus the smallest penalty") {
    BrownianPath zero;
    zero.step = 0.001;
    zero.values.assign(1001, 0.0);
    // All centered terms vanish; the max picks the largest window length,
    // where the penalty sqrt(2*(1-log(1-t0))) is smallest.
    CHECK(draw_M(zero, 0.25) == doctest::Approx(-1.6047941129327343).epsilon(1e-12));
    CHECK(draw_M(zero, 0.5) == doctest::Approx(-1.8401886754134453).epsilon(1e-12));
}

TEST_CASE("bound draw is reflection invariant") {
    RngStream rng(9);
    BrownianPath p = simulate_brownian(0.01, 1.0, rng);
    BrownianPath m = p;
    for (double& v : m.values) v = -v;
    CHECK(draw_M(p, 0.25) == doctest::Approx(draw_M(m, 0.25)).epsilon(1e-13));
}

TEST_CASE("bound draw validates the grid") {
    BrownianPath p;
    p.step = 0.01;
    p.values.assign(101, 0.0);
    CHECK_THROWS_AS(draw_M(p, 0.0), invalid_input);
    CHECK_THROWS_AS(draw_M(p, 0.015), invalid_input);  // not a grid multiple
    CHECK_THROWS_AS(draw_M(p, 1.0), invalid_input);
    p.step = 0.002;  // horizon 0.202 != 1
    CHECK_THROWS_AS(draw_M(p, 0.1), invalid_input);
}

TEST_CASE("quantile table is sorted, deterministic, and validated") {
    const QuantileTable t1 = build_gaussian_quantile_table(0.25, 0.01, 200, 11);
    const QuantileTable t2 = build_gaussian_quantile_table(0.25, 0.01, 200, 11);
    const QuantileTable t3 = build_gaussian_quantile_table(0.25, 0.01, 200, 12);
    CHECK(t1.draws.size() == 200);
    CHECK(std::is_sorted(t1.draws.begin(), t1.draws.end()));
    CHECK(t1.draws == t2.draws);
    CHECK(t1.draws != t3.draws);
    CHECK(t1.label == TableLabel::gaussian_bound);
    CHECK_THROWS_AS(build_gaussian_quantile_table(0.25, 0.01, 99, 1), invalid_input);
}

TEST_CASE("median of the bound distribution is in the expected band") {
    const QuantileTable t = build_gaussian_quantile_table(0.25, 0.002, 500, 314);
    CHECK(quantile(t, 0.5) > 0.55);
    CHECK(quantile(t, 0.5) < 1.2);
    CHECK(quantile(t, 0.95) > quantile(t, 0.5));
}

TEST_CASE("quantile order-statistic convention") {
    QuantileTable t;
    t.draws = {1.0, 2.0, 3.0, 4.0};
    CHECK(quantile(t, 0.5) == 2.0);  // ceil(0.5*4) = 2nd order statistic
    QuantileTable u;
    for (int i = 1; i <= 100; ++i) u.draws.push_back(i);
    CHECK(quantile(u, 0.95) == 95.0);
    QuantileTable s;
    s.draws = {7.0};
    CHECK(quantile(s, 0.01) == 7.0);
    CHECK(quantile(s, 0.99) == 7.0);
    CHECK_THROWS_AS(quantile(QuantileTable{}, 0.5), invalid_input);
    CHECK_THROWS_AS(quantile(s, 0.0), invalid_input);
    CHECK_THROWS_AS(quantile(s, 1.0), invalid_input);
}

TEST_CASE("cache naming and round trip") {
    const std::string name = quantile_table_cache_name(0.25, 0.001, 1000, 42);
    CHECK(name.find("0.25") != std::string::npos);
    CHECK(name.find("1000") != std::string::npos);

    const QuantileTable t = build_gaussian_quantile_table(0.25, 0.01, 120, 5);
    const std::filesystem::path tmp =
        std::filesystem::temp_directory_path() / "relscan_cache_test.csv";
    save_quantile_table(t, tmp.string());
    QuantileTable loaded;
    REQUIRE(load_quantile_table(tmp.string(), loaded));
    CHECK(loaded.draws == t.draws);
    CHECK(loaded.label == TableLabel::gaussian_bound);
    std::filesystem::remove(tmp);

    QuantileTable missing;
    CHECK_FALSE(load_quantile_table("/nonexistent/path/table.csv", missing));
}
