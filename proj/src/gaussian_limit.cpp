#include "relscan/gaussian_limit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "relscan/parallel.hpp"

namespace relscan {

BrownianPath simulate_brownian(double step, double horizon, RngStream& rng) {
    if (!(step > 0.0) || step > horizon) throw invalid_input("simulate_brownian: need 0 < step <= horizon");
    // floor() alone would drop the final step when horizon/step lands one ULP
    // below an integer (common for steps like 1/102), leaving the path short of
    // the horizon; nudge near-integer ratios up before truncating.
    const double ratio = horizon / step;
    const std::size_t steps = static_cast<std::size_t>(std::floor(ratio + 1e-9));
    BrownianPath path;
    path.step = step;
    path.values.resize(steps + 1);
    path.values[0] = 0.0;
    const double sd = std::sqrt(step);
    for (std::size_t i = 1; i <= steps; ++i) {
        path.values[i] = path.values[i - 1] + sd * rng.gaussian();
    }
    return path;
}

double draw_M(const BrownianPath& path, double t0) {
    if (path.values.size() < 2) throw invalid_input("draw_M: path too short");
    const double step = path.step;
    const std::size_t L = path.values.size() - 1;  // grid spans [0, L*step]
    if (std::fabs(L * step - 1.0) > 1e-9) throw invalid_input("draw_M: path horizon must be 1");
    const double idx_f = t0 / step;
    const std::size_t i0 = static_cast<std::size_t>(std::llround(idx_f));
    if (i0 == 0 || i0 >= L || std::fabs(idx_f - static_cast<double>(i0)) > 1e-9)
        throw invalid_input("draw_M: t0 must be a positive grid multiple below 1");

    const std::vector<double>& B = path.values;
    const double base = B[i0] / t0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t d = 1; d <= L - i0; ++d) {
        const double u = static_cast<double>(d) * step;
        const double su = std::sqrt(u);
        const double gam = std::sqrt(2.0 * (1.0 - std::log(u)));
        const double drift = su * base;
        const double inv_su = 1.0 / su;
        for (std::size_t s = i0; s + d <= L; ++s) {
            const double g = std::fabs(drift - (B[s + d] - B[s]) * inv_su) - gam;
            if (g > best) best = g;
        }
    }
    return best;
}

QuantileTable build_gaussian_quantile_table(double t0, double step, std::size_t replications,
                                            std::uint64_t seed) {
    if (replications < 100) throw invalid_input("gaussian quantile table needs >= 100 replications");
    QuantileTable table;
    table.label = TableLabel::gaussian_bound;
    table.draws.resize(replications);
    RngStream master(seed);
    parallel_for(replications, [&](std::size_t r) {
        RngStream sub = master.substream(r);
        BrownianPath path = simulate_brownian(step, 1.0, sub);
        table.draws[r] = draw_M(path, t0);
    });
    std::sort(table.draws.begin(), table.draws.end());
    return table;
}

double quantile(const QuantileTable& table, double level) {
    if (table.draws.empty()) throw invalid_input("quantile: empty table");
    if (!(level > 0.0) || !(level < 1.0)) throw invalid_input("quantile: level must be in (0,1)");
    const std::size_t N = table.draws.size();
    std::size_t idx = static_cast<std::size_t>(std::ceil(level * static_cast<double>(N)));
    if (idx < 1) idx = 1;
    if (idx > N) idx = N;
    return table.draws[idx - 1];
}

std::string quantile_table_cache_name(double t0, double step, std::size_t replications,
                                      std::uint64_t seed) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "gq_t0%.9g_s%.9g_r%zu_x%llu.csv", t0, step, replications,
                  static_cast<unsigned long long>(seed));
    return std::string(buf);
}

void save_quantile_table(const QuantileTable& table, const std::string& path) {
    std::ostringstream os;
    os.precision(17);
    os << (table.label == TableLabel::gaussian_bound ? "gaussian_bound" : "bootstrap") << "\n";
    for (double d : table.draws) os << d << "\n";
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw invalid_input("cannot write quantile cache: " + path);
    f << os.str();
}

bool load_quantile_table(const std::string& path, QuantileTable& out) {
    std::ifstream f(path);
    if (!f) return false;
    std::string label;
    if (!std::getline(f, label)) return false;
    QuantileTable t;
    t.label = (label == "bootstrap") ? TableLabel::bootstrap : TableLabel::gaussian_bound;
    double v;
    while (f >> v) t.draws.push_back(v);
    if (t.draws.empty() || !std::is_sorted(t.draws.begin(), t.draws.end())) return false;
    out = std::move(t);
    return true;
}

}  // namespace relscan
