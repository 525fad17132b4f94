#include "relscan/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "relscan/errors.hpp"

namespace relscan {

double eval_mu_a(double x, double a) {
    double v = 10.0 + 0.5 * std::sin(8.0 * std::numbers::pi * x);
    if (x > 0.25) {
        const double d = x - 0.25;
        v += a * d * d;
    }
    return v;
}

MeanSpec MeanSpec::curved(double a, double t0) {
    MeanSpec m;
    m.kind = Kind::curved;
    m.a = a;
    m.t0 = t0;
    return m;
}

MeanSpec MeanSpec::constant(double level, double t0) {
    MeanSpec m;
    m.kind = Kind::constant;
    m.level = level;
    m.t0 = t0;
    return m;
}

MeanSpec MeanSpec::piecewise(std::vector<std::pair<double, double>> samples, double t0) {
    if (samples.size() < 2) throw invalid_input("piecewise mean needs at least two samples");
    if (!std::is_sorted(samples.begin(), samples.end(),
                        [](const auto& p, const auto& q) { return p.first < q.first; }))
        throw invalid_input("piecewise mean samples must have ascending x");
    MeanSpec m;
    m.kind = Kind::piecewise;
    m.table = std::move(samples);
    m.t0 = t0;
    return m;
}

double MeanSpec::operator()(double x) const {
    switch (kind) {
        case Kind::curved:
            return eval_mu_a(x, a);
        case Kind::constant:
            return level;
        case Kind::piecewise: {
            if (x <= table.front().first) return table.front().second;
            if (x >= table.back().first) return table.back().second;
            // First sample with x_i > x; the segment [i-1, i] brackets x. A
            // repeated x makes the segment width zero and the right value wins.
            auto it = std::upper_bound(
                table.begin(), table.end(), x,
                [](double v, const auto& p) { return v < p.first; });
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            const double w = hi.first - lo.first;
            if (w <= 0.0) return hi.second;
            const double f = (x - lo.first) / w;
            return lo.second + f * (hi.second - lo.second);
        }
    }
    throw invalid_input("unknown mean kind");
}

ErrorKind error_kind_from_name(std::string_view name) {
    if (name == "iid") return ErrorKind::iid;
    if (name == "ma") return ErrorKind::ma;
    if (name == "ar") return ErrorKind::ar;
    throw invalid_input("unknown error model: " + std::string(name));
}

std::string error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::iid: return "iid";
        case ErrorKind::ma: return "ma";
        case ErrorKind::ar: return "ar";
    }
    throw invalid_input("unknown error model");
}

double ErrorModel::true_lrv() const {
    switch (kind) {
        case ErrorKind::iid: return 0.25;
        case ErrorKind::ma: return 0.45;
        case ErrorKind::ar: return 0.75;
    }
    throw invalid_input("unknown error model");
}

std::vector<double> gen_errors(const ErrorModel& model, std::size_t n, RngStream& rng) {
    std::vector<double> eps(n);
    switch (model.kind) {
        case ErrorKind::iid: {
            for (std::size_t i = 0; i < n; ++i) eps[i] = 0.5 * rng.gaussian();
            break;
        }
        case ErrorKind::ma: {
            const double inv_sqrt5 = 1.0 / std::sqrt(5.0);
            double prev = rng.gaussian();  // pre-sample innovation
            for (std::size_t i = 0; i < n; ++i) {
                const double eta = rng.gaussian();
                eps[i] = (eta + 0.5 * prev) * inv_sqrt5;
                prev = eta;
            }
            break;
        }
        case ErrorKind::ar: {
            const double coef = std::sqrt(3.0) / 4.0;
            constexpr std::size_t burn_in = 200;
            double e = 0.0;
            for (std::size_t i = 0; i < burn_in + n; ++i) {
                const double eta = rng.gaussian();
                e = model.ar_as_printed ? coef * (eta + 0.5 * e) : coef * eta + 0.5 * e;
                if (i >= burn_in) eps[i - burn_in] = e;
            }
            break;
        }
    }
    return eps;
}

TimeSeries gen_series(const MeanSpec& mean, const ErrorModel& model, std::size_t n,
                      RngStream& rng) {
    if (n == 0) throw invalid_input("series length must be positive");
    std::vector<double> eps = gen_errors(model, n, rng);
    TimeSeries x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = mean(static_cast<double>(i + 1) / static_cast<double>(n)) + eps[i];
    return x;
}

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double err = left + right - whole;
    if (depth <= 0 || std::fabs(err) <= 15.0 * tol)
        return left + right + err / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = simpson(a, b, fa, fm, fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 60);
}

// Maximize g on [lo, hi] by golden-section search; returns the argmax.
template <typename F>
double golden_max(const F& g, double lo, double hi, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double g1 = g(x1), g2 = g(x2);
    while (b - a > tol) {
        if (g1 < g2) {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + inv_phi * (b - a);
            g2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - inv_phi * (b - a);
            g1 = g(x1);
        }
    }
    return 0.5 * (a + b);
}

constexpr std::size_t kGridCells = 100000;

}  // namespace

double oracle_baseline_mean(const MeanSpec& mean) {
    if (!(mean.t0 > 0.0 && mean.t0 < 1.0)) throw invalid_input("t0 must be in (0, 1)");
    const double integral = integrate([&](double x) { return mean(x); }, 0.0, mean.t0, 1e-10);
    return integral / mean.t0;
}

double oracle_d_inf(const MeanSpec& mean) {
    const double mu0 = oracle_baseline_mean(mean);
    const auto g = [&](double t) { return std::fabs(mean(t) - mu0); };
    const double t0 = mean.t0;
    const double width = (1.0 - t0) / static_cast<double>(kGridCells);
    double best = g(t0);
    std::size_t best_i = 0;
    for (std::size_t i = 1; i <= kGridCells; ++i) {
        const double v = g(t0 + static_cast<double>(i) * width);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    const double lo = t0 + (best_i > 0 ? static_cast<double>(best_i - 1) : 0.0) * width;
    const double hi = std::min(1.0, t0 + static_cast<double>(best_i + 1) * width);
    return g(golden_max(g, lo, hi, 1e-8));
}

std::optional<double> oracle_t_star(const MeanSpec& mean, double delta) {
    if (!(delta >= 0.0)) throw invalid_input("delta must be non-negative");
    const double mu0 = oracle_baseline_mean(mean);
    const auto g = [&](double t) { return std::fabs(mean(t) - mu0); };
    const double t0 = mean.t0;
    const double width = (1.0 - t0) / static_cast<double>(kGridCells);
    std::size_t hit = kGridCells + 1;
    for (std::size_t i = 0; i <= kGridCells; ++i) {
        if (g(t0 + static_cast<double>(i) * width) >= delta) {
            hit = i;
            break;
        }
    }
    if (hit > kGridCells) return std::nullopt;
    if (hit == 0) return t0;
    // Bisect the crossing inside the grid cell: g(lo) < delta <= g(hi).
    double lo = t0 + static_cast<double>(hit - 1) * width;
    double hi = t0 + static_cast<double>(hit) * width;
    for (int it = 0; it < 80 && hi - lo > 1e-9; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) >= delta) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace relscan
