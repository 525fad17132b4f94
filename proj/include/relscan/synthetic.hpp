#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relscan/rng.hpp"
#include "relscan/series.hpp"

namespace relscan {

// x in [0,1] -> 10 + 0.5*sin(8*pi*x) + a*(x - 0.25)^2 * [x > 0.25]
double eval_mu_a(double x, double a);

// Curvature at which the sup-deviation of mu_a from its [0, 1/4] average
// equals exactly 1 at x = 1 (hand value used as a scenario anchor).
inline constexpr double kBoundaryCurvature = 128.0 / 81.0;

struct MeanSpec {
    enum class Kind { curved, constant, piecewise };

    Kind kind = Kind::curved;
    double a = 0.0;      // curvature of the curved family
    double level = 0.0;  // constant level
    // Piecewise-linear samples (x ascending in [0,1]); a repeated x encodes a
    // jump, with the right value taken on the closed-open interval that follows.
    std::vector<std::pair<double, double>> table;
    double t0 = 0.25;

    static MeanSpec curved(double a, double t0 = 0.25);
    static MeanSpec constant(double level, double t0 = 0.25);
    static MeanSpec piecewise(std::vector<std::pair<double, double>> samples, double t0 = 0.25);

    double operator()(double x) const;
};

enum class ErrorKind { iid, ma, ar };

ErrorKind error_kind_from_name(std::string_view name);
std::string error_kind_name(ErrorKind kind);

struct ErrorModel {
    ErrorKind kind = ErrorKind::iid;
    // Use the flawed published recursion eps_i = (sqrt(3)/4)*(eta_i + eps_{i-1}/2)
    // (marginal variance 12/61) instead of the variance-consistent default
    // eps_i = (sqrt(3)/4)*eta_i + eps_{i-1}/2 (marginal variance exactly 1/4).
    bool ar_as_printed = false;

    // Long-run variance of the default generators: 1/4, 9/20, 3/4.
    double true_lrv() const;
};

// Draws n error terms from the model, consuming the stream sequentially
// (deterministic given the stream state). The moving-average model draws one
// pre-sample innovation; the autoregressive model runs a 200-step burn-in.
std::vector<double> gen_errors(const ErrorModel& model, std::size_t n, RngStream& rng);

// x_i = mean(i/n) + eps_i for i = 1..n.
TimeSeries gen_series(const MeanSpec& mean, const ErrorModel& model, std::size_t n,
                      RngStream& rng);

// Average of the mean function over [0, t0] by adaptive quadrature (1e-10).
double oracle_baseline_mean(const MeanSpec& mean);

// sup_{t in [t0, 1]} |mean(t) - baseline average|: dense grid (1e5 cells)
// plus golden-section refinement to 1e-8.
double oracle_d_inf(const MeanSpec& mean);

// Smallest t in [t0, 1] with |mean(t) - baseline average| >= delta, refined
// to better than 1e-6; nullopt when the deviation never reaches delta.
std::optional<double> oracle_t_star(const MeanSpec& mean, double delta);

}  // namespace relscan
