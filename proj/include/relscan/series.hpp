#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "relscan/errors.hpp"

namespace relscan {

using TimeSeries = std::vector<double>;

// Baseline window [0, t0]: k0 = floor(n*t0) observations form the
// historical reference. Validated once, passed around by value.
struct BaselineSpec {
    std::size_t n = 0;
    double t0 = 0.0;
    std::size_t k0 = 0;

    static BaselineSpec make(std::size_t n, double t0) {
        if (n < 2) throw invalid_input("series too short (n < 2)");
        if (!(t0 > 0.0) || !(t0 < 1.0)) throw invalid_input("t0 must be in (0,1)");
        BaselineSpec s;
        s.n = n;
        s.t0 = t0;
        s.k0 = static_cast<std::size_t>(std::floor(static_cast<double>(n) * t0));
        if (s.k0 < 1) throw invalid_input("t0 too small for n: baseline window is empty");
        if (s.k0 >= n) throw invalid_input("t0 too large for n: no observations after baseline");
        return s;
    }

    // Exact construction from a row count (no floating-point floor involved),
    // for inputs specified as "the first k0 rows are the baseline".
    static BaselineSpec from_k0(std::size_t n, std::size_t k0) {
        if (n < 2) throw invalid_input("series too short (n < 2)");
        if (k0 < 1) throw invalid_input("baseline cutoff must keep at least one row");
        if (k0 >= n) throw invalid_input("baseline cutoff must leave observations after it");
        BaselineSpec s;
        s.n = n;
        s.t0 = static_cast<double>(k0) / static_cast<double>(n);
        s.k0 = k0;
        return s;
    }
};

// Prefix sums P[i] = x_1 + ... + x_i (P[0] = 0). Window means in O(1).
// Indexing follows the 1-based math convention: window (j,k] = x_{j+1}..x_k.
class PrefixSums {
  public:
    explicit PrefixSums(const TimeSeries& x) : p_(x.size() + 1, 0.0) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(x[i])) throw invalid_input("non-finite value in series");
            p_[i + 1] = p_[i] + x[i];
        }
    }

    std::size_t n() const { return p_.size() - 1; }

    // mean of x_{j+1}..x_k
    double local_mean(std::size_t j, std::size_t k) const {
        if (!(j < k) || k > n()) throw invalid_input("invalid window (j,k]");
        return (p_[k] - p_[j]) / static_cast<double>(k - j);
    }

    double sum(std::size_t j, std::size_t k) const { return p_[k] - p_[j]; }

  private:
    std::vector<double> p_;
};

inline double baseline_mean(const PrefixSums& prefix, const BaselineSpec& spec) {
    if (spec.k0 < 1) throw invalid_input("baseline window empty");
    return prefix.local_mean(0, spec.k0);
}

}  // namespace relscan
