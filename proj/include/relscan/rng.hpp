#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace relscan {

// splitmix64: used to expand one user seed into well-separated stream seeds.
// Keeping this explicit (rather than seed_seq) makes substream derivation a
// documented, stable function of (seed, indices) across platforms.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic Gaussian stream. mt19937_64 + explicit Box-Muller so that
// sequences are bit-identical everywhere (std::normal_distribution is
// implementation-defined). Substreams derived from (seed, index...) are
// independent for all practical purposes and stable by construction.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : engine_(mix_(seed)) {}

    std::uint64_t raw() { return engine_(); }

    // uniform in (0,1]: (x >> 11) + 1 scaled by 2^-53; never 0, so log() below is safe
    double uniform01() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    // Child stream for work item `index` (replication, cell, ...). Children of
    // distinct indices never share state with each other or the parent.
    RngStream substream(std::uint64_t index) const {
        std::uint64_t s = seed_material_ ^ (0xd1342543de82ef95ULL * (index + 1));
        std::uint64_t a = splitmix64(s);
        std::uint64_t b = splitmix64(s);
        return RngStream(a ^ (b << 1), from_material{});
    }

    RngStream substream(std::uint64_t i, std::uint64_t j) const {
        return substream(i).substream(j);
    }

  private:
    struct from_material {};
    RngStream(std::uint64_t material, from_material) : engine_(mix_(material)) {}

    std::uint64_t mix_(std::uint64_t seed) {
        seed_material_ = seed;
        std::uint64_t s = seed;
        return splitmix64(s);
    }

    std::uint64_t seed_material_ = 0;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace relscan
