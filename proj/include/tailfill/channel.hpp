#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tailfill/config.hpp"
#include "tailfill/errors.hpp"

namespace tailfill {

// One realization of the per-user channel gain vector; every entry is > 0.
struct FadingSample {
    std::vector<double> gains;
};

namespace detail {

// SplitMix64 finalizer (Steele, Lea & Flood). Bijective avalanche mix.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ull;

}  // namespace detail

/// Counter-based uniform generator with independent substreams.
///
/// Draw k of stream s is mix64(base_s + (k+1) * golden_gamma) with
/// base_s = mix64(seed + (s+1) * golden_gamma); the value of a draw is a pure
/// function of (seed, stream, k), so sequences are reproducible from the seed
/// alone and identical regardless of how other streams interleave.
class RngState {
  public:
    RngState(std::uint64_t seed, std::size_t stream_count)
        : seed_(seed), counters_(stream_count, 0) {
        bases_.reserve(stream_count);
        for (std::size_t s = 0; s < stream_count; ++s)
            bases_.push_back(detail::mix64(seed + (std::uint64_t(s) + 1) * detail::golden_gamma));
    }

    std::uint64_t next_raw(std::size_t stream) {
        std::uint64_t k = ++counters_[stream];
        return detail::mix64(bases_[stream] + k * detail::golden_gamma);
    }

    // Uniform on [0,1) with 53-bit resolution.
    double next_unit(std::size_t stream) {
        return double(next_raw(stream) >> 11) * 0x1.0p-53;
    }

    std::uint64_t seed() const { return seed_; }
    std::size_t stream_count() const { return counters_.size(); }

  private:
    std::uint64_t seed_;
    std::vector<std::uint64_t> bases_;
    std::vector<std::uint64_t> counters_;
};

/// Inverse CDF of the Rayleigh law: scale * sqrt(-2 ln(1-q)).
inline double rayleigh_quantile(double q, double scale) {
    if (!(q > 0.0 && q < 1.0)) throw QOutOfRange(q);
    return scale * std::sqrt(-2.0 * std::log1p(-q));
}

inline double rayleigh_cdf(double x, double scale) {
    if (x <= 0.0) return 0.0;
    double z = x / scale;
    return -std::expm1(-0.5 * z * z);
}

inline double rayleigh_mean(double scale) {
    return scale * std::sqrt(std::acos(-1.0) / 2.0);
}

/// Draws one gain per user, Rayleigh with that user's fading scale,
/// independent across users and calls. The measure-zero exact-zero draw is
/// resampled so gains are strictly positive.
inline FadingSample sample_fading(const NetworkConfig& network, RngState& rng) {
    FadingSample s;
    s.gains.reserve(network.users.size());
    for (std::size_t i = 0; i < network.users.size(); ++i) {
        double h = 0.0;
        do {
            double u = rng.next_unit(i);
            h = network.users[i].fading_scale * std::sqrt(-2.0 * std::log1p(-u));
        } while (h == 0.0);
        s.gains.push_back(h);
    }
    return s;
}

}  // namespace tailfill
