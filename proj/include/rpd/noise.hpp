#ifndef RPD_NOISE_HPP
#define RPD_NOISE_HPP

#include <cstdint>

#include "rpd/simd/ops.hpp"

namespace rpd {

/// Inverse of the standard normal CDF, accurate to ~1e-15 (rational
/// approximation plus one Halley refinement against erfc). Domain (0,1).
double inverse_normal_cdf(double p);

/** \brief Counter-based noise source indexed by absolute time.
 *
 * The symbol at relative index k is a pure function of (seed, origin + k),
 * so the shift theta(n) is plain re-indexing: shifted(n).uniform(k) equals
 * uniform(n + k) bit for bit, for any integers n and k, negative included.
 * This is what makes pull-back over theta(-k tau) exact rather than a
 * replay of a sequential generator.
 */
struct NoiseStream {
    uint64_t seed = 0;
    int64_t origin = 0;

    uint64_t raw(int64_t k) const { return simd::raw_at(seed, origin + k); }

    /// Uniform symbol in the open interval (0,1).
    double uniform(int64_t k) const { return simd::uniform_at(seed, origin + k); }

    /// Standard normal symbol; one index per draw.
    double normal(int64_t k) const { return inverse_normal_cdf(uniform(k)); }

    NoiseStream shifted(int64_t n) const { return NoiseStream{seed, origin + n}; }
};

/// Derive the i-th member seed of an ensemble from a master seed.
/// Deterministic, collision-free in i for fixed master.
inline uint64_t derive_seed(uint64_t master, uint64_t i) {
    return simd::mix64(master + simd::kGolden * (i + 1)) ^ simd::mix64(master);
}

/// Deterministic auxiliary draw (phase choices etc.) that does not touch the
/// stream's time-indexed symbols.
inline uint64_t aux_draw(uint64_t seed, uint64_t salt) {
    return simd::mix64(seed ^ simd::mix64(salt + UINT64_C(0xA0761D6478BD642F)));
}

} // namespace rpd

#endif // RPD_NOISE_HPP
