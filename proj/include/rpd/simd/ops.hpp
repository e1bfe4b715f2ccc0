#ifndef RPD_SIMD_OPS_HPP
#define RPD_SIMD_OPS_HPP

#include <cstdint>

// Single-step scalar definitions shared by the scalar reference kernels and
// every non-batch code path. The AVX2 kernels replicate these operation for
// operation so that lane results are bit-identical to the scalar ones; keep
// the expression shapes in sync with src/simd/kernels_avx2.cpp when editing.
// The whole project builds with -ffp-contract=off for the same reason.

namespace rpd::simd {

// SplitMix64 finalizer (Steele/Lea/Flood; Vigna's fixed-increment variant).
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
    return z ^ (z >> 31);
}

constexpr uint64_t kGolden = UINT64_C(0x9E3779B97F4A7C15);

// Counter-based draw: the value of stream `seed` at absolute index `idx`.
inline uint64_t raw_at(uint64_t seed, int64_t idx) {
    return mix64(seed + kGolden * (static_cast<uint64_t>(idx) + 1));
}

// Map a raw 64-bit word to the open interval (0,1): midpoints of a 2^52 grid.
// Both the multiply and the add are exact, so SIMD conversion can match bit
// for bit.
inline double uniform_from_raw(uint64_t z) {
    return static_cast<double>(z >> 12) * 0x1.0p-52 + 0x1.0p-53;
}

inline double uniform_at(uint64_t seed, int64_t idx) {
    return uniform_from_raw(raw_at(seed, idx));
}

// One step of the random logistic map x <- eta x (1-x), eta chosen by the
// uniform symbol u.
inline double logistic_step_one(double x, double u, double lam, double mu, double p) {
    const double eta = u < p ? lam : mu;
    return eta * x * (1.0 - x);
}

// One Euler-Maruyama step of dX = (drive - X) dt + sigma dW on a grid of
// width h; z is a standard normal symbol and sig_sqrt_h = sigma * sqrt(h).
inline double ou_step_one(double x, double z, double h, double drive, double sig_sqrt_h) {
    return x + h * (drive - x) + sig_sqrt_h * z;
}

} // namespace rpd::simd

#endif // RPD_SIMD_OPS_HPP
