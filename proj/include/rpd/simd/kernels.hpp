#ifndef RPD_SIMD_KERNELS_HPP
#define RPD_SIMD_KERNELS_HPP

#include <cstddef>
#include <cstdint>

// Batch kernels for the Monte Carlo inner loops. Each kernel exists as a
// scalar reference implementation and, on x86-64, an AVX2 variant that is
// bit-identical to it (the equivalence suite in tests/test_simd.cpp asserts
// byte equality). active_backend() picks the widest variant the CPU supports;
// RPD_SIMD=scalar or RPD_SIMD=avx2 in the environment forces a choice.

namespace rpd::simd {

struct Backend {
    const char* name;

    // out[i] = raw_at(seed, idx0 + i): consecutive draws of one stream.
    void (*raw_batch)(uint64_t seed, int64_t idx0, std::size_t n, uint64_t* out);

    // out[i] = uniform_at(seed, idx0 + i).
    void (*uniform_batch)(uint64_t seed, int64_t idx0, std::size_t n, double* out);

    // out[i] = uniform_at(seeds[i], idx): one time index across an ensemble.
    void (*uniform_gather)(const uint64_t* seeds, std::size_t n, int64_t idx, double* out);

    // x[i] <- logistic_step_one(x[i], u[i], lam, mu, p).
    void (*logistic_step)(double* x, const double* u, std::size_t n,
                          double lam, double mu, double p);

    // x[i] <- ou_step_one(x[i], z[i], h, drive, sig_sqrt_h).
    void (*ou_step)(double* x, const double* z, std::size_t n,
                    double h, double drive, double sig_sqrt_h);
};

const Backend& scalar_backend();

bool avx2_available();          // compiled in and supported by this CPU
const Backend& avx2_backend();  // valid only when avx2_available()

const Backend& active_backend();

} // namespace rpd::simd

#endif // RPD_SIMD_KERNELS_HPP
