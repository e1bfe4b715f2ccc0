// AVX2 variants of the batch kernels. Compiled with -mavx2 (see CMakeLists);
// every arithmetic step mirrors the scalar reference in rpd/simd/ops.hpp so
// results are bit-identical lane by lane. No FMA intrinsics on purpose: the
// scalar side compiles with -ffp-contract=off, so mul/add must stay separate.

#include "rpd/simd/kernels.hpp"
#include "rpd/simd/ops.hpp"

#ifdef RPD_HAVE_AVX2

#include <immintrin.h>

namespace rpd::simd {
namespace {

// 64x64 -> low 64 multiply from 32-bit partial products (AVX2 has no
// _mm256_mullo_epi64).
inline __m256i mullo64(__m256i a, __m256i b) {
    const __m256i a_hi = _mm256_srli_epi64(a, 32);
    const __m256i b_hi = _mm256_srli_epi64(b, 32);
    const __m256i lolo = _mm256_mul_epu32(a, b);
    const __m256i lohi = _mm256_mul_epu32(a, b_hi);
    const __m256i hilo = _mm256_mul_epu32(a_hi, b);
    const __m256i cross = _mm256_add_epi64(lohi, hilo);
    return _mm256_add_epi64(lolo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix64_v(__m256i z) {
    z = mullo64(_mm256_xor_si256(z, _mm256_srli_epi64(z, 30)),
                _mm256_set1_epi64x(INT64_C(0xBF58476D1CE4E5B9)));
    z = mullo64(_mm256_xor_si256(z, _mm256_srli_epi64(z, 27)),
                _mm256_set1_epi64x(INT64_C(0x94D049BB133111EB)));
    return _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
}

// Exact double(z >> 12) via the 2^52 exponent trick, then the same exact
// multiply/add as uniform_from_raw.
inline __m256d uniform_v(__m256i raw) {
    const __m256i mant = _mm256_srli_epi64(raw, 12);
    const __m256i magic = _mm256_set1_epi64x(INT64_C(0x4330000000000000));
    const __m256d as_double =
        _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(mant, magic)),
                      _mm256_set1_pd(0x1.0p52));
    return _mm256_add_pd(_mm256_mul_pd(as_double, _mm256_set1_pd(0x1.0p-52)),
                         _mm256_set1_pd(0x1.0p-53));
}

inline __m256i counter_state(uint64_t seed, __m256i idx) {
    // seed + kGolden * (idx + 1), matching raw_at.
    const __m256i idx1 = _mm256_add_epi64(idx, _mm256_set1_epi64x(1));
    return _mm256_add_epi64(_mm256_set1_epi64x(static_cast<int64_t>(seed)),
                            mullo64(idx1, _mm256_set1_epi64x(static_cast<int64_t>(kGolden))));
}

void raw_batch_avx2(uint64_t seed, int64_t idx0, std::size_t n, uint64_t* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i idx = _mm256_add_epi64(
            _mm256_set1_epi64x(idx0 + static_cast<int64_t>(i)),
            _mm256_setr_epi64x(0, 1, 2, 3));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i),
                            mix64_v(counter_state(seed, idx)));
    }
    for (; i < n; ++i)
        out[i] = raw_at(seed, idx0 + static_cast<int64_t>(i));
}

void uniform_batch_avx2(uint64_t seed, int64_t idx0, std::size_t n, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i idx = _mm256_add_epi64(
            _mm256_set1_epi64x(idx0 + static_cast<int64_t>(i)),
            _mm256_setr_epi64x(0, 1, 2, 3));
        _mm256_storeu_pd(out + i, uniform_v(mix64_v(counter_state(seed, idx))));
    }
    for (; i < n; ++i)
        out[i] = uniform_at(seed, idx0 + static_cast<int64_t>(i));
}

void uniform_gather_avx2(const uint64_t* seeds, std::size_t n, int64_t idx, double* out) {
    const __m256i step = mullo64(_mm256_set1_epi64x(idx + 1),
                                 _mm256_set1_epi64x(static_cast<int64_t>(kGolden)));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(seeds + i));
        _mm256_storeu_pd(out + i, uniform_v(mix64_v(_mm256_add_epi64(s, step))));
    }
    for (; i < n; ++i)
        out[i] = uniform_at(seeds[i], idx);
}

void logistic_step_avx2(double* x, const double* u, std::size_t n,
                        double lam, double mu, double p) {
    const __m256d vlam = _mm256_set1_pd(lam);
    const __m256d vmu = _mm256_set1_pd(mu);
    const __m256d vp = _mm256_set1_pd(p);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        const __m256d uv = _mm256_loadu_pd(u + i);
        const __m256d take_lam = _mm256_cmp_pd(uv, vp, _CMP_LT_OQ);
        const __m256d eta = _mm256_blendv_pd(vmu, vlam, take_lam);
        // (eta * x) * (1 - x), same association as logistic_step_one
        const __m256d result =
            _mm256_mul_pd(_mm256_mul_pd(eta, xv), _mm256_sub_pd(one, xv));
        _mm256_storeu_pd(x + i, result);
    }
    for (; i < n; ++i)
        x[i] = logistic_step_one(x[i], u[i], lam, mu, p);
}

void ou_step_avx2(double* x, const double* z, std::size_t n,
                  double h, double drive, double sig_sqrt_h) {
    const __m256d vh = _mm256_set1_pd(h);
    const __m256d vdrive = _mm256_set1_pd(drive);
    const __m256d vs = _mm256_set1_pd(sig_sqrt_h);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        const __m256d zv = _mm256_loadu_pd(z + i);
        // (x + h * (drive - x)) + s * z, same association as ou_step_one
        const __m256d relaxed =
            _mm256_add_pd(xv, _mm256_mul_pd(vh, _mm256_sub_pd(vdrive, xv)));
        _mm256_storeu_pd(x + i, _mm256_add_pd(relaxed, _mm256_mul_pd(vs, zv)));
    }
    for (; i < n; ++i)
        x[i] = ou_step_one(x[i], z[i], h, drive, sig_sqrt_h);
}

} // namespace

const Backend& avx2_backend() {
    static const Backend backend{
        "avx2",
        raw_batch_avx2,
        uniform_batch_avx2,
        uniform_gather_avx2,
        logistic_step_avx2,
        ou_step_avx2,
    };
    return backend;
}

} // namespace rpd::simd

#endif // RPD_HAVE_AVX2
