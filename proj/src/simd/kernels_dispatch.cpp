#include "rpd/simd/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace rpd::simd {

bool avx2_available() {
#ifdef RPD_HAVE_AVX2
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

#ifndef RPD_HAVE_AVX2
const Backend& avx2_backend() { return scalar_backend(); }
#endif

namespace {

const Backend& select() {
    if (const char* env = std::getenv("RPD_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return scalar_backend();
        if (std::strcmp(env, "avx2") == 0 && avx2_available()) return avx2_backend();
    }
    return avx2_available() ? avx2_backend() : scalar_backend();
}

} // namespace

const Backend& active_backend() {
    static const Backend& chosen = select();
    return chosen;
}

} // namespace rpd::simd
