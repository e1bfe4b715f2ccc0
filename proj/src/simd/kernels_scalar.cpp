#include "rpd/simd/kernels.hpp"
#include "rpd/simd/ops.hpp"

namespace rpd::simd {
namespace {

void raw_batch_scalar(uint64_t seed, int64_t idx0, std::size_t n, uint64_t* out) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = raw_at(seed, idx0 + static_cast<int64_t>(i));
}

void uniform_batch_scalar(uint64_t seed, int64_t idx0, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = uniform_at(seed, idx0 + static_cast<int64_t>(i));
}

void uniform_gather_scalar(const uint64_t* seeds, std::size_t n, int64_t idx, double* out) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = uniform_at(seeds[i], idx);
}

void logistic_step_scalar(double* x, const double* u, std::size_t n,
                          double lam, double mu, double p) {
    for (std::size_t i = 0; i < n; ++i)
        x[i] = logistic_step_one(x[i], u[i], lam, mu, p);
}

void ou_step_scalar(double* x, const double* z, std::size_t n,
                    double h, double drive, double sig_sqrt_h) {
    for (std::size_t i = 0; i < n; ++i)
        x[i] = ou_step_one(x[i], z[i], h, drive, sig_sqrt_h);
}

} // namespace

const Backend& scalar_backend() {
    static const Backend backend{
        "scalar",
        raw_batch_scalar,
        uniform_batch_scalar,
        uniform_gather_scalar,
        logistic_step_scalar,
        ou_step_scalar,
    };
    return backend;
}

} // namespace rpd::simd
