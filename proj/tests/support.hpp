#ifndef RPD_TESTS_SUPPORT_HPP
#define RPD_TESTS_SUPPORT_HPP

// Shared helpers for the test suites: deterministic random kernels and the
// independent oracles (boolean-matrix period, power-iteration subdominant
// eigenvalue) that the implementation results are checked against. Oracles
// deliberately avoid the library's own code paths.

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "rpd/markov.hpp"
#include "rpd/simd/ops.hpp"

namespace rpdtest {

inline double u01(uint64_t seed, int64_t k) { return rpd::simd::uniform_at(seed, k); }

/// Strictly positive random row-stochastic matrix.
inline Eigen::MatrixXd random_dense_kernel(uint64_t seed, int n) {
    Eigen::MatrixXd m(n, n);
    int64_t k = 0;
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            m(i, j) = 0.05 + u01(seed, k++);
            sum += m(i, j);
        }
        m.row(i) /= sum;
    }
    return m;
}

/// Random kernel with a random zero pattern (every row keeps at least one
/// transition).
inline Eigen::MatrixXd random_pattern_kernel(uint64_t seed, int n, double keep = 0.45) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    int64_t k = 0;
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (u01(seed, k++) < keep) {
                m(i, j) = 0.1 + u01(seed, k++);
                sum += m(i, j);
            }
        }
        if (sum == 0.0) {
            const int j = static_cast<int>(rpd::simd::raw_at(seed, k++) % n);
            m(i, j) = 1.0;
            sum = 1.0;
        }
        m.row(i) /= sum;
    }
    return m;
}

/// Block-cyclic kernel with d blocks of the given size: mass from block r
/// goes entirely to block r+1 with random positive weights.
inline Eigen::MatrixXd random_cyclic_kernel(uint64_t seed, int d, int block) {
    const int n = d * block;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    int64_t k = 0;
    for (int r = 0; r < d; ++r)
        for (int a = 0; a < block; ++a) {
            const int i = r * block + a;
            double sum = 0.0;
            for (int b = 0; b < block; ++b) {
                const int j = ((r + 1) % d) * block + b;
                m(i, j) = 0.05 + u01(seed, k++);
                sum += m(i, j);
            }
            for (int b = 0; b < block; ++b) m(i, ((r + 1) % d) * block + b) /= sum;
        }
    return m;
}

/// Brute-force period oracle: gcd of { t <= t_max : (adj^t)(i,i) }, via
/// boolean matrix powers.
inline std::optional<int> brute_force_period(const rpd::TransitionKernel& kernel,
                                             int state, int t_max) {
    const int n = kernel.n_states();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) adj[i][j] = kernel.edge(i, j);
    std::vector<std::vector<char>> power = adj;
    int g = 0;
    for (int t = 1; t <= t_max; ++t) {
        if (power[state][state]) g = std::gcd(g, t);
        if (t < t_max) {
            std::vector<std::vector<char>> next(n, std::vector<char>(n, 0));
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k)
                    if (power[i][k])
                        for (int j = 0; j < n; ++j)
                            if (adj[k][j]) next[i][j] = 1;
            power.swap(next);
        }
    }
    if (g == 0) return std::nullopt;
    return g;
}

/// Power iteration on the zero-sum subspace: estimates the subdominant
/// eigenvalue modulus of a stochastic matrix (the invariant direction is
/// orthogonal to zero-sum row vectors).
inline double subdominant_modulus(const Eigen::MatrixXd& kernel, int iters = 400) {
    const int n = static_cast<int>(kernel.rows());
    Eigen::RowVectorXd v(n);
    for (int j = 0; j < n; ++j) v[j] = u01(0xACE5, j) - 0.5;
    v.array() -= v.mean(); // zero-sum, preserved by v -> v P
    v /= v.norm();
    double log_acc = 0.0;
    int counted = 0;
    for (int it = 0; it < iters; ++it) {
        v = v * kernel;
        const double norm = v.norm();
        if (norm == 0.0) return 0.0;
        if (it >= iters / 2) {
            log_acc += std::log(norm);
            ++counted;
        }
        v /= norm;
    }
    return std::exp(log_acc / counted);
}

} // namespace rpdtest

#endif // RPD_TESTS_SUPPORT_HPP
