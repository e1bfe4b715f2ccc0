#ifndef RPD_RDS_HPP
#define RPD_RDS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "rpd/markov.hpp"
#include "rpd/noise.hpp"
#include "rpd/parallel.hpp"
#include "rpd/simd/kernels.hpp"
#include "rpd/simd/ops.hpp"

namespace rpd {

// A cocycle system provides:
//   using State = ...;
//   State step(State x, const Noise& w, int64_t k) const;   // one time step,
//       consuming exactly the symbol at index k, nothing else
//   double distance(State, State) const;
//   int period() const;                                     // tau in steps
//   State default_start() const;                            // phase-0 start
// Because steps are tied to absolute noise indices, the cocycle identity
// holds structurally and the shift theta is exact re-indexing.

/** \brief Random dynamical system of a finite Markov chain: the next state is
 * drawn from row P(x,.) by inverse CDF on the uniform symbol. */
class ChainRds {
public:
    using State = int;

    explicit ChainRds(const TransitionKernel& kernel);

    template <class Noise>
    State step(State x, const Noise& w, int64_t k) const {
        const double u = w.uniform(k);
        const double* row = cdf_.data() + static_cast<size_t>(x) * static_cast<size_t>(n_);
        for (int j = 0; j < n_ - 1; ++j)
            if (u < row[j]) return j;
        return n_ - 1;
    }

    double distance(State a, State b) const { return a == b ? 0.0 : 1.0; }
    int period() const { return tau_; }
    State default_start() const { return anchor_; }
    int n_states() const { return n_; }
    const CyclicDecomposition& decomposition() const { return dec_; }

private:
    int n_;
    int tau_;
    int anchor_; // lowest recurrent state: phase origin of C_0
    std::vector<double> cdf_;
    CyclicDecomposition dec_;
};

/** \brief Random logistic map x -> eta x (1-x) with eta in {lambda, mu},
 * P(eta = lambda) = p, independently per step. Period 2 in the regime of
 * interest. */
class RandomLogistic {
public:
    using State = double;

    RandomLogistic(double lambda, double mu, double p);

    template <class Noise>
    State step(State x, const Noise& w, int64_t k) const {
        return simd::logistic_step_one(x, w.uniform(k), lambda_, mu_, p_);
    }

    double distance(State a, State b) const { return std::abs(a - b); }
    int period() const { return 2; }
    State default_start() const { return 0.5; }

    double lambda() const { return lambda_; }
    double mu() const { return mu_; }
    double p() const { return p_; }

private:
    double lambda_, mu_, p_;
};

ChainRds make_chain_rds(const TransitionKernel& kernel);
RandomLogistic make_random_logistic(double lambda, double mu, double p);

// ---------------------------------------------------------------------------
// Trajectories and pull-back
// ---------------------------------------------------------------------------

/// Trajectory x0, Phi_1 x0, ..., Phi_n x0 consuming noise indices 0..n-1
/// relative to the stream.
template <class Sys, class Noise>
std::vector<typename Sys::State> iterate(const Sys& sys, const Noise& w,
                                         typename Sys::State x0, int64_t n) {
    std::vector<typename Sys::State> path;
    path.reserve(static_cast<size_t>(n) + 1);
    path.push_back(x0);
    typename Sys::State x = x0;
    for (int64_t k = 0; k < n; ++k) {
        x = sys.step(x, w, k);
        path.push_back(x);
    }
    return path;
}

template <class State>
struct PullbackResult {
    State value{};
    int iterations_used = 0;
    bool converged = false;
    double final_gap = std::numeric_limits<double>::infinity();
};

struct PullbackOptions {
    int k_max = 500;
    double tol = 1e-10;
};

/// a_k = Phi(k tau + s, theta(-k tau) omega) y, consuming noise indices
/// -k tau .. s-1; stops at the first k with d(a_{k-1}, a_k) <= tol.
/// Start y should lie in the phase-0 section so the limit samples rho_s.
/// Non-convergence is reported in the result, not thrown.
template <class Sys, class Noise>
PullbackResult<typename Sys::State> pullback_limit(const Sys& sys, const Noise& w,
                                                   typename Sys::State y, int s,
                                                   const PullbackOptions& opts = {}) {
    const int tau = sys.period();
    PullbackResult<typename Sys::State> out;
    typename Sys::State prev{};
    for (int k = 1; k <= opts.k_max; ++k) {
        typename Sys::State a = y;
        for (int64_t t = -static_cast<int64_t>(k) * tau; t < s; ++t)
            a = sys.step(a, w, t);
        if (k > 1) {
            const double gap = sys.distance(prev, a);
            out.value = a;
            out.iterations_used = k;
            out.final_gap = gap;
            if (gap <= opts.tol) {
                out.converged = true;
                return out;
            }
        }
        prev = a;
    }
    return out;
}

template <class State>
struct EnsembleResult {
    std::vector<State> values;                    // converged limits, seed order
    std::vector<PullbackResult<State>> details;   // one per seed
    int n_failed = 0;
};

/// Independent pull-back limits across derived seeds: an i.i.d. sample of
/// Y(s, .), whose empirical law estimates rho_s. Throws TooManyFailures when
/// more than 10% of the seeds fail to converge.
template <class Sys>
EnsembleResult<typename Sys::State> sample_random_periodic_ensemble(
    const Sys& sys, int s, int n_seeds, uint64_t master_seed,
    const PullbackOptions& opts = {}) {
    EnsembleResult<typename Sys::State> out;
    out.details.resize(static_cast<size_t>(n_seeds));
    parallel_for(n_seeds, [&](int64_t i) {
        const NoiseStream w{derive_seed(master_seed, static_cast<uint64_t>(i)), 0};
        out.details[static_cast<size_t>(i)] =
            pullback_limit(sys, w, sys.default_start(), s, opts);
    });
    for (const auto& r : out.details) {
        if (r.converged)
            out.values.push_back(r.value);
        else
            ++out.n_failed;
    }
    if (10 * out.n_failed > n_seeds) throw TooManyFailures(out.n_failed, n_seeds);
    return out;
}

/// Pull-back ensemble for the random logistic map running all seeds in lock
/// step through the batch kernels. Bit-identical to calling pullback_limit
/// per seed; `be` selects the scalar or SIMD variant.
EnsembleResult<double> logistic_pullback_ensemble(
    const RandomLogistic& sys, int s, int n_seeds, uint64_t master_seed,
    const PullbackOptions& opts = {},
    const simd::Backend& be = simd::active_backend());

// ---------------------------------------------------------------------------
// Enlarged-space process
// ---------------------------------------------------------------------------

/// One draw of the phase-randomized process: the trajectory has marginal law
/// rho_{(t + phase) mod tau} at time t, so pooled over samples it estimates
/// the mean measure.
template <class State>
struct EnlargedSample {
    int phase = 0;
    std::vector<State> trajectory;   // values at t = 0..T
};

template <class Sys>
std::vector<EnlargedSample<typename Sys::State>> sample_enlarged_process(
    const Sys& sys, int64_t T, int pullback_periods, int n_samples,
    uint64_t master_seed) {
    if (T < 1) throw Error("T must be at least 1");
    const int tau = sys.period();
    std::vector<EnlargedSample<typename Sys::State>> out(
        static_cast<size_t>(n_samples));
    parallel_for(n_samples, [&](int64_t i) {
        const uint64_t seed = derive_seed(master_seed, static_cast<uint64_t>(i));
        const NoiseStream w{seed, 0};
        const int phase = static_cast<int>(aux_draw(seed, 1) % static_cast<uint64_t>(tau));
        auto& sample = out[static_cast<size_t>(i)];
        sample.phase = phase;
        sample.trajectory.reserve(static_cast<size_t>(T) + 1);
        // reach the section at relative time 0 after pullback_periods periods
        const int64_t warmup = static_cast<int64_t>(pullback_periods) * tau + phase;
        typename Sys::State x = sys.default_start();
        for (int64_t t = -warmup; t < 0; ++t) x = sys.step(x, w, t);
        sample.trajectory.push_back(x);
        for (int64_t t = 0; t < T; ++t) {
            x = sys.step(x, w, t);
            sample.trajectory.push_back(x);
        }
    });
    return out;
}

} // namespace rpd

#endif // RPD_RDS_HPP
