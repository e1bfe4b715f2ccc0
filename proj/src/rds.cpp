#include "rpd/rds.hpp"

namespace rpd {

ChainRds::ChainRds(const TransitionKernel& kernel)
    : n_(kernel.n_states()), dec_(cyclic_decomposition(kernel)) {
    tau_ = dec_.period;
    anchor_ = dec_.classes[0][0];
    cdf_.resize(static_cast<size_t>(n_) * static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n_; ++j) {
            acc += kernel(i, j);
            cdf_[static_cast<size_t>(i) * n_ + j] = acc;
        }
    }
}

ChainRds make_chain_rds(const TransitionKernel& kernel) { return ChainRds(kernel); }

RandomLogistic::RandomLogistic(double lambda, double mu, double p)
    : lambda_(lambda), mu_(mu), p_(p) {
    if (!(mu > 0.0) || !(mu <= lambda) || !(lambda <= 4.0))
        throw ParameterOutOfRange("need 0 < mu <= lambda <= 4, got mu=" +
                                  std::to_string(mu) + " lambda=" + std::to_string(lambda));
    if (!(p >= 0.0 && p <= 1.0))
        throw ParameterOutOfRange("probability p must be in [0,1]");
}

RandomLogistic make_random_logistic(double lambda, double mu, double p) {
    return RandomLogistic(lambda, mu, p);
}

EnsembleResult<double> logistic_pullback_ensemble(const RandomLogistic& sys, int s,
                                                  int n_seeds, uint64_t master_seed,
                                                  const PullbackOptions& opts,
                                                  const simd::Backend& be) {
    const int tau = sys.period();
    const size_t n = static_cast<size_t>(n_seeds);

    std::vector<uint64_t> seeds(n);
    for (size_t i = 0; i < n; ++i) seeds[i] = derive_seed(master_seed, i);

    EnsembleResult<double> out;
    out.details.resize(n);

    std::vector<double> x(n), u(n), prev(n, 0.0);
    std::vector<char> done(n, 0);
    size_t remaining = n;
    for (int k = 1; k <= opts.k_max && remaining > 0; ++k) {
        // a_k for every lane: k tau + s steps from index -k tau
        std::fill(x.begin(), x.end(), sys.default_start());
        for (int64_t t = -static_cast<int64_t>(k) * tau; t < s; ++t) {
            be.uniform_gather(seeds.data(), n, t, u.data());
            be.logistic_step(x.data(), u.data(), n, sys.lambda(), sys.mu(), sys.p());
        }
        if (k > 1) {
            for (size_t i = 0; i < n; ++i) {
                if (done[i]) continue;
                const double gap = sys.distance(prev[i], x[i]);
                auto& r = out.details[i];
                r.value = x[i];
                r.iterations_used = k;
                r.final_gap = gap;
                if (gap <= opts.tol) {
                    r.converged = true;
                    done[i] = 1;
                    --remaining;
                }
            }
        }
        prev = x;
    }
    for (const auto& r : out.details) {
        if (r.converged)
            out.values.push_back(r.value);
        else
            ++out.n_failed;
    }
    if (10 * out.n_failed > n_seeds) throw TooManyFailures(out.n_failed, n_seeds);
    return out;
}

} // namespace rpd
