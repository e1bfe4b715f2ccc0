#include <doctest.h>

#include <cmath>

#include "rpd/rds.hpp"
#include "support.hpp"

using namespace rpd;

namespace {

struct ConstantStream {
    double u = 0.25;
    double uniform(int64_t) const { return u; }
    double normal(int64_t) const { return 0.0; }
    ConstantStream shifted(int64_t) const { return *this; }
};

TransitionKernel chain3() {
    Eigen::MatrixXd m(3, 3);
    m << 0.0, 0.5, 0.5,
         1.0, 0.0, 0.0,
         1.0, 0.0, 0.0;
    return validate_kernel(m);
}

// closed-form 2-cycle of the deterministic logistic map, the two roots of
// r^2 x^2 - r(r+1) x + (r+1) = 0
std::pair<double, double> logistic_two_cycle(double r) {
    const double disc = std::sqrt((r + 1.0) * (r - 3.0));
    return {(r + 1.0 - disc) / (2.0 * r), (r + 1.0 + disc) / (2.0 * r)};
}

} // namespace

TEST_CASE("chain one-step law follows the kernel rows") {
    const auto sys = make_chain_rds(chain3());
    CHECK(sys.period() == 2);
    CHECK(sys.default_start() == 0);

    // from state 0 the coin picks between 1 and 2 at probability 1/2
    CHECK(sys.step(0, ConstantStream{0.25}, 0) == 1);
    CHECK(sys.step(0, ConstantStream{0.75}, 0) == 2);
    // states 1 and 2 return to 0 regardless of the symbol
    for (double u : {0.1, 0.5, 0.9}) {
        CHECK(sys.step(1, ConstantStream{u}, 0) == 0);
        CHECK(sys.step(2, ConstantStream{u}, 0) == 0);
    }

    // deterministic rows ignore the noise
    Eigen::MatrixXd perm(2, 2);
    perm << 0, 1, 1, 0;
    const auto det = make_chain_rds(validate_kernel(perm));
    for (double u : {0.001, 0.999}) CHECK(det.step(0, ConstantStream{u}, 0) == 1);
}

TEST_CASE("empirical one-step frequencies match the kernel rows") {
    const auto p = validate_kernel(rpdtest::random_dense_kernel(31, 3));
    const auto sys = make_chain_rds(p);
    const NoiseStream w{2024, 0};
    const int n = 100000;
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(3, 3);
    int x = 0;
    for (int64_t k = 0; k < n; ++k) {
        const int nx = sys.step(x, w, k);
        counts(x, nx) += 1.0;
        x = nx;
    }
    for (int i = 0; i < 3; ++i) {
        const double rows = counts.row(i).sum();
        for (int j = 0; j < 3; ++j) {
            const double freq = counts(i, j) / rows;
            const double se = std::sqrt(p(i, j) * (1.0 - p(i, j)) / rows);
            CHECK(std::abs(freq - p(i, j)) <= 3.0 * se + 1e-12);
        }
    }
}

TEST_CASE("iterate: hand trajectory and the empty case") {
    const auto sys = make_chain_rds(chain3());
    const auto path = iterate(sys, ConstantStream{0.25}, 0, 4);
    CHECK(path == std::vector<int>{0, 1, 0, 1, 0});

    const NoiseStream w{5, 0};
    CHECK(iterate(sys, w, 2, 0) == std::vector<int>{2});
}

TEST_CASE("cocycle identity is bit-exact on random splits") {
    const auto chain = make_chain_rds(chain3());
    const auto logistic = make_random_logistic(3.2, 3.1, 0.5);
    for (int trial = 0; trial < 200; ++trial) {
        const uint64_t seed = simd::raw_at(0xC0C0, trial);
        const NoiseStream w{seed, 0};
        const int m = static_cast<int>(simd::raw_at(seed, -1) % 50);
        const int n = static_cast<int>(simd::raw_at(seed, -2) % 50);

        const auto whole = iterate(chain, w, 0, m + n);
        const auto first = iterate(chain, w, 0, m);
        const auto second = iterate(chain, w.shifted(m), first.back(), n);
        CHECK(whole.back() == second.back());

        const auto lwhole = iterate(logistic, w, 0.5, m + n);
        const auto lfirst = iterate(logistic, w, 0.5, m);
        const auto lsecond = iterate(logistic, w.shifted(m), lfirst.back(), n);
        CHECK(lwhole.back() == lsecond.back()); // bit-exact
    }
}

TEST_CASE("pull-back on the chain converges after one period") {
    const auto sys = make_chain_rds(chain3());
    const NoiseStream w{99, 0};

    // phase 1 from the phase-origin start: the limit lives on {1,2} and is
    // decided by the symbol at index 0
    const auto res = pullback_limit(sys, w, 0, 1);
    CHECK(res.converged);
    CHECK(res.final_gap == 0.0);
    CHECK(res.iterations_used == 2); // k=1 already exact; confirmed at k=2
    CHECK(res.value == (w.uniform(0) < 0.5 ? 1 : 2));

    // phase 0: the section is {0}
    const auto res0 = pullback_limit(sys, w, 0, 0);
    CHECK(res0.converged);
    CHECK(res0.value == 0);

    // a start in C_1 samples the shifted section family: phase 1 lands on {0}
    const auto off = pullback_limit(sys, w, 1, 1);
    CHECK(off.converged);
    CHECK(off.value == 0);
}

TEST_CASE("pull-back of the deterministic logistic hits the closed-form 2-cycle") {
    const auto sys = make_random_logistic(3.2, 3.2, 0.5);
    const auto [lo, hi] = logistic_two_cycle(3.2);
    const NoiseStream w{1, 0};
    PullbackOptions opts;
    opts.tol = 1e-12;

    for (double start : {0.3, 0.7}) {
        const auto at0 = pullback_limit(sys, w, start, 0, opts);
        REQUIRE(at0.converged);
        const bool hits_cycle = std::abs(at0.value - lo) <= 1e-8 ||
                                std::abs(at0.value - hi) <= 1e-8;
        CHECK(hits_cycle);

        // consecutive phases give the two distinct cycle points
        const auto other = pullback_limit(sys, w, start, 1, opts);
        REQUIRE(other.converged);
        CHECK(std::abs(at0.value - other.value) > 0.1);
    }
}

TEST_CASE("random logistic synchronizes two starts on the same stream") {
    const auto sys = make_random_logistic(3.2, 3.1, 0.5);
    for (int trial = 0; trial < 50; ++trial) {
        const NoiseStream w{simd::raw_at(0x70707, trial), 0};
        const auto a = pullback_limit(sys, w, 0.3, 0);
        const auto b = pullback_limit(sys, w, 0.7, 0);
        REQUIRE(a.converged);
        REQUIRE(b.converged);
        CHECK(std::abs(a.value - b.value) <= 1e-8);
    }
}

TEST_CASE("random periodicity: phase s + tau equals shifted noise at phase s") {
    const auto sys = make_chain_rds(chain3());
    const int tau = sys.period();
    for (int trial = 0; trial < 100; ++trial) {
        const NoiseStream w{simd::raw_at(0xBEEF, trial), 0};
        for (int s = 0; s < tau; ++s) {
            const auto lhs = pullback_limit(sys, w, 0, s + tau);
            const auto rhs = pullback_limit(sys, w.shifted(tau), 0, s);
            REQUIRE(lhs.converged);
            REQUIRE(rhs.converged);
            CHECK(lhs.value == rhs.value);
        }
    }
}

TEST_CASE("pull-back ensembles estimate the periodic measure") {
    const auto sys = make_chain_rds(chain3());
    const auto ens0 = sample_random_periodic_ensemble(sys, 0, 300, 12345);
    CHECK(ens0.n_failed == 0);
    for (int v : ens0.values) CHECK(v == 0);

    const auto ens1 = sample_random_periodic_ensemble(sys, 1, 300, 12345);
    int ones = 0;
    for (int v : ens1.values) {
        CHECK((v == 1 || v == 2));
        ones += v == 1 ? 1 : 0;
    }
    const double freq = static_cast<double>(ones) / ens1.values.size();
    CHECK(std::abs(freq - 0.5) <= 3.0 * std::sqrt(0.25 / ens1.values.size()));

    const auto det = make_random_logistic(3.2, 3.2, 0.5);
    const auto dens = sample_random_periodic_ensemble(det, 0, 50, 7);
    for (double v : dens.values) CHECK(v == doctest::Approx(dens.values[0]).epsilon(1e-10));
}

TEST_CASE("batch logistic ensemble equals the per-seed reference bit for bit") {
    const auto sys = make_random_logistic(3.2, 3.1, 0.5);
    const int n_seeds = 64;
    const uint64_t master = 4242;
    PullbackOptions opts;

    const auto generic = sample_random_periodic_ensemble(sys, 1, n_seeds, master, opts);
    const auto batch_scalar =
        logistic_pullback_ensemble(sys, 1, n_seeds, master, opts, simd::scalar_backend());
    REQUIRE(batch_scalar.details.size() == generic.details.size());
    for (size_t i = 0; i < generic.details.size(); ++i) {
        CHECK(batch_scalar.details[i].value == generic.details[i].value);
        CHECK(batch_scalar.details[i].iterations_used == generic.details[i].iterations_used);
        CHECK(batch_scalar.details[i].converged == generic.details[i].converged);
    }

    const auto batch_active = logistic_pullback_ensemble(sys, 1, n_seeds, master, opts);
    for (size_t i = 0; i < generic.details.size(); ++i)
        CHECK(batch_active.details[i].value == generic.details[i].value);
}

TEST_CASE("non-converging pull-back reports failures honestly") {
    // chaotic regime: successive pull-back iterates never settle
    const auto sys = make_random_logistic(3.9, 3.8, 0.5);
    PullbackOptions opts;
    opts.k_max = 25;
    opts.tol = 1e-12;
    const NoiseStream w{3, 0};
    const auto res = pullback_limit(sys, w, 0.3, 0, opts);
    CHECK_FALSE(res.converged);
    CHECK(res.final_gap > 0.0);
    CHECK_THROWS_AS(sample_random_periodic_ensemble(sys, 0, 20, 5, opts), TooManyFailures);
}

TEST_CASE("enlarged process: phase-aligned marginals and pooled mean measure") {
    const auto sys = make_chain_rds(chain3());
    const auto samples = sample_enlarged_process(sys, 8, 10, 4000, 777);
    CHECK(samples.size() == 4000);

    int phase_zero = 0;
    Eigen::Vector3d pooled = Eigen::Vector3d::Zero();
    for (const auto& s : samples) {
        REQUIRE(s.trajectory.size() == 9);
        phase_zero += s.phase == 0 ? 1 : 0;
        // exact alternation: section index (t + phase) mod 2
        for (size_t t = 0; t < s.trajectory.size(); ++t) {
            if ((static_cast<int>(t) + s.phase) % 2 == 0)
                CHECK(s.trajectory[t] == 0);
            else
                CHECK((s.trajectory[t] == 1 || s.trajectory[t] == 2));
        }
        pooled[s.trajectory[4]] += 1.0;
    }
    pooled /= static_cast<double>(samples.size());
    CHECK(std::abs(static_cast<double>(phase_zero) / samples.size() - 0.5) <
          3.0 * std::sqrt(0.25 / samples.size()));
    CHECK(std::abs(pooled[0] - 0.5) <= 3.0 * std::sqrt(0.25 / samples.size()));
    CHECK(std::abs(pooled[1] - 0.25) <= 3.0 * std::sqrt(0.1875 / samples.size()));
}
