#include <doctest.h>

#include <cmath>

#include "rpd/spectra.hpp"
#include "support.hpp"

using namespace rpd;

namespace {

constexpr double kPi = 3.14159265358979323846;

TransitionKernel chain3() {
    Eigen::MatrixXd m(3, 3);
    m << 0.0, 0.5, 0.5,
         1.0, 0.0, 0.0,
         1.0, 0.0, 0.0;
    return validate_kernel(m);
}

TransitionKernel rank_one3() {
    Eigen::MatrixXd m(3, 3);
    m << 0.2, 0.3, 0.5,
         0.2, 0.3, 0.5,
         0.2, 0.3, 0.5;
    return validate_kernel(m);
}

DiscretePeriodicMeasure replicate(const DiscretePeriodicMeasure& pm, int declared) {
    DiscretePeriodicMeasure out;
    out.period = declared;
    for (int s = 0; s < declared; ++s)
        out.measures.push_back(pm.measures[static_cast<size_t>(s % pm.period)]);
    return out;
}

} // namespace

TEST_CASE("poincare_supports: disjoint sections for the 3-state chain") {
    const auto pm = build_periodic_measure(chain3());
    const auto dec = poincare_supports(pm, 1e-9);
    CHECK(dec.sections == std::vector<std::vector<int>>{{0}, {1, 2}});
    CHECK(dec.pairwise_disjoint());
    CHECK(dec.overlap[0][0]);
    CHECK_FALSE(dec.overlap[0][1]);

    // identical measures overlap fully
    DiscretePeriodicMeasure flat;
    flat.period = 2;
    flat.measures = {mean_measure(pm), mean_measure(pm)};
    const auto overlap = poincare_supports(flat, 1e-9);
    CHECK(overlap.sections[0] == overlap.sections[1]);
    CHECK_FALSE(overlap.pairwise_disjoint());

    CHECK_THROWS_AS(poincare_supports(pm, 2.0), ThresholdTooLarge);
}

TEST_CASE("minimal_period: declared vs intrinsic") {
    const auto pm = build_periodic_measure(chain3());
    CHECK(minimal_period(pm, 1e-9) == 2);
    CHECK(minimal_period(replicate(pm, 4), 1e-9) == 2);

    DiscretePeriodicMeasure constant;
    constant.period = 3;
    constant.measures.assign(3, mean_measure(pm));
    CHECK(minimal_period(constant, 1e-9) == 1);
}

TEST_CASE("transfer_spectrum: chain {1,-1,0}, swap {1,-1}, rank-one {1,0,...}") {
    const auto spec = transfer_spectrum(chain3(), 1e-8);
    REQUIRE(spec.eigenvalues.size() == 3);
    CHECK(std::abs(spec.eigenvalues[0] - std::complex<double>(1.0, 0.0)) < 1e-10);
    CHECK(std::abs(spec.eigenvalues[1] - std::complex<double>(-1.0, 0.0)) < 1e-10);
    CHECK(std::abs(spec.eigenvalues[2]) < 1e-10);
    REQUIRE(spec.unit_circle.size() == 2);
    CHECK(spec.multiplicities == std::vector<int>{1, 1});

    Eigen::MatrixXd swp(2, 2);
    swp << 0, 1, 1, 0;
    const auto sswap = transfer_spectrum(validate_kernel(swp), 1e-8);
    CHECK(sswap.unit_circle.size() == 2);

    const auto r1 = transfer_spectrum(rank_one3(), 1e-8);
    REQUIRE(r1.unit_circle.size() == 1);
    CHECK(std::abs(r1.eigenvalues[1]) < 1e-12);
    CHECK(std::abs(r1.eigenvalues[2]) < 1e-12);
}

TEST_CASE("unit-circle eigenvalues of irreducible kernels are roots of unity") {
    for (int d : {1, 2, 3, 4}) {
        const auto p = validate_kernel(rpdtest::random_cyclic_kernel(400 + d, d, 2));
        const auto spec = transfer_spectrum(p, 1e-8);
        REQUIRE(static_cast<int>(spec.unit_circle.size()) == d);
        for (int k = 0; k < d; ++k) {
            const auto root = std::polar(1.0, 2.0 * kPi * k / d);
            int hits = 0;
            for (const auto& ev : spec.unit_circle)
                if (std::abs(ev - root) <= 1e-8) ++hits;
            CHECK(hits == 1);
        }
    }
}

TEST_CASE("angle_variable: chain phases (0, pi, pi), swap (0, pi), mixing none") {
    const auto est = angle_variable(chain3(), 2);
    CHECK(est.lambda == doctest::Approx(kPi));
    CHECK(est.phase_per_state[0] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(est.phase_per_state[1] == doctest::Approx(kPi).epsilon(1e-8));
    CHECK(est.phase_per_state[2] == doctest::Approx(kPi).epsilon(1e-8));

    Eigen::MatrixXd swp(2, 2);
    swp << 0, 1, 1, 0;
    const auto sw = angle_variable(validate_kernel(swp), 2);
    CHECK(sw.phase_per_state[0] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(sw.phase_per_state[1] == doctest::Approx(kPi).epsilon(1e-8));

    CHECK_THROWS_AS(angle_variable(rank_one3(), 2), NoSuchEigenvalue);
}

TEST_CASE("angle variable is constant per section and steps by 2 pi / tau") {
    for (int d : {2, 3, 4}) {
        const auto p = validate_kernel(rpdtest::random_cyclic_kernel(500 + d, d, 3));
        const auto pm = build_periodic_measure(p);
        const auto sections = poincare_supports(pm, 1e-9);
        const auto est = angle_variable(p, d);
        std::vector<double> section_phase;
        for (int s = 0; s < d; ++s) {
            const auto& sec = sections.sections[static_cast<size_t>(s)];
            const double ref = est.phase_per_state[static_cast<size_t>(sec[0])];
            for (int state : sec) {
                double diff =
                    std::fmod(std::abs(est.phase_per_state[static_cast<size_t>(state)] - ref),
                              2.0 * kPi);
                diff = std::min(diff, 2.0 * kPi - diff);
                CHECK(diff <= 1e-8);
            }
            section_phase.push_back(ref);
        }
        for (int s = 0; s < d; ++s) {
            double step = section_phase[static_cast<size_t>((s + 1) % d)] -
                          section_phase[static_cast<size_t>(s)];
            step = std::fmod(step + 4.0 * kPi, 2.0 * kPi);
            // P phi = e^{i 2 pi/d} phi forces c_{s+1} = e^{i 2 pi/d} c_s on
            // section constants, so the forward step is +2 pi / d
            const double expect = 2.0 * kPi / d;
            CHECK(std::abs(step - expect) <= 1e-8);
        }
    }
}

TEST_CASE("classify_regime: the three cases") {
    const auto pm = build_periodic_measure(chain3());

    const auto case1 = classify_regime(chain3(), pm);
    CHECK(case1.regime == RegimeCase::I);
    CHECK(case1.minimal_period == 2);
    CHECK(case1.declared_period == 2);

    const auto case2 = classify_regime(chain3(), replicate(pm, 4));
    CHECK(case2.regime == RegimeCase::II);
    CHECK(case2.minimal_period == 2);
    CHECK(case2.declared_period == 4);

    DiscretePeriodicMeasure constant;
    constant.period = 2;
    const auto r1 = rank_one3();
    const auto stat = build_periodic_measure(r1);
    constant.measures = {stat.measures[0], stat.measures[0]};
    const auto case3 = classify_regime(r1, constant);
    CHECK(case3.regime == RegimeCase::III);
    CHECK(case3.minimal_period == 1);
}

TEST_CASE("classify_regime rejects contradictory evidence") {
    // constant family attached to a genuinely 2-periodic kernel: the support
    // route says Case III while the spectrum carries {1,-1}
    DiscretePeriodicMeasure constant;
    constant.period = 2;
    const auto pm = build_periodic_measure(chain3());
    constant.measures = {mean_measure(pm), mean_measure(pm)};
    CHECK_THROWS_AS(classify_regime(chain3(), constant), InconsistentEvidence);
}

TEST_CASE("classify_regime is invariant under state relabeling") {
    const auto p = validate_kernel(rpdtest::random_cyclic_kernel(777, 2, 3));
    const auto verdict = classify_regime(p, build_periodic_measure(p));

    const std::vector<int> perm{4, 2, 0, 5, 3, 1};
    const int n = p.n_states();
    Eigen::MatrixXd shuffled(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            shuffled(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]) = p(i, j);
    const auto q = validate_kernel(shuffled);
    const auto verdict_q = classify_regime(q, build_periodic_measure(q));
    CHECK(verdict_q.regime == verdict.regime);
    CHECK(verdict_q.minimal_period == verdict.minimal_period);
}

TEST_CASE("Case III iff unit circle is the simple eigenvalue 1") {
    for (uint64_t seed = 900; seed < 905; ++seed) {
        const auto p = validate_kernel(rpdtest::random_dense_kernel(seed, 4));
        const auto verdict = classify_regime(p, build_periodic_measure(p));
        CHECK(verdict.regime == RegimeCase::III);
        CHECK(verdict.spectrum.unit_circle.size() == 1);
    }
}
