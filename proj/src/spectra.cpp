#include "rpd/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace rpd {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
} // namespace

bool PoincareDecomposition::pairwise_disjoint() const {
    for (size_t s = 0; s < overlap.size(); ++s)
        for (size_t t = s + 1; t < overlap.size(); ++t)
            if (overlap[s][t]) return false;
    return true;
}

PoincareDecomposition poincare_supports(const DiscretePeriodicMeasure& pm, double eps) {
    if (eps <= 0.0) throw Error("support threshold must be positive");
    PoincareDecomposition dec;
    dec.period = pm.period;
    for (int s = 0; s < pm.period; ++s) {
        std::vector<int> support;
        const auto& w = pm.measures[static_cast<size_t>(s)].weights();
        for (Eigen::Index i = 0; i < w.size(); ++i)
            if (w[i] > eps) support.push_back(static_cast<int>(i));
        if (support.empty()) throw ThresholdTooLarge(s);
        dec.sections.push_back(std::move(support));
    }
    dec.overlap.assign(static_cast<size_t>(pm.period),
                       std::vector<bool>(static_cast<size_t>(pm.period), false));
    for (int s = 0; s < pm.period; ++s)
        for (int t = s; t < pm.period; ++t) {
            const auto& a = dec.sections[static_cast<size_t>(s)];
            const auto& b = dec.sections[static_cast<size_t>(t)];
            bool meets = false;
            for (int v : a)
                if (std::binary_search(b.begin(), b.end(), v)) { meets = true; break; }
            dec.overlap[static_cast<size_t>(s)][static_cast<size_t>(t)] = meets;
            dec.overlap[static_cast<size_t>(t)][static_cast<size_t>(s)] = meets;
        }
    return dec;
}

int minimal_period(const DiscretePeriodicMeasure& pm, double tol) {
    for (int d = 1; d <= pm.period; ++d) {
        if (pm.period % d != 0) continue;
        bool matches = true;
        for (int s = 0; s < pm.period && matches; ++s) {
            const auto& a = pm.measures[static_cast<size_t>(s)];
            const auto& b = pm.measures[static_cast<size_t>((s + d) % pm.period)];
            if (total_variation(a, b) > tol) matches = false;
        }
        if (matches) return d;
    }
    return pm.period; // unreachable: d = period always matches
}

SpectrumReport transfer_spectrum(const TransitionKernel& kernel, double delta) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(kernel.matrix());
    if (solver.info() != Eigen::Success)
        throw EigSolverFailure("dense eigenvalue solve did not converge");

    SpectrumReport report;
    report.delta = delta;
    const auto& vals = solver.eigenvalues();
    report.eigenvalues.assign(vals.data(), vals.data() + vals.size());
    std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  const double ma = std::abs(a), mb = std::abs(b);
                  if (ma != mb) return ma > mb;
                  if (a.real() != b.real()) return a.real() > b.real();
                  return a.imag() > b.imag();
              });
    for (const auto& ev : report.eigenvalues)
        if (std::abs(ev) > 1.0 - delta) report.unit_circle.push_back(ev);
    for (const auto& ev : report.unit_circle) {
        int count = 0;
        for (const auto& other : report.unit_circle)
            if (std::abs(ev - other) <= delta) ++count;
        report.multiplicities.push_back(count);
    }
    return report;
}

AngleVariableEstimate angle_variable(const TransitionKernel& kernel, int tau) {
    if (tau < 1) throw Error("tau must be positive");
    const std::complex<double> target = std::polar(1.0, kTwoPi / tau);

    Eigen::EigenSolver<Eigen::MatrixXd> solver(kernel.matrix());
    if (solver.info() != Eigen::Success)
        throw EigSolverFailure("dense eigenvalue solve did not converge");

    constexpr double kEigTol = 1e-6;
    int found = -1;
    int hits = 0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        if (std::abs(solver.eigenvalues()[i] - target) <= kEigTol) {
            ++hits;
            if (found < 0) found = static_cast<int>(i);
        }
    }
    if (hits == 0)
        throw NoSuchEigenvalue("no eigenvalue within 1e-6 of exp(2 pi i / " +
                               std::to_string(tau) + ")");
    if (hits > 1)
        throw DegenerateEigenvalue("eigenvalue exp(2 pi i / " + std::to_string(tau) +
                                   ") has multiplicity " + std::to_string(hits));

    Eigen::VectorXcd vec = solver.eigenvectors().col(found);
    const double max_mod = vec.cwiseAbs().maxCoeff();
    vec /= max_mod;

    // fix the global rotation: lowest-indexed support entry gets phase 0
    int anchor = -1;
    for (Eigen::Index i = 0; i < vec.size(); ++i)
        if (std::abs(vec[i]) > 1e-12) { anchor = static_cast<int>(i); break; }
    const std::complex<double> spin = std::conj(vec[anchor]) / std::abs(vec[anchor]);
    vec *= spin;

    AngleVariableEstimate est;
    est.lambda = kTwoPi / tau;
    for (Eigen::Index i = 0; i < vec.size(); ++i) {
        est.modulus_per_state.push_back(std::abs(vec[i]));
        double phase = std::abs(vec[i]) > 1e-12 ? std::arg(vec[i]) : 0.0;
        if (phase < 0.0) phase += kTwoPi;
        if (phase >= kTwoPi) phase -= kTwoPi;
        est.phase_per_state.push_back(phase);
    }
    return est;
}

const char* to_string(RegimeCase c) {
    switch (c) {
        case RegimeCase::I: return "I";
        case RegimeCase::II: return "II";
        default: return "III";
    }
}

RegimeClassification classify_regime(const TransitionKernel& kernel,
                                     const DiscretePeriodicMeasure& pm,
                                     double eps, double tol, double delta) {
    RegimeClassification result;
    result.declared_period = pm.period;
    result.minimal_period = minimal_period(pm, tol);
    result.sections = poincare_supports(pm, eps);
    result.spectrum = transfer_spectrum(kernel, delta);

    const int tau = pm.period;
    const int mp = result.minimal_period;
    if (mp == 1) {
        result.regime = RegimeCase::III;
    } else if (mp < tau) {
        result.regime = RegimeCase::II;
    } else {
        // minimal period equals the declared period: genuine random
        // periodicity requires pairwise disjoint sections
        if (!result.sections.pairwise_disjoint())
            throw InconsistentEvidence(
                "measures are pairwise distinct but supports overlap");
        result.regime = RegimeCase::I;
    }

    // Spectral cross-check: unit-circle eigenvalues must be exactly the
    // mp-th roots of unity, each simple. Both routes are theorems, so a
    // mismatch is a numerical failure, not a preference call.
    const auto& circle = result.spectrum.unit_circle;
    if (static_cast<int>(circle.size()) != mp)
        throw InconsistentEvidence("support evidence gives minimal period " +
                                   std::to_string(mp) + " but " +
                                   std::to_string(circle.size()) +
                                   " eigenvalues lie on the unit circle");
    for (int k = 0; k < mp; ++k) {
        const std::complex<double> root = std::polar(1.0, kTwoPi * k / mp);
        int matched = 0;
        for (const auto& ev : circle)
            if (std::abs(ev - root) <= delta) ++matched;
        if (matched != 1)
            throw InconsistentEvidence(
                "unit-circle spectrum does not match simple roots of unity at k=" +
                std::to_string(k));
    }
    return result;
}

} // namespace rpd
