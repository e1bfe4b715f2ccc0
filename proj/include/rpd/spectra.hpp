#ifndef RPD_SPECTRA_HPP
#define RPD_SPECTRA_HPP

#include <complex>
#include <vector>

#include "rpd/markov.hpp"

namespace rpd {

/** \brief Supports of the periodic measure and their overlap pattern. */
struct PoincareDecomposition {
    int period = 1;
    std::vector<std::vector<int>> sections;       // L_s = { i : rho_s(i) > eps }
    std::vector<std::vector<bool>> overlap;       // overlap[s][t] = L_s meets L_t

    bool pairwise_disjoint() const;
};

PoincareDecomposition poincare_supports(const DiscretePeriodicMeasure& pm, double eps);

/// Smallest divisor d of tau with TV(rho_s, rho_{s+d mod tau}) <= tol for all s.
int minimal_period(const DiscretePeriodicMeasure& pm, double tol);

/** \brief Eigenvalues of the transition matrix, unit-circle subset flagged.
 *
 * The continuous-time generator eigenvalues {0, 2 pi / tau} of the theory
 * appear here as transfer-operator eigenvalues {1, e^{2 pi i / tau}}; all
 * reporting is in the transfer (multiplicative) convention.
 */
struct SpectrumReport {
    std::vector<std::complex<double>> eigenvalues;    // sorted by modulus desc
    std::vector<std::complex<double>> unit_circle;    // modulus > 1 - delta
    std::vector<int> multiplicities;                  // per unit_circle entry
    double delta = 1e-8;
};

SpectrumReport transfer_spectrum(const TransitionKernel& kernel, double delta);

/** \brief Finite surrogate of the angle variable: entrywise argument of the
 * eigenvector at e^{2 pi i / tau}. */
struct AngleVariableEstimate {
    std::vector<double> phase_per_state;   // in [0, 2 pi)
    std::vector<double> modulus_per_state; // |eigenvector| (diagnostic)
    double lambda = 0.0;                   // 2 pi / tau
};

/// Right eigenvector of P at the eigenvalue within 1e-6 of e^{2 pi i/tau},
/// rotated so the lowest-indexed support state has phase 0.
/// Throws NoSuchEigenvalue / DegenerateEigenvalue.
AngleVariableEstimate angle_variable(const TransitionKernel& kernel, int tau);

enum class RegimeCase { I, II, III };

const char* to_string(RegimeCase c);

/** \brief Verdict of the three-case classification with both evidence routes. */
struct RegimeClassification {
    RegimeCase regime = RegimeCase::III;
    int declared_period = 1;
    int minimal_period = 1;
    PoincareDecomposition sections;
    SpectrumReport spectrum;
};

/// Case I: minimal period = tau and sections pairwise disjoint.
/// Case II: 1 < minimal period < tau. Case III: minimal period 1.
/// The unit-circle spectrum must equal the minimal-period-th roots of unity,
/// each simple; support and spectral evidence disagreeing beyond tolerance
/// throws InconsistentEvidence.
RegimeClassification classify_regime(const TransitionKernel& kernel,
                                     const DiscretePeriodicMeasure& pm,
                                     double eps = 1e-9, double tol = 1e-9,
                                     double delta = 1e-8);

} // namespace rpd

#endif // RPD_SPECTRA_HPP
