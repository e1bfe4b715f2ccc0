#ifndef RPD_SEMIFLOW_HPP
#define RPD_SEMIFLOW_HPP

#include <functional>
#include <optional>
#include <vector>

#include "rpd/measure.hpp"
#include "rpd/noise.hpp"
#include "rpd/simd/kernels.hpp"

namespace rpd {

/// One grid step of a periodic semi-flow. `phase_idx` carries the
/// coefficient time (periodic steppers read it mod n_phase only),
/// `noise_idx` addresses the symbol consumed. Plain evolution passes the
/// same grid index for both; the cylinder lift decouples them.
using SemiflowStep =
    std::function<double(int64_t phase_idx, const NoiseStream& w, int64_t noise_idx, double x)>;

/** \brief tau-periodic stochastic semi-flow discretized to n_phase grid
 * steps per period (h = tau / n_phase). */
struct PeriodicSemiflow {
    double tau = 1.0;
    int n_phase = 1;
    SemiflowStep step;

    // Present for built-in linear-drift steppers
    //   x' = x + h (drive[p] - x) + sigma sqrt(h) z;
    // enables the lock-step batch samplers below.
    struct LinearDrift {
        std::vector<double> drive; // per phase index
        double sigma = 0.0;
    };
    std::optional<LinearDrift> linear_drift;

    double h() const { return tau / n_phase; }
};

/// Euler-Maruyama stepper for dX = (sin(2 pi t / tau) - X) dt + sigma dW.
PeriodicSemiflow make_periodic_ou(double tau, double sigma, int n_phase);

/// Evolve from grid time a to grid time b (one step per grid index).
double evolve(const PeriodicSemiflow& u, const NoiseStream& w, int64_t a, int64_t b, double x);

/// Two-leg composition r -> s -> t equals the direct leg r -> t, bit-exact
/// (tol = 0) by construction for steppers that address noise by index.
bool check_flow_property(const PeriodicSemiflow& u, const NoiseStream& w,
                         int64_t r, int64_t s, int64_t t, double x, double tol = 0.0);

/// Evolving over [s + n_phase, t + n_phase] with w equals evolving over
/// [s, t] with w shifted by n_phase, bit-exact for tau-periodic coefficients.
bool check_periodicity(const PeriodicSemiflow& u, const NoiseStream& w,
                       int64_t s, int64_t t, double x);

/** \brief Point on the cylinder [0,tau) x X with the phase kept as an exact
 * grid index. */
struct CylinderState {
    int phase = 0;
    double point = 0.0;
};

/** \brief The lifted cocycle: phase rotates deterministically, the point
 * moves by the semi-flow step at the state's own phase. */
class LiftedCocycle {
public:
    using State = CylinderState;

    State step(State s, const NoiseStream& w, int64_t k) const {
        return State{(s.phase + 1) % base_.n_phase,
                     base_.step(s.phase, w, k, s.point)};
    }

    double distance(const State& a, const State& b) const {
        if (a.phase != b.phase) return std::numeric_limits<double>::infinity();
        return std::abs(a.point - b.point);
    }

    int period() const { return base_.n_phase; }
    State default_start() const { return State{0, start_point_}; }
    void set_start_point(double x) { start_point_ = x; }

    const PeriodicSemiflow& base() const { return base_; }

private:
    friend LiftedCocycle lift(const PeriodicSemiflow& u);
    explicit LiftedCocycle(PeriodicSemiflow base) : base_(std::move(base)) {}
    PeriodicSemiflow base_;
    double start_point_ = 0.0;
};

/// Lift after verifying the semi-flow axioms on sampled inputs (fixed
/// internal diagnostic seed). Throws AxiomViolation.
LiftedCocycle lift(const PeriodicSemiflow& u);

/** \brief Empirical t-step image law on the cylinder: the phase marginal is
 * a point mass by construction. */
struct CylinderEmpirical {
    int phase = 0;
    EmpiricalMeasure state; // law of the point component
};

/// Law of the t-step images of (s,x): phase lands on (s+t) mod n_phase with
/// probability one; the state marginal estimates the two-time transition law.
CylinderEmpirical lifted_kernel_sample(const LiftedCocycle& lc, CylinderState from,
                                       int64_t t, int n_samples,
                                       const Partition& partition, uint64_t seed);

/// Law of the k-period return map on the section at phase s, started at x:
/// the sampled surrogate whose invariant law is rho_s.
EmpiricalMeasure section_kernel(const LiftedCocycle& lc, int s, int k_periods,
                                int n_samples, double x0, const Partition& partition,
                                uint64_t seed);

/// Raw end states of n lock-step trajectories of `steps` lifted steps from
/// (s, x0). Uses the batch kernels when the base semi-flow advertises
/// linear drift; bit-identical to per-trajectory iteration.
std::vector<double> ensemble_end_states(const LiftedCocycle& lc, int s, int64_t steps,
                                        int n_samples, double x0, uint64_t seed,
                                        const simd::Backend& be = simd::active_backend());

/// Ulam kernel of one lifted step on the phase x cell grid; row (p,i) is
/// the empirical image law of points drawn in cell i at phase p. State
/// ordering: row index = p * n_cells + i.
UlamResult ulam_discretize_cylinder(const LiftedCocycle& lc, const Partition& cells,
                                    int n_per_cell, uint64_t seed);

} // namespace rpd

#endif // RPD_SEMIFLOW_HPP
