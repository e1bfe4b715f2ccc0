#ifndef RPD_MARKOV_HPP
#define RPD_MARKOV_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "rpd/errors.hpp"

namespace rpd {

/** \brief Probability vector over a finite state space. */
class DiscreteDistribution {
public:
    /// Validates: entries in [0,1] (tiny negative dust is clipped), sum 1
    /// within 1e-12.
    explicit DiscreteDistribution(Eigen::RowVectorXd weights);

    static DiscreteDistribution delta(int n_states, int state);
    static DiscreteDistribution uniform(int n_states);

    const Eigen::RowVectorXd& weights() const { return w_; }
    int size() const { return static_cast<int>(w_.size()); }
    double operator[](int i) const { return w_[i]; }

private:
    Eigen::RowVectorXd w_;
};

/// Total variation distance (1/2) sum |mu_i - nu_i|.
double total_variation(const DiscreteDistribution& mu, const DiscreteDistribution& nu);

/** \brief Row-stochastic transition matrix of a finite Markov chain.
 *
 * Row i is the one-step law from state i. Entries below 1e-15 are treated
 * as structural zeros by the graph algorithms (period, cyclic classes), so
 * floating point dust cannot create spurious edges.
 */
class TransitionKernel {
public:
    int n_states() const { return static_cast<int>(rows_.rows()); }
    const Eigen::MatrixXd& matrix() const { return rows_; }
    double operator()(int i, int j) const { return rows_(i, j); }

    /// Structural edge i -> j (entry above the zero threshold).
    bool edge(int i, int j) const { return rows_(i, j) > kStructuralZero; }

    static constexpr double kStructuralZero = 1e-15;

private:
    friend TransitionKernel validate_kernel(const Eigen::MatrixXd&);
    friend TransitionKernel n_step_kernel(const TransitionKernel&, int);
    explicit TransitionKernel(Eigen::MatrixXd rows) : rows_(std::move(rows)) {}
    Eigen::MatrixXd rows_;
};

/// Checked constructor: square, nonnegative, rows sum to 1 within 1e-12.
/// Throws NegativeEntry / NonStochasticRow.
TransitionKernel validate_kernel(const Eigen::MatrixXd& rows);

/// Parse a kernel from CSV text (one row per line, comma separated).
TransitionKernel kernel_from_csv_file(const std::string& path);
TransitionKernel kernel_from_csv_text(const std::string& text);

/// P^n by binary exponentiation; P^0 is the identity.
TransitionKernel n_step_kernel(const TransitionKernel& kernel, int n);

/// Period of state i: gcd of return lengths, computed structurally from BFS
/// depth differences within the strongly connected component of i. nullopt
/// when i never returns to itself.
std::optional<int> state_period(const TransitionKernel& kernel, int state);

/** \brief Cyclic class structure of the (unique) recurrent class.
 *
 * classes[r] are the states of C_r; one-step mass from C_r lands entirely in
 * C_{(r+1) mod period}. C_0 contains the lowest-indexed recurrent state,
 * which fixes the phase origin. Transient states are listed separately.
 */
struct CyclicDecomposition {
    int period = 1;
    std::vector<std::vector<int>> classes;
    std::vector<int> transient;

    /// Class index of a state, -1 for transient.
    int class_of(int state) const;
};

/// Throws MultipleClosedClasses when the recurrent part is not irreducible.
CyclicDecomposition cyclic_decomposition(const TransitionKernel& kernel);

/// Unique invariant distribution of P^d restricted to C_0, embedded as a
/// full-length vector (zeros off C_0). Direct linear solve with a
/// normalization row.
DiscreteDistribution stationary_on_class(const TransitionKernel& kernel,
                                         const CyclicDecomposition& dec);

/** \brief Periodic measure rho_0..rho_{tau-1} with rho_{s+1} = rho_s P. */
struct DiscretePeriodicMeasure {
    int period = 1;
    std::vector<DiscreteDistribution> measures;

    const DiscreteDistribution& at(int64_t s) const {
        int r = static_cast<int>(((s % period) + period) % period);
        return measures[static_cast<size_t>(r)];
    }
};

/// tau = d from the cyclic decomposition, rho_0 from stationary_on_class,
/// rho_r = rho_0 P^r.
DiscretePeriodicMeasure build_periodic_measure(const TransitionKernel& kernel);

/// (1/tau) sum_s rho_s; invariant under P.
DiscreteDistribution mean_measure(const DiscretePeriodicMeasure& pm);

/// R*_N nu = (1/N) sum_{k=1..N} nu P^{k tau}.
DiscreteDistribution krylov_bogoliubov_average(const TransitionKernel& kernel,
                                               const DiscreteDistribution& nu,
                                               int tau, int n_terms);

/// Entry k-1 is TV(P^{k tau}(x,.), rho_s) for k = 1..k_max, where C_s is the
/// cyclic class of x. Throws TransientStart.
std::vector<double> convergence_profile(const TransitionKernel& kernel, int state,
                                        const DiscretePeriodicMeasure& pm, int k_max);

/// Discrete-time reading of the period-averaged mixing residual: the maximum
/// over singleton sets B of
///   sum_y mean(y) | (1/tau) sum_{s=k tau}^{(k+1) tau - 1} P^s(y,B) - mean(B) |.
double condition_a_residual(const TransitionKernel& kernel,
                            const DiscretePeriodicMeasure& pm, int k);

} // namespace rpd

#endif // RPD_MARKOV_HPP
