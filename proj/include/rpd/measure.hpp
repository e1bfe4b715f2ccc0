#ifndef RPD_MEASURE_HPP
#define RPD_MEASURE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "rpd/markov.hpp"
#include "rpd/noise.hpp"
#include "rpd/rds.hpp"

namespace rpd {

/** \brief Uniform partition of [lo, hi) into equal cells. Out-of-range
 * points clamp to the boundary cells and are counted, never dropped. */
struct Partition {
    double lo = 0.0;
    double hi = 1.0;
    int n_cells = 1;

    int cell_of(double x) const;
    bool out_of_range(double x) const { return x < lo || x >= hi; }
    double width() const { return (hi - lo) / n_cells; }
    double cell_lo(int c) const { return lo + c * width(); }
    double cell_hi(int c) const { return lo + (c + 1) * width(); }
    double center(int c) const { return lo + (c + 0.5) * width(); }

    bool operator==(const Partition& other) const = default;
};

/** \brief Cell counts plus exact running moments of the raw samples. */
class EmpiricalMeasure {
public:
    explicit EmpiricalMeasure(Partition partition);
    /// Finite state space {0..n-1} viewed as unit cells.
    static EmpiricalMeasure over_states(int n_states);

    void add(double x);

    const Partition& partition() const { return part_; }
    const std::vector<int64_t>& counts() const { return counts_; }
    int64_t total() const { return total_; }
    int64_t out_of_range() const { return out_of_range_; }
    double out_of_range_fraction() const {
        return total_ == 0 ? 0.0 : static_cast<double>(out_of_range_) / total_;
    }

    Eigen::RowVectorXd weights() const;

    /// Moments of the raw samples (before binning).
    double sample_mean() const;
    double sample_variance() const; // unbiased

private:
    Partition part_;
    std::vector<int64_t> counts_;
    int64_t total_ = 0;
    int64_t out_of_range_ = 0;
    double sum_ = 0.0;
    double sumsq_ = 0.0;
};

struct MeasureComparison {
    double tv = 0.0;
    std::vector<double> per_cell_z;
    double max_abs_z() const;
};

/// Binomial-approximation comparison. Throws PartitionMismatch.
MeasureComparison compare_measures(const EmpiricalMeasure& a, const EmpiricalMeasure& b);
MeasureComparison compare_measures(const EmpiricalMeasure& a, const DiscreteDistribution& exact);
MeasureComparison compare_measures(const DiscreteDistribution& a, const DiscreteDistribution& b);

// ---------------------------------------------------------------------------
// Ulam discretization
// ---------------------------------------------------------------------------

struct UlamResult {
    TransitionKernel kernel;
    double out_of_range_fraction = 0.0;
    bool clamp_warning = false; // more than 5% of images clamped
};

/// One-step stochastic map on the interval: receives the start point and a
/// dedicated stream; by convention it consumes the symbol at index 0.
using IntervalSampler = std::function<double(double x, const NoiseStream& w)>;

/// Row i is the empirical image distribution of n_per_cell points placed
/// uniformly at random in cell i; rows sum to 1 exactly by construction.
UlamResult ulam_discretize(const IntervalSampler& sampler, const Partition& partition,
                           int n_per_cell, uint64_t seed);

// ---------------------------------------------------------------------------
// Window sets and ergodic averages
// ---------------------------------------------------------------------------

/** \brief F_0 inside one period, replicated as F_k = {k tau + t0}. */
struct WindowSpec {
    int tau = 1;
    std::vector<int> f0; // nonempty, values in [0, tau)

    void validate() const;
    static WindowSpec full(int tau);
};

/// G_N as a sorted list of time indices.
std::vector<int64_t> windows(const WindowSpec& w, int n_periods);

struct ErgodicAverageReport {
    std::vector<double> window_averages;  // xi_k per window
    std::vector<double> running_average;  // cumulative mean over windows
    double target = 0.0;
    double final_gap = 0.0;
    double clt_band = 0.0; // 3 sigma-hat / sqrt(N)
    bool within_band() const { return final_gap <= clt_band; }
};

namespace detail {
ErgodicAverageReport report_from_window_sums(const std::vector<double>& sums,
                                             int window_size, double target);
} // namespace detail

/// Windowed time average of the indicator of B along a trajectory. The
/// target (the window average of rho_t(B), phase-adjusted as needed) is the
/// caller's responsibility.
template <class T, class Pred>
ErgodicAverageReport slln_average(const std::vector<T>& traj, const WindowSpec& w,
                                  Pred in_b, double target) {
    w.validate();
    int max_t0 = 0;
    for (int t0 : w.f0) max_t0 = std::max(max_t0, t0);
    const int64_t n = (static_cast<int64_t>(traj.size()) - 1 - max_t0) / w.tau + 1;
    if (static_cast<int64_t>(traj.size()) <= max_t0 || n < 1)
        throw Error("trajectory shorter than one window");
    std::vector<double> sums(static_cast<size_t>(n), 0.0);
    for (int64_t k = 0; k < n; ++k)
        for (int t0 : w.f0)
            sums[static_cast<size_t>(k)] +=
                in_b(traj[static_cast<size_t>(k * w.tau + t0)]) ? 1.0 : 0.0;
    return detail::report_from_window_sums(sums, static_cast<int>(w.f0.size()), target);
}

/// Componentwise windowed average of a vector observable.
template <class T>
std::vector<ErgodicAverageReport> slln_test_function(
    const std::vector<T>& traj, const WindowSpec& w,
    const std::function<std::vector<double>(const T&)>& f,
    const std::vector<double>& target) {
    w.validate();
    int max_t0 = 0;
    for (int t0 : w.f0) max_t0 = std::max(max_t0, t0);
    const int64_t n = (static_cast<int64_t>(traj.size()) - 1 - max_t0) / w.tau + 1;
    if (static_cast<int64_t>(traj.size()) <= max_t0 || n < 1)
        throw Error("trajectory shorter than one window");
    const size_t dim = target.size();
    std::vector<std::vector<double>> sums(dim, std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int64_t k = 0; k < n; ++k)
        for (int t0 : w.f0) {
            const auto value = f(traj[static_cast<size_t>(k * w.tau + t0)]);
            if (value.size() != dim) throw Error("observable dimension mismatch");
            for (size_t c = 0; c < dim; ++c) sums[c][static_cast<size_t>(k)] += value[c];
        }
    std::vector<ErgodicAverageReport> reports;
    reports.reserve(dim);
    for (size_t c = 0; c < dim; ++c)
        reports.push_back(detail::report_from_window_sums(
            sums[c], static_cast<int>(w.f0.size()), target[c]));
    return reports;
}

// ---------------------------------------------------------------------------
// Condition B and correlation decay
// ---------------------------------------------------------------------------

/// Exact discrete reading of the window-averaged mixing residual:
///   max over singleton B of
///   sum_y rho_0(y) | (1/|F0|) sum_{t in F_k} (P^t(y,B) - rho_t(B)) |.
double condition_b_residual(const TransitionKernel& kernel,
                            const DiscretePeriodicMeasure& pm,
                            const WindowSpec& w, int k);

/// Monte Carlo estimate of the same quantity for a chain cocycle: P^t(y,.)
/// replaced by empirical frequencies over n_samples trajectories per start.
double condition_b_residual_mc(const ChainRds& sys,
                               const DiscretePeriodicMeasure& pm,
                               const WindowSpec& w, int k, int n_samples,
                               uint64_t seed);

/// |J_k| for k = 0..k_max: covariance between the window-k and window-0
/// averages of I_B along enlarged-process trajectories. Each window average
/// is centered at its own phase-adjusted target, which is the paper-level
/// centering by rho_t; with a full window the center reduces to the mean
/// measure of B.
std::vector<double> correlation_decay(const std::vector<EnlargedSample<int>>& samples,
                                      const WindowSpec& w, const std::vector<int>& b_states,
                                      const DiscretePeriodicMeasure& pm, int k_max);

} // namespace rpd

#endif // RPD_MEASURE_HPP
