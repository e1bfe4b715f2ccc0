#include "rpd/measure.hpp"

#include <algorithm>
#include <cmath>

namespace rpd {

// ---------------------------------------------------------------------------
// Partition / EmpiricalMeasure
// ---------------------------------------------------------------------------

int Partition::cell_of(double x) const {
    if (x < lo) return 0;
    if (x >= hi) return n_cells - 1;
    const int c = static_cast<int>((x - lo) / width());
    return std::min(c, n_cells - 1);
}

EmpiricalMeasure::EmpiricalMeasure(Partition partition)
    : part_(partition), counts_(static_cast<size_t>(partition.n_cells), 0) {
    if (partition.n_cells < 1 || !(partition.hi > partition.lo))
        throw Error("partition needs positive width and at least one cell");
}

EmpiricalMeasure EmpiricalMeasure::over_states(int n_states) {
    return EmpiricalMeasure(Partition{0.0, static_cast<double>(n_states), n_states});
}

void EmpiricalMeasure::add(double x) {
    if (part_.out_of_range(x)) ++out_of_range_;
    ++counts_[static_cast<size_t>(part_.cell_of(x))];
    ++total_;
    sum_ += x;
    sumsq_ += x * x;
}

Eigen::RowVectorXd EmpiricalMeasure::weights() const {
    Eigen::RowVectorXd w = Eigen::RowVectorXd::Zero(part_.n_cells);
    if (total_ == 0) return w;
    for (int c = 0; c < part_.n_cells; ++c)
        w[c] = static_cast<double>(counts_[static_cast<size_t>(c)]) /
               static_cast<double>(total_);
    return w;
}

double EmpiricalMeasure::sample_mean() const {
    return total_ == 0 ? 0.0 : sum_ / static_cast<double>(total_);
}

double EmpiricalMeasure::sample_variance() const {
    if (total_ < 2) return 0.0;
    const double n = static_cast<double>(total_);
    const double mean = sum_ / n;
    return std::max(0.0, (sumsq_ - n * mean * mean) / (n - 1.0));
}

double MeasureComparison::max_abs_z() const {
    double m = 0.0;
    for (double z : per_cell_z) m = std::max(m, std::abs(z));
    return m;
}

namespace {

MeasureComparison compare_weight_vectors(const Eigen::RowVectorXd& p1, double n1,
                                         const Eigen::RowVectorXd& p2, double n2) {
    MeasureComparison cmp;
    cmp.tv = 0.5 * (p1 - p2).cwiseAbs().sum();
    for (Eigen::Index c = 0; c < p1.size(); ++c) {
        double se = 0.0;
        if (n1 > 0.0 && n2 > 0.0) {
            const double pool = (p1[c] * n1 + p2[c] * n2) / (n1 + n2);
            se = std::sqrt(pool * (1.0 - pool) * (1.0 / n1 + 1.0 / n2));
        } else if (n1 > 0.0) {
            se = std::sqrt(std::max(0.0, p2[c] * (1.0 - p2[c])) / n1); // exact target
        } else if (n2 > 0.0) {
            se = std::sqrt(std::max(0.0, p1[c] * (1.0 - p1[c])) / n2);
        }
        const double diff = p1[c] - p2[c];
        cmp.per_cell_z.push_back(se > 0.0 ? diff / se
                                          : (diff == 0.0 ? 0.0
                                                         : std::numeric_limits<double>::infinity()));
    }
    return cmp;
}

} // namespace

MeasureComparison compare_measures(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    if (!(a.partition() == b.partition()))
        throw PartitionMismatch("cannot compare measures on different partitions");
    return compare_weight_vectors(a.weights(), static_cast<double>(a.total()),
                                  b.weights(), static_cast<double>(b.total()));
}

MeasureComparison compare_measures(const EmpiricalMeasure& a, const DiscreteDistribution& exact) {
    if (a.partition().n_cells != exact.size())
        throw PartitionMismatch("cell count does not match distribution size");
    return compare_weight_vectors(a.weights(), static_cast<double>(a.total()),
                                  exact.weights(), 0.0);
}

MeasureComparison compare_measures(const DiscreteDistribution& a, const DiscreteDistribution& b) {
    if (a.size() != b.size())
        throw PartitionMismatch("distributions of different size");
    return compare_weight_vectors(a.weights(), 0.0, b.weights(), 0.0);
}

// ---------------------------------------------------------------------------
// Ulam discretization
// ---------------------------------------------------------------------------

UlamResult ulam_discretize(const IntervalSampler& sampler, const Partition& partition,
                           int n_per_cell, uint64_t seed) {
    if (n_per_cell < 1) throw Error("n_per_cell must be at least 1");
    const int n = partition.n_cells;
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(n, n);
    std::vector<int64_t> clamped(static_cast<size_t>(n), 0);
    parallel_for(n, [&](int64_t i) {
        for (int j = 0; j < n_per_cell; ++j) {
            const NoiseStream w{
                derive_seed(seed, static_cast<uint64_t>(i) * n_per_cell + j), 0};
            // index -1 places the start point; the sampler consumes from 0
            const double x =
                partition.cell_lo(static_cast<int>(i)) + w.uniform(-1) * partition.width();
            const double image = sampler(x, w);
            if (partition.out_of_range(image)) ++clamped[static_cast<size_t>(i)];
            rows(i, partition.cell_of(image)) += 1.0;
        }
    });
    rows /= static_cast<double>(n_per_cell);
    int64_t total_clamped = 0;
    for (int64_t c : clamped) total_clamped += c;
    UlamResult result{validate_kernel(rows),
                      static_cast<double>(total_clamped) /
                          (static_cast<double>(n) * n_per_cell),
                      false};
    result.clamp_warning = result.out_of_range_fraction > 0.05;
    return result;
}

// ---------------------------------------------------------------------------
// Windows, Condition B, correlation decay
// ---------------------------------------------------------------------------

void WindowSpec::validate() const {
    if (tau < 1) throw Error("window period must be positive");
    if (f0.empty()) throw Error("window F0 must be nonempty");
    for (int t0 : f0)
        if (t0 < 0 || t0 >= tau)
            throw Error("window offset " + std::to_string(t0) + " outside [0, tau)");
}

WindowSpec WindowSpec::full(int tau) {
    WindowSpec w;
    w.tau = tau;
    for (int t = 0; t < tau; ++t) w.f0.push_back(t);
    return w;
}

std::vector<int64_t> windows(const WindowSpec& w, int n_periods) {
    w.validate();
    if (n_periods < 1) throw Error("N must be at least 1");
    std::vector<int> f0 = w.f0;
    std::sort(f0.begin(), f0.end());
    std::vector<int64_t> g;
    g.reserve(static_cast<size_t>(n_periods) * f0.size());
    for (int k = 0; k < n_periods; ++k)
        for (int t0 : f0) g.push_back(static_cast<int64_t>(k) * w.tau + t0);
    return g;
}

namespace detail {

ErgodicAverageReport report_from_window_sums(const std::vector<double>& sums,
                                             int window_size, double target) {
    ErgodicAverageReport rep;
    rep.target = target;
    const int64_t n = static_cast<int64_t>(sums.size());
    rep.window_averages.reserve(sums.size());
    rep.running_average.reserve(sums.size());
    double cumulative = 0.0;
    for (int64_t k = 0; k < n; ++k) {
        rep.window_averages.push_back(sums[static_cast<size_t>(k)] / window_size);
        cumulative += sums[static_cast<size_t>(k)];
        rep.running_average.push_back(cumulative /
                                      (static_cast<double>(k + 1) * window_size));
    }
    rep.final_gap = std::abs(rep.running_average.back() - target);
    double sd = 0.0;
    if (n > 1) {
        const double mean = rep.running_average.back();
        double ss = 0.0;
        for (double xi : rep.window_averages) ss += (xi - mean) * (xi - mean);
        sd = std::sqrt(ss / static_cast<double>(n - 1));
    }
    rep.clt_band = 3.0 * sd / std::sqrt(static_cast<double>(n));
    return rep;
}

} // namespace detail

double condition_b_residual(const TransitionKernel& kernel,
                            const DiscretePeriodicMeasure& pm,
                            const WindowSpec& w, int k) {
    w.validate();
    if (k < 0) throw Error("k must be nonnegative");
    const int n = kernel.n_states();
    const DiscreteDistribution& rho0 = pm.measures[0];

    // accumulated deviation D(y,j) = sum_{t in F_k} (P^t(y,j) - rho_t(j))
    std::vector<int> f0 = w.f0;
    std::sort(f0.begin(), f0.end());
    Eigen::MatrixXd deviation = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd power =
        n_step_kernel(kernel, k * w.tau + f0.front()).matrix();
    int at = f0.front();
    for (size_t idx = 0; idx < f0.size(); ++idx) {
        const int t = f0[idx];
        for (; at < t; ++at) power = power * kernel.matrix();
        const int64_t abs_t = static_cast<int64_t>(k) * w.tau + t;
        deviation += power;
        deviation.rowwise() -= pm.at(abs_t).weights();
    }
    deviation /= static_cast<double>(f0.size());

    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int y = 0; y < n; ++y) acc += rho0[y] * std::abs(deviation(y, j));
        worst = std::max(worst, acc);
    }
    return worst;
}

double condition_b_residual_mc(const ChainRds& sys,
                               const DiscretePeriodicMeasure& pm,
                               const WindowSpec& w, int k, int n_samples,
                               uint64_t seed) {
    w.validate();
    if (k < 0 || n_samples < 1) throw Error("bad Monte Carlo parameters");
    const int n = sys.n_states();
    const DiscreteDistribution& rho0 = pm.measures[0];

    std::vector<int> f0 = w.f0;
    std::sort(f0.begin(), f0.end());
    const int64_t t_max = static_cast<int64_t>(k) * w.tau + f0.back();

    double worst = 0.0;
    std::vector<Eigen::MatrixXd> freq(
        f0.size(), Eigen::MatrixXd::Zero(n, n)); // per offset: start x hit state
    for (int y = 0; y < n; ++y) {
        if (rho0[y] <= 0.0) continue;
        for (int64_t m = 0; m < n_samples; ++m) {
            const NoiseStream w_m{
                derive_seed(seed ^ static_cast<uint64_t>(y * 2654435761u),
                            static_cast<uint64_t>(m)),
                0};
            int x = y;
            size_t next = 0;
            for (int64_t t = 0; t <= t_max && next < f0.size(); ++t) {
                if (t == static_cast<int64_t>(k) * w.tau + f0[next]) {
                    freq[next](y, x) += 1.0;
                    ++next;
                }
                if (t < t_max) x = sys.step(x, w_m, t);
            }
        }
    }
    for (auto& f : freq) f /= static_cast<double>(n_samples);

    Eigen::MatrixXd deviation = Eigen::MatrixXd::Zero(n, n);
    for (size_t idx = 0; idx < f0.size(); ++idx) {
        const int64_t abs_t = static_cast<int64_t>(k) * w.tau + f0[idx];
        deviation += freq[idx];
        deviation.rowwise() -= pm.at(abs_t).weights();
    }
    deviation /= static_cast<double>(f0.size());
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int y = 0; y < n; ++y) acc += rho0[y] * std::abs(deviation(y, j));
        worst = std::max(worst, acc);
    }
    return worst;
}

std::vector<double> correlation_decay(const std::vector<EnlargedSample<int>>& samples,
                                      const WindowSpec& w, const std::vector<int>& b_states,
                                      const DiscretePeriodicMeasure& pm, int k_max) {
    w.validate();
    if (samples.empty()) throw Error("no trajectories");
    const auto in_b = [&](int state) {
        return std::find(b_states.begin(), b_states.end(), state) != b_states.end();
    };
    const auto rho_of_b = [&](int64_t t) {
        double acc = 0.0;
        for (int s : b_states) acc += pm.at(t)[s];
        return acc;
    };

    std::vector<double> j_abs(static_cast<size_t>(k_max) + 1, 0.0);
    std::vector<double> j_acc(static_cast<size_t>(k_max) + 1, 0.0);
    for (const auto& sample : samples) {
        // phase-adjusted window target: the law of the trajectory at time t
        // is rho_{t + phase}
        const auto xi = [&](int k) {
            double acc = 0.0;
            for (int t0 : w.f0) {
                const int64_t t = static_cast<int64_t>(k) * w.tau + t0;
                if (t >= static_cast<int64_t>(sample.trajectory.size()))
                    throw Error("trajectory too short for k_max windows");
                acc += (in_b(sample.trajectory[static_cast<size_t>(t)]) ? 1.0 : 0.0) -
                       rho_of_b(t + sample.phase);
            }
            return acc / static_cast<double>(w.f0.size());
        };
        const double xi0 = xi(0);
        for (int k = 0; k <= k_max; ++k) j_acc[static_cast<size_t>(k)] += xi(k) * xi0;
    }
    for (int k = 0; k <= k_max; ++k)
        j_abs[static_cast<size_t>(k)] =
            std::abs(j_acc[static_cast<size_t>(k)] / static_cast<double>(samples.size()));
    return j_abs;
}

} // namespace rpd
