#include "rpd/markov.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>

namespace rpd {

namespace {
constexpr double kSumTol = 1e-12;
} // namespace

// ---------------------------------------------------------------------------
// DiscreteDistribution
// ---------------------------------------------------------------------------

DiscreteDistribution::DiscreteDistribution(Eigen::RowVectorXd weights) : w_(std::move(weights)) {
    if (w_.size() == 0) throw Error("empty distribution");
    for (Eigen::Index i = 0; i < w_.size(); ++i) {
        if (!std::isfinite(w_[i]) || w_[i] < -1e-12 || w_[i] > 1.0 + 1e-12)
            throw Error("distribution entry " + std::to_string(i) + " = " +
                        std::to_string(w_[i]) + " outside [0,1]");
        if (w_[i] < 0.0) w_[i] = 0.0;
    }
    const double sum = w_.sum();
    if (std::abs(sum - 1.0) > kSumTol)
        throw Error("distribution sums to " + std::to_string(sum) + ", expected 1");
}

DiscreteDistribution DiscreteDistribution::delta(int n_states, int state) {
    Eigen::RowVectorXd w = Eigen::RowVectorXd::Zero(n_states);
    w[state] = 1.0;
    return DiscreteDistribution(std::move(w));
}

DiscreteDistribution DiscreteDistribution::uniform(int n_states) {
    return DiscreteDistribution(
        Eigen::RowVectorXd::Constant(n_states, 1.0 / n_states));
}

double total_variation(const DiscreteDistribution& mu, const DiscreteDistribution& nu) {
    if (mu.size() != nu.size()) throw PartitionMismatch("distributions of different size");
    return 0.5 * (mu.weights() - nu.weights()).cwiseAbs().sum();
}

// ---------------------------------------------------------------------------
// TransitionKernel
// ---------------------------------------------------------------------------

TransitionKernel validate_kernel(const Eigen::MatrixXd& rows) {
    if (rows.rows() == 0 || rows.rows() != rows.cols())
        throw Error("kernel must be a nonempty square matrix, got " +
                    std::to_string(rows.rows()) + "x" + std::to_string(rows.cols()));
    const int n = static_cast<int>(rows.rows());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!std::isfinite(rows(i, j))) throw Error("non-finite kernel entry");
            if (rows(i, j) < 0.0) throw NegativeEntry(i, j);
        }
        const double sum = rows.row(i).sum();
        if (std::abs(sum - 1.0) > kSumTol) throw NonStochasticRow(i, sum);
    }
    return TransitionKernel(rows);
}

TransitionKernel kernel_from_csv_text(const std::string& text) {
    std::vector<std::vector<double>> parsed;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                size_t pos = 0;
                row.push_back(std::stod(cell, &pos));
                while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
                if (pos != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw Error("malformed CSV cell '" + cell + "'");
            }
        }
        parsed.push_back(std::move(row));
    }
    if (parsed.empty()) throw Error("empty kernel CSV");
    const size_t n = parsed.size();
    Eigen::MatrixXd m(n, n);
    for (size_t i = 0; i < n; ++i) {
        if (parsed[i].size() != n)
            throw Error("CSV row " + std::to_string(i) + " has " +
                        std::to_string(parsed[i].size()) + " cells, expected " +
                        std::to_string(n));
        for (size_t j = 0; j < n; ++j) m(i, j) = parsed[i][j];
    }
    return validate_kernel(m);
}

TransitionKernel kernel_from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open kernel CSV '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return kernel_from_csv_text(buf.str());
}

TransitionKernel n_step_kernel(const TransitionKernel& kernel, int n) {
    if (n < 0) throw Error("negative step count");
    const int dim = kernel.n_states();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(dim, dim);
    Eigen::MatrixXd base = kernel.matrix();
    int e = n;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    // powers of a validated kernel are stochastic; skip the 1e-12 row check,
    // which accumulated dust could trip for large n
    return TransitionKernel(std::move(acc));
}

// ---------------------------------------------------------------------------
// Graph structure: period and cyclic classes
// ---------------------------------------------------------------------------

namespace {

std::vector<char> reachable_from(const TransitionKernel& k, int start, bool reverse) {
    const int n = k.n_states();
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    seen[start] = 1;
    q.push(start);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v = 0; v < n; ++v) {
            const bool has = reverse ? k.edge(v, u) : k.edge(u, v);
            if (has && !seen[v]) {
                seen[v] = 1;
                q.push(v);
            }
        }
    }
    return seen;
}

// gcd of (depth[u] + 1 - depth[v]) over edges u->v inside `members`,
// with BFS depths from `root`. Zero means no cycle through root.
int depth_gcd(const TransitionKernel& k, const std::vector<char>& members, int root) {
    const int n = k.n_states();
    std::vector<int> depth(n, -1);
    std::vector<int> order;
    depth[root] = 0;
    order.push_back(root);
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v = 0; v < n; ++v) {
            if (k.edge(u, v) && members[v] && depth[v] < 0) {
                depth[v] = depth[u] + 1;
                order.push_back(v);
                q.push(v);
            }
        }
    }
    int g = 0;
    for (int u : order)
        for (int v = 0; v < n; ++v)
            if (k.edge(u, v) && members[v] && depth[v] >= 0)
                g = std::gcd(g, depth[u] + 1 - depth[v]);
    return std::abs(g);
}

} // namespace

std::optional<int> state_period(const TransitionKernel& kernel, int state) {
    if (state < 0 || state >= kernel.n_states()) throw Error("state index out of range");
    const auto fwd = reachable_from(kernel, state, false);
    const auto bwd = reachable_from(kernel, state, true);
    std::vector<char> scc(kernel.n_states(), 0);
    for (int v = 0; v < kernel.n_states(); ++v) scc[v] = fwd[v] && bwd[v];

    // i returns iff some successor of i can reach i back
    bool returns = false;
    for (int v = 0; v < kernel.n_states() && !returns; ++v)
        if (kernel.edge(state, v) && scc[v]) returns = true;
    if (!returns) return std::nullopt;

    const int g = depth_gcd(kernel, scc, state);
    return g > 0 ? std::optional<int>(g) : std::nullopt;
}

int CyclicDecomposition::class_of(int state) const {
    for (size_t r = 0; r < classes.size(); ++r)
        if (std::binary_search(classes[r].begin(), classes[r].end(), state))
            return static_cast<int>(r);
    return -1;
}

CyclicDecomposition cyclic_decomposition(const TransitionKernel& kernel) {
    const int n = kernel.n_states();

    // Closed communicating classes: states whose forward set equals their SCC.
    std::vector<int> scc_id(n, -1);
    std::vector<std::vector<int>> sccs;
    for (int i = 0; i < n; ++i) {
        if (scc_id[i] >= 0) continue;
        const auto fwd = reachable_from(kernel, i, false);
        const auto bwd = reachable_from(kernel, i, true);
        std::vector<int> members;
        for (int v = 0; v < n; ++v)
            if (fwd[v] && bwd[v]) members.push_back(v);
        const int id = static_cast<int>(sccs.size());
        for (int v : members) scc_id[v] = id;
        sccs.push_back(std::move(members));
    }

    std::vector<int> closed;
    for (size_t c = 0; c < sccs.size(); ++c) {
        bool leaves = false;
        for (int u : sccs[c]) {
            for (int v = 0; v < n && !leaves; ++v)
                if (kernel.edge(u, v) && scc_id[v] != static_cast<int>(c)) leaves = true;
            if (leaves) break;
        }
        // single states without a self loop are transient, not closed
        if (!leaves) {
            if (sccs[c].size() == 1 && !kernel.edge(sccs[c][0], sccs[c][0])) continue;
            closed.push_back(static_cast<int>(c));
        }
    }
    if (closed.size() != 1) throw MultipleClosedClasses(static_cast<int>(closed.size()));

    const std::vector<int>& recurrent = sccs[static_cast<size_t>(closed[0])];
    std::vector<char> members(n, 0);
    for (int v : recurrent) members[v] = 1;
    const int anchor = *std::min_element(recurrent.begin(), recurrent.end());

    int d = depth_gcd(kernel, members, anchor);
    if (d <= 0) d = 1;

    // Class of v = BFS depth from anchor mod d (well defined by periodicity).
    std::vector<int> depth(n, -1);
    std::queue<int> q;
    depth[anchor] = 0;
    q.push(anchor);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v = 0; v < n; ++v)
            if (kernel.edge(u, v) && members[v] && depth[v] < 0) {
                depth[v] = depth[u] + 1;
                q.push(v);
            }
    }

    CyclicDecomposition dec;
    dec.period = d;
    dec.classes.assign(static_cast<size_t>(d), {});
    for (int v : recurrent) dec.classes[static_cast<size_t>(depth[v] % d)].push_back(v);
    for (auto& cls : dec.classes) std::sort(cls.begin(), cls.end());
    for (int v = 0; v < n; ++v)
        if (!members[v]) dec.transient.push_back(v);
    return dec;
}

// ---------------------------------------------------------------------------
// Periodic measures
// ---------------------------------------------------------------------------

DiscreteDistribution stationary_on_class(const TransitionKernel& kernel,
                                         const CyclicDecomposition& dec) {
    const std::vector<int>& c0 = dec.classes[0];
    const int m = static_cast<int>(c0.size());
    const Eigen::MatrixXd pd = n_step_kernel(kernel, dec.period).matrix();

    Eigen::MatrixXd restricted(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) restricted(a, b) = pd(c0[a], c0[b]);

    // x restricted' = x with sum x = 1: replace one equation by normalization.
    Eigen::MatrixXd a = restricted.transpose() - Eigen::MatrixXd::Identity(m, m);
    a.row(m - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    rhs[m - 1] = 1.0;

    Eigen::VectorXd x = a.colPivHouseholderQr().solve(rhs);
    if (!x.allFinite()) throw SingularSystem("stationary solve produced non-finite values");
    const double residual = (x.transpose() * restricted - x.transpose()).cwiseAbs().maxCoeff();
    if (residual > 1e-8) throw SingularSystem("stationary solve residual " + std::to_string(residual));

    Eigen::RowVectorXd full = Eigen::RowVectorXd::Zero(kernel.n_states());
    for (int aIdx = 0; aIdx < m; ++aIdx) full[c0[aIdx]] = std::max(0.0, x[aIdx]);
    full /= full.sum();
    return DiscreteDistribution(std::move(full));
}

DiscretePeriodicMeasure build_periodic_measure(const TransitionKernel& kernel) {
    const CyclicDecomposition dec = cyclic_decomposition(kernel);
    DiscretePeriodicMeasure pm;
    pm.period = dec.period;
    pm.measures.push_back(stationary_on_class(kernel, dec));
    for (int r = 1; r < dec.period; ++r) {
        Eigen::RowVectorXd next = pm.measures.back().weights() * kernel.matrix();
        pm.measures.emplace_back(std::move(next));
    }
    return pm;
}

DiscreteDistribution mean_measure(const DiscretePeriodicMeasure& pm) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(pm.measures[0].size());
    for (const auto& rho : pm.measures) acc += rho.weights();
    acc /= static_cast<double>(pm.period);
    return DiscreteDistribution(std::move(acc));
}

DiscreteDistribution krylov_bogoliubov_average(const TransitionKernel& kernel,
                                               const DiscreteDistribution& nu,
                                               int tau, int n_terms) {
    if (tau < 1 || n_terms < 1) throw Error("tau and N must be positive");
    const Eigen::MatrixXd step = n_step_kernel(kernel, tau).matrix();
    Eigen::RowVectorXd cur = nu.weights();
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(nu.size());
    for (int k = 0; k < n_terms; ++k) {
        cur = cur * step;
        acc += cur;
    }
    acc /= static_cast<double>(n_terms);
    return DiscreteDistribution(std::move(acc));
}

std::vector<double> convergence_profile(const TransitionKernel& kernel, int state,
                                        const DiscretePeriodicMeasure& pm, int k_max) {
    const CyclicDecomposition dec = cyclic_decomposition(kernel);
    const int s = dec.class_of(state);
    if (s < 0) throw TransientStart(state);
    const DiscreteDistribution& target = pm.measures[static_cast<size_t>(s)];

    const Eigen::MatrixXd step = n_step_kernel(kernel, pm.period).matrix();
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(kernel.n_states());
    row[state] = 1.0;
    std::vector<double> profile;
    profile.reserve(static_cast<size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) {
        row = row * step;
        profile.push_back(0.5 * (row - target.weights()).cwiseAbs().sum());
    }
    return profile;
}

double condition_a_residual(const TransitionKernel& kernel,
                            const DiscretePeriodicMeasure& pm, int k) {
    if (k < 0) throw Error("k must be nonnegative");
    const int n = kernel.n_states();
    const int tau = pm.period;
    const DiscreteDistribution mean = mean_measure(pm);

    // window average (1/tau) sum_{s = k tau}^{(k+1) tau - 1} P^s
    Eigen::MatrixXd power = n_step_kernel(kernel, k * tau).matrix();
    Eigen::MatrixXd window = Eigen::MatrixXd::Zero(n, n);
    for (int s = 0; s < tau; ++s) {
        window += power;
        if (s + 1 < tau) power = power * kernel.matrix();
    }
    window /= static_cast<double>(tau);

    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int y = 0; y < n; ++y) acc += mean[y] * std::abs(window(y, j) - mean[j]);
        worst = std::max(worst, acc);
    }
    return worst;
}

} // namespace rpd
