// rpd: config-driven runner for periodic-measure analysis and random
// periodic process simulation. Subcommands: analyze-chain, classify,
// simulate, slln, ulam-spectrum. Reports are deterministic for a fixed
// config and seed; timing lives in the provenance block only.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "rpd/markov.hpp"
#include "rpd/measure.hpp"
#include "rpd/rds.hpp"
#include "rpd/semiflow.hpp"
#include "rpd/spectra.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kToolVersion = "rpd 1.0.0";

// exit codes per the external contract
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitDecomposition = 3;
constexpr int kExitInconsistent = 4;
constexpr int kExitPullbackFailures = 5;

struct CliError : std::runtime_error {
    int code;
    CliError(int code_, const std::string& msg) : std::runtime_error(msg), code(code_) {}
};

template <class T>
T field_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError(kExitBadInput, "cannot open config '" + path + "'");
    json cfg;
    try {
        in >> cfg;
    } catch (const std::exception& e) {
        throw CliError(kExitBadInput, std::string("config parse error: ") + e.what());
    }
    if (field_or<int>(cfg, "schema_version", 1) != 1)
        throw CliError(kExitBadInput, "unsupported schema_version");
    return cfg;
}

uint64_t require_seed(const json& cfg) {
    if (!cfg.contains("seed"))
        throw CliError(kExitBadInput,
                       "config must carry an explicit seed (no wall-clock seeding)");
    return cfg.at("seed").get<uint64_t>();
}

rpd::TransitionKernel load_kernel(const json& system) {
    try {
        if (system.contains("kernel_csv"))
            return rpd::kernel_from_csv_file(system.at("kernel_csv").get<std::string>());
        if (system.contains("kernel")) {
            const auto rows = system.at("kernel").get<std::vector<std::vector<double>>>();
            Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows[0].size());
            for (size_t i = 0; i < rows.size(); ++i) {
                if (rows[i].size() != rows.size())
                    throw rpd::Error("kernel is not square");
                for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
            }
            return rpd::validate_kernel(m);
        }
    } catch (const rpd::Error& e) {
        throw CliError(kExitBadInput, std::string("invalid kernel: ") + e.what());
    }
    throw CliError(kExitBadInput, "system needs 'kernel' or 'kernel_csv'");
}

rpd::Partition partition_from(const json& cfg, rpd::Partition fallback) {
    if (!cfg.contains("partition")) return fallback;
    const json& p = cfg.at("partition");
    return rpd::Partition{p.at("lo").get<double>(), p.at("hi").get<double>(),
                          p.at("n_cells").get<int>()};
}

json distribution_to_json(const rpd::DiscreteDistribution& d) {
    std::vector<double> w(d.weights().data(), d.weights().data() + d.size());
    return json(w);
}

json complex_to_json(const std::complex<double>& z) {
    return json{{"re", z.real()}, {"im", z.imag()}, {"modulus", std::abs(z)}};
}

json report_to_json(const rpd::ErgodicAverageReport& rep) {
    return json{{"n_windows", rep.window_averages.size()},
                {"final_average", rep.running_average.back()},
                {"target", rep.target},
                {"final_gap", rep.final_gap},
                {"clt_band", rep.clt_band},
                {"within_band", rep.within_band()}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw CliError(kExitBadInput, "cannot write '" + path.string() + "'");
    out << text;
}

void write_measures_csv(const fs::path& dir,
                        const std::vector<std::pair<std::string, json>>& series) {
    std::ostringstream csv;
    csv << "series,cell_lo,cell_hi,weight\n";
    for (const auto& [name, payload] : series) {
        const auto& lo = payload.at("cell_lo");
        const auto& hi = payload.at("cell_hi");
        const auto& w = payload.at("weight");
        for (size_t i = 0; i < w.size(); ++i)
            csv << name << ',' << lo[i].dump() << ',' << hi[i].dump() << ','
                << w[i].dump() << '\n';
    }
    write_text(dir / "measures.csv", csv.str());
}

json measure_series(const rpd::EmpiricalMeasure& m) {
    json lo = json::array(), hi = json::array(), w = json::array();
    const auto weights = m.weights();
    for (int c = 0; c < m.partition().n_cells; ++c) {
        lo.push_back(m.partition().cell_lo(c));
        hi.push_back(m.partition().cell_hi(c));
        w.push_back(weights[c]);
    }
    return json{{"cell_lo", lo}, {"cell_hi", hi}, {"weight", w}};
}

json measure_series(const rpd::DiscreteDistribution& d) {
    json lo = json::array(), hi = json::array(), w = json::array();
    for (int c = 0; c < d.size(); ++c) {
        lo.push_back(c);
        hi.push_back(c + 1);
        w.push_back(d[c]);
    }
    return json{{"cell_lo", lo}, {"cell_hi", hi}, {"weight", w}};
}

void write_spectrum_csv(const fs::path& dir, const rpd::SpectrumReport& spec) {
    std::ostringstream csv;
    csv << "re,im,modulus,on_unit_circle\n";
    for (const auto& ev : spec.eigenvalues) {
        const bool on_circle = std::abs(ev) > 1.0 - spec.delta;
        csv << json(ev.real()).dump() << ',' << json(ev.imag()).dump() << ','
            << json(std::abs(ev)).dump() << ',' << (on_circle ? 1 : 0) << '\n';
    }
    write_text(dir / "spectrum.csv", csv.str());
}

// Periodic measure at a declared period: the chain's natural measures
// replicated; the declared period must be a multiple of the cyclic period.
rpd::DiscretePeriodicMeasure declared_measure(const rpd::TransitionKernel& kernel,
                                              int declared_tau) {
    const auto natural = rpd::build_periodic_measure(kernel);
    if (declared_tau <= 0) return natural;
    if (declared_tau % natural.period != 0)
        throw CliError(kExitBadInput,
                       "declared tau " + std::to_string(declared_tau) +
                           " is not a multiple of the chain period " +
                           std::to_string(natural.period));
    rpd::DiscretePeriodicMeasure pm;
    pm.period = declared_tau;
    for (int s = 0; s < declared_tau; ++s)
        pm.measures.push_back(natural.measures[static_cast<size_t>(s % natural.period)]);
    return pm;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

json cmd_analyze_chain(const json& cfg, const fs::path& out_dir) {
    const auto kernel = load_kernel(cfg.at("system"));
    rpd::CyclicDecomposition dec;
    try {
        dec = rpd::cyclic_decomposition(kernel);
    } catch (const rpd::MultipleClosedClasses& e) {
        throw CliError(kExitDecomposition, e.what());
    }
    const auto pm = rpd::build_periodic_measure(kernel);
    const auto mean = rpd::mean_measure(pm);
    const int k_max = field_or<int>(cfg, "k_max", 10);

    json rho = json::array();
    for (const auto& m : pm.measures) rho.push_back(distribution_to_json(m));

    json profiles = json::object();
    for (const auto& cls : dec.classes)
        for (int state : cls)
            profiles[std::to_string(state)] =
                rpd::convergence_profile(kernel, state, pm, k_max);

    json residuals = json::array();
    for (int k = 0; k <= k_max; ++k)
        residuals.push_back(rpd::condition_a_residual(kernel, pm, k));

    std::vector<std::pair<std::string, json>> series;
    for (int s = 0; s < pm.period; ++s)
        series.emplace_back("rho_" + std::to_string(s),
                            measure_series(pm.measures[static_cast<size_t>(s)]));
    series.emplace_back("mean", measure_series(mean));
    write_measures_csv(out_dir, series);

    return json{{"n_states", kernel.n_states()},
                {"period", dec.period},
                {"classes", dec.classes},
                {"transient", dec.transient},
                {"rho", rho},
                {"mean", distribution_to_json(mean)},
                {"convergence_profile", profiles},
                {"condition_a_residual", residuals}};
}

json cmd_classify(const json& cfg, const fs::path& out_dir) {
    const auto kernel = load_kernel(cfg.at("system"));
    const double eps = field_or<double>(cfg, "epsilon", 1e-9);
    const double tol = field_or<double>(cfg, "tol", 1e-9);
    const double delta = field_or<double>(cfg, "delta", 1e-8);

    rpd::DiscretePeriodicMeasure pm;
    try {
        pm = declared_measure(kernel, field_or<int>(cfg, "declared_tau", 0));
    } catch (const rpd::MultipleClosedClasses& e) {
        throw CliError(kExitDecomposition, e.what());
    }

    rpd::RegimeClassification verdict;
    try {
        verdict = rpd::classify_regime(kernel, pm, eps, tol, delta);
    } catch (const rpd::InconsistentEvidence& e) {
        throw CliError(kExitInconsistent, e.what());
    }

    json spectrum = json::array();
    for (const auto& ev : verdict.spectrum.eigenvalues) spectrum.push_back(complex_to_json(ev));
    json circle = json::array();
    for (const auto& ev : verdict.spectrum.unit_circle) circle.push_back(complex_to_json(ev));

    const auto angle = rpd::angle_variable(kernel, verdict.minimal_period);
    write_spectrum_csv(out_dir, verdict.spectrum);

    return json{{"case", rpd::to_string(verdict.regime)},
                {"declared_period", verdict.declared_period},
                {"minimal_period", verdict.minimal_period},
                {"sections", verdict.sections.sections},
                {"sections_disjoint", verdict.sections.pairwise_disjoint()},
                {"spectrum", spectrum},
                {"unit_circle", circle},
                {"angle_phase_per_state", angle.phase_per_state},
                {"angle_lambda", angle.lambda}};
}

json simulate_chain(const json& cfg, uint64_t seed, const fs::path& out_dir) {
    const auto kernel = load_kernel(cfg.at("system"));
    const auto sys = rpd::make_chain_rds(kernel);
    const auto pm = rpd::build_periodic_measure(kernel);
    const int n_seeds = field_or<int>(cfg, "n_seeds", 1000);
    const int n_samples = field_or<int>(cfg, "n_samples", 1000);
    const int64_t T = field_or<int64_t>(cfg, "T", 16);
    const int warmup = field_or<int>(cfg, "pullback_periods", 20);
    rpd::PullbackOptions opts;
    opts.k_max = field_or<int>(cfg, "pullback_k_max", 500);
    opts.tol = field_or<double>(cfg, "pullback_tol", 1e-10);

    json ensembles = json::object();
    for (int s = 0; s < sys.period(); ++s) {
        const auto ens = rpd::sample_random_periodic_ensemble(sys, s, n_seeds, seed, opts);
        auto hist = rpd::EmpiricalMeasure::over_states(sys.n_states());
        for (int x : ens.values) hist.add(x);
        const auto cmp = rpd::compare_measures(hist, pm.measures[static_cast<size_t>(s)]);
        ensembles[std::to_string(s)] =
            json{{"n_converged", ens.values.size()},
                 {"n_failed", ens.n_failed},
                 {"frequencies", std::vector<double>(
                                     hist.weights().data(),
                                     hist.weights().data() + sys.n_states())},
                 {"tv_to_rho", cmp.tv},
                 {"max_abs_z", cmp.max_abs_z()}};
    }

    const auto enlarged = rpd::sample_enlarged_process(sys, T, warmup, n_samples, seed + 1);
    auto pooled = rpd::EmpiricalMeasure::over_states(sys.n_states());
    std::vector<rpd::EmpiricalMeasure> by_phase(
        static_cast<size_t>(sys.period()), rpd::EmpiricalMeasure::over_states(sys.n_states()));
    for (const auto& sample : enlarged) {
        pooled.add(sample.trajectory[0]);
        by_phase[static_cast<size_t>(sample.phase)].add(sample.trajectory[0]);
    }
    json phase_marginals = json::array();
    for (const auto& m : by_phase)
        phase_marginals.push_back(std::vector<double>(
            m.weights().data(), m.weights().data() + sys.n_states()));

    {
        std::ostringstream csv;
        csv << "t,state\n";
        for (size_t t = 0; t < enlarged[0].trajectory.size(); ++t)
            csv << t << ',' << enlarged[0].trajectory[t] << '\n';
        write_text(out_dir / "trajectory.csv", csv.str());
    }

    std::vector<std::pair<std::string, json>> series;
    for (int s = 0; s < pm.period; ++s)
        series.emplace_back("rho_" + std::to_string(s),
                            measure_series(pm.measures[static_cast<size_t>(s)]));
    write_measures_csv(out_dir, series);

    return json{{"system", "chain"},
                {"period", sys.period()},
                {"pullback_ensembles", ensembles},
                {"enlarged_pooled",
                 std::vector<double>(pooled.weights().data(),
                                     pooled.weights().data() + sys.n_states())},
                {"enlarged_by_phase", phase_marginals}};
}

json simulate_logistic(const json& cfg, uint64_t seed, const fs::path& out_dir) {
    const json& sysj = cfg.at("system");
    const auto sys = rpd::make_random_logistic(sysj.at("lambda").get<double>(),
                                               sysj.at("mu").get<double>(),
                                               field_or<double>(sysj, "p", 0.5));
    const int n_seeds = field_or<int>(cfg, "n_seeds", 400);
    rpd::PullbackOptions opts;
    opts.k_max = field_or<int>(cfg, "pullback_k_max", 500);
    opts.tol = field_or<double>(cfg, "pullback_tol", 1e-10);
    const auto part = partition_from(cfg, rpd::Partition{0.0, 1.0, 50});

    json phases = json::object();
    std::vector<rpd::EmpiricalMeasure> hist;
    for (int s = 0; s < sys.period(); ++s) {
        const auto ens = rpd::logistic_pullback_ensemble(sys, s, n_seeds, seed, opts);
        rpd::EmpiricalMeasure m(part);
        for (double v : ens.values) m.add(v);
        double mean_iter = 0.0;
        for (const auto& d : ens.details) mean_iter += d.iterations_used;
        mean_iter /= static_cast<double>(ens.details.size());
        phases[std::to_string(s)] = json{{"n_converged", ens.values.size()},
                                         {"n_failed", ens.n_failed},
                                         {"sample_mean", m.sample_mean()},
                                         {"sample_variance", m.sample_variance()},
                                         {"mean_pullback_iterations", mean_iter}};
        hist.push_back(std::move(m));
    }
    const double tv01 = rpd::compare_measures(hist[0], hist[1]).tv;

    std::vector<std::pair<std::string, json>> series;
    for (size_t s = 0; s < hist.size(); ++s)
        series.emplace_back("rho_" + std::to_string(s), measure_series(hist[s]));
    write_measures_csv(out_dir, series);

    const rpd::NoiseStream w{rpd::derive_seed(seed, 0xF00D), 0};
    const auto path = rpd::iterate(sys, w, sys.default_start(), 64);
    std::ostringstream csv;
    csv << "t,x\n";
    for (size_t t = 0; t < path.size(); ++t) csv << t << ',' << json(path[t]).dump() << '\n';
    write_text(out_dir / "trajectory.csv", csv.str());

    return json{{"system", "random_logistic"},
                {"period", sys.period()},
                {"phases", phases},
                {"tv_rho0_rho1", tv01}};
}

json simulate_ou(const json& cfg, uint64_t seed, const fs::path& out_dir) {
    const json& sysj = cfg.at("system");
    const auto u = rpd::make_periodic_ou(sysj.at("tau").get<double>(),
                                         sysj.at("sigma").get<double>(),
                                         sysj.at("n_phase").get<int>());
    auto lc = rpd::lift(u);
    const int s = field_or<int>(cfg, "phase", 0);
    const int k = field_or<int>(cfg, "pullback_periods", 30);
    const int n_samples = field_or<int>(cfg, "n_samples", 10000);
    const auto part = partition_from(cfg, rpd::Partition{-2.0, 2.0, 40});

    const auto section = rpd::section_kernel(lc, s, k, n_samples, 0.0, part, seed);

    std::vector<std::pair<std::string, json>> series;
    series.emplace_back("section_" + std::to_string(s), measure_series(section));
    write_measures_csv(out_dir, series);

    const rpd::NoiseStream w{rpd::derive_seed(seed, 0xF00D), 0};
    std::ostringstream csv;
    csv << "t,phase,x\n";
    rpd::CylinderState state{s, 0.0};
    for (int64_t t = 0; t <= 4 * u.n_phase; ++t) {
        csv << t << ',' << state.phase << ',' << json(state.point).dump() << '\n';
        state = lc.step(state, w, t);
    }
    write_text(out_dir / "trajectory.csv", csv.str());

    return json{{"system", "periodic_ou"},
                {"phase", s},
                {"k_periods", k},
                {"n_samples", n_samples},
                {"sample_mean", section.sample_mean()},
                {"sample_variance", section.sample_variance()},
                {"out_of_range_fraction", section.out_of_range_fraction()}};
}

json cmd_simulate(const json& cfg, uint64_t seed, const fs::path& out_dir) {
    const std::string kind = cfg.at("system").at("kind").get<std::string>();
    if (kind == "chain") return simulate_chain(cfg, seed, out_dir);
    if (kind == "random_logistic") return simulate_logistic(cfg, seed, out_dir);
    if (kind == "periodic_ou") return simulate_ou(cfg, seed, out_dir);
    throw CliError(kExitBadInput, "unknown system kind '" + kind + "'");
}

json cmd_slln(const json& cfg, uint64_t seed, const fs::path& out_dir) {
    const std::string kind = cfg.at("system").at("kind").get<std::string>();
    const int64_t T = field_or<int64_t>(cfg, "T", 100000);
    const int warmup = field_or<int>(cfg, "pullback_periods", 20);

    if (kind != "chain")
        throw CliError(kExitBadInput, "slln runs on finite chains; use simulate for maps");

    const auto kernel = load_kernel(cfg.at("system"));
    const auto sys = rpd::make_chain_rds(kernel);
    const auto pm = rpd::build_periodic_measure(kernel);

    rpd::WindowSpec w;
    w.tau = sys.period();
    if (cfg.contains("window"))
        w.f0 = cfg.at("window").at("f0").get<std::vector<int>>();
    else
        w = rpd::WindowSpec::full(sys.period());

    const auto b_states = field_or<std::vector<int>>(cfg, "B", {0});
    const bool phase_locked = field_or<bool>(cfg, "phase_locked", false);

    const auto enlarged =
        rpd::sample_enlarged_process(sys, T, warmup, 1, seed + (phase_locked ? 2 : 0));
    // a phase-locked run re-draws until the phase is 0
    rpd::EnlargedSample<int> sample = enlarged[0];
    if (phase_locked) {
        uint64_t salt = 1;
        while (sample.phase != 0) {
            sample = rpd::sample_enlarged_process(sys, T, warmup, 1, seed + 2 + salt)[0];
            ++salt;
        }
    }

    const auto in_b = [&](int x) {
        return std::find(b_states.begin(), b_states.end(), x) != b_states.end();
    };
    double target = 0.0;
    for (int t0 : w.f0)
        for (int b : b_states) target += pm.at(t0 + sample.phase)[b];
    target /= static_cast<double>(w.f0.size());

    const auto rep = rpd::slln_average(sample.trajectory, w, in_b, target);

    std::ostringstream csv;
    csv << "window,average,running_average\n";
    for (size_t i = 0; i < rep.window_averages.size(); ++i)
        csv << i << ',' << json(rep.window_averages[i]).dump() << ','
            << json(rep.running_average[i]).dump() << '\n';
    write_text(out_dir / "running_average.csv", csv.str());

    json out{{"phase", sample.phase},
             {"window_f0", w.f0},
             {"B", b_states},
             {"report", report_to_json(rep)}};

    if (field_or<bool>(cfg, "test_function", false)) {
        // identity observable on paper-style 1-based state labels
        std::vector<double> f_target{0.0};
        const auto mean = rpd::mean_measure(pm);
        for (int i = 0; i < mean.size(); ++i) f_target[0] += (i + 1) * mean[i];
        const auto reps = rpd::slln_test_function<int>(
            sample.trajectory, rpd::WindowSpec::full(sys.period()),
            [](const int& x) { return std::vector<double>{static_cast<double>(x + 1)}; },
            f_target);
        out["test_function"] = report_to_json(reps[0]);
    }
    return out;
}

json cmd_ulam_spectrum(const json& cfg, uint64_t seed, const fs::path& out_dir) {
    const json& sysj = cfg.at("system");
    if (sysj.at("kind").get<std::string>() != "periodic_ou")
        throw CliError(kExitBadInput, "ulam-spectrum expects a periodic_ou system");
    const auto u = rpd::make_periodic_ou(sysj.at("tau").get<double>(),
                                         sysj.at("sigma").get<double>(),
                                         sysj.at("n_phase").get<int>());
    const auto lc = rpd::lift(u);
    const auto part = partition_from(cfg, rpd::Partition{-2.0, 2.0, 40});
    const int n_per_cell = field_or<int>(cfg, "n_per_cell", 200);
    const double delta = field_or<double>(cfg, "delta", 1e-2);

    const auto ulam = rpd::ulam_discretize_cylinder(lc, part, n_per_cell, seed);
    const auto spec = rpd::transfer_spectrum(ulam.kernel, delta);
    write_spectrum_csv(out_dir, spec);

    // roots-of-unity match at the phase count
    const int np = u.n_phase;
    double worst = 0.0;
    bool all_simple = true;
    for (int r = 0; r < np; ++r) {
        const std::complex<double> root =
            std::polar(1.0, 2.0 * M_PI * static_cast<double>(r) / np);
        double best = 1e9;
        int within = 0;
        for (const auto& ev : spec.unit_circle) {
            best = std::min(best, std::abs(ev - root));
            if (std::abs(ev - root) <= delta) ++within;
        }
        worst = std::max(worst, best);
        if (within != 1) all_simple = false;
    }

    json circle = json::array();
    for (const auto& ev : spec.unit_circle) circle.push_back(complex_to_json(ev));
    return json{{"dim", ulam.kernel.n_states()},
                {"out_of_range_fraction", ulam.out_of_range_fraction},
                {"clamp_warning", ulam.clamp_warning},
                {"unit_circle", circle},
                {"roots_of_unity_match", all_simple},
                {"max_root_distance", worst}};
}

int run(const std::string& command, const std::string& config_path,
        const std::string& out_dir_arg, std::optional<uint64_t> seed_override) {
    json cfg = load_config(config_path);
    if (seed_override) cfg["seed"] = *seed_override;
    const uint64_t seed = require_seed(cfg);

    const fs::path out_dir = out_dir_arg.empty() ? fs::path(".") : fs::path(out_dir_arg);
    fs::create_directories(out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    json results;
    int exit_code = kExitOk;
    if (command == "analyze-chain") {
        results = cmd_analyze_chain(cfg, out_dir);
    } else if (command == "classify") {
        results = cmd_classify(cfg, out_dir);
    } else if (command == "simulate") {
        results = cmd_simulate(cfg, seed, out_dir);
    } else if (command == "slln") {
        results = cmd_slln(cfg, seed, out_dir);
        if (!results.at("report").at("within_band").get<bool>()) exit_code = kExitCheckFailed;
        if (results.contains("test_function") &&
            !results.at("test_function").at("within_band").get<bool>())
            exit_code = kExitCheckFailed;
    } else if (command == "ulam-spectrum") {
        results = cmd_ulam_spectrum(cfg, seed, out_dir);
        if (!results.at("roots_of_unity_match").get<bool>()) exit_code = kExitCheckFailed;
    } else {
        throw CliError(kExitBadInput, "unknown command '" + command + "'");
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();

    json report{{"config", cfg},
                {"results", results},
                {"provenance",
                 {{"tool", kToolVersion}, {"seed", seed}, {"elapsed_ms", elapsed}}}};
    write_text(out_dir / "report.json", report.dump(2) + "\n");
    std::cout << report.at("results").dump(2) << std::endl;
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic-measure analysis and random periodic process toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::optional<uint64_t> seed_override;

    for (const char* name :
         {"analyze-chain", "classify", "simulate", "slln", "ulam-spectrum"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "run configuration (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory (default: cwd)");
        sub->add_option("--seed", seed_override, "override the config seed");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        return run(command, config_path, out_dir, seed_override);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return e.code;
    } catch (const rpd::MultipleClosedClasses& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitDecomposition;
    } catch (const rpd::InconsistentEvidence& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitInconsistent;
    } catch (const rpd::TooManyFailures& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitPullbackFailures;
    } catch (const rpd::Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitBadInput;
    }
}
