// Acceptance suite: one PASS/FAIL line per criterion.
//
//   odrc_acceptance                 run all criteria
//   odrc_acceptance --criterion 3   run selected criteria (repeatable)
//   odrc_acceptance --list

#include "odrc/analysis.hpp"
#include "odrc/config.hpp"
#include "odrc/error.hpp"
#include "odrc/harness.hpp"
#include "odrc/report.hpp"
#include "odrc/reservoir.hpp"
#include "odrc/rng.hpp"
#include "odrc/targets.hpp"
#include "odrc/training.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace odrc;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s; // <= 0: no runtime limit
    std::function<Outcome()> run;
};

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string fixed(double v, int digits = 4)
{
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << v;
    return s.str();
}

double mean(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return v.empty() ? std::nan("") : s / static_cast<double>(v.size());
}

// ---------------------------------------------------------------- 1, 2, 10

Outcome rls_exactness()
{
    constexpr Eigen::Index n = 50, n_ro = 2, samples = 300;
    constexpr double alpha = 1.0;
    Rng rng = make_rng(20240);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd r(samples, n), d(samples, n_ro);
    for (Eigen::Index i = 0; i < samples; ++i) {
        for (Eigen::Index j = 0; j < n; ++j)
            r(i, j) = std::tanh(2.0 * u(rng));
        for (Eigen::Index j = 0; j < n_ro; ++j)
            d(i, j) = u(rng);
    }

    Readout ro(n_ro, n);
    RlsState rls(n, alpha);
    for (Eigen::Index i = 0; i < samples; ++i)
        rls_update(rls, ro, r.row(i).transpose(), d.row(i).transpose());

    const Eigen::MatrixXd gram = r.transpose() * r + alpha * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd batch = gram.ldlt().solve(r.transpose() * d).transpose();
    const double dev = (ro.weights() - batch).cwiseAbs().maxCoeff();
    return {dev < 1e-6, "max |W_rls - W_ridge| = " + sci(dev)};
}

Outcome euler_fidelity()
{
    constexpr Eigen::Index n = 40, n_os = 10, n_ro = 3;
    const GainConfig gains;
    const auto w = init_weights(n, n_os, n_ro, gains, 0.2, 31);
    const Eigen::MatrixXd dense(w.recurrent);
    Rng rng = make_rng(77);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> tau_draw(2.0, 50.0);

    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        StepParams params;
        params.tau_ms = tau_draw(rng);
        ReservoirState s = init_state(n, rng);
        Eigen::VectorXd o(n_os), y(n_ro);
        for (auto& v : o)
            v = gauss(rng);
        for (auto& v : y)
            v = gauss(rng);
        const double onset = trial % 3 == 0 ? 1.0 : 0.0;
        const ReservoirState before = s;
        step(s, w, o, onset, y, params);

        const long double a = static_cast<long double>(params.dt_ms) / static_cast<long double>(params.tau_ms);
        std::vector<long double> rate(static_cast<std::size_t>(n));
        for (Eigen::Index j = 0; j < n; ++j)
            rate[static_cast<std::size_t>(j)] = std::tanh(static_cast<long double>(before.x[j]));
        for (Eigen::Index i = 0; i < n; ++i) {
            long double in = onset * static_cast<long double>(w.onset[i]);
            for (Eigen::Index j = 0; j < n; ++j)
                in += static_cast<long double>(dense(i, j)) * rate[static_cast<std::size_t>(j)];
            for (Eigen::Index j = 0; j < n_os; ++j)
                in += static_cast<long double>(w.oscillator(i, j)) * o[j];
            for (Eigen::Index j = 0; j < n_ro; ++j)
                in += static_cast<long double>(w.feedback(i, j)) * y[j];
            const long double ref = before.x[i] + a * (-static_cast<long double>(before.x[i]) + in);
            const double scale = std::max(1.0L, std::abs(ref));
            worst = std::max(worst, static_cast<double>(std::abs(s.x[i] - ref) / scale));
        }
    }
    return {worst < 1e-12, "10^4 steps, worst relative error " + sci(worst)};
}

Outcome generators()
{
    std::vector<std::string> failures;
    std::ostringstream detail;

    // RK4 order on Lorenz
    const auto rhs = [](const Eigen::Vector3d& v) { return lorenz_rhs(v); };
    const auto integrate = [&](double h) {
        Eigen::Vector3d s(1.0, 1.0, 1.0);
        const auto steps = std::lround(0.5 / h);
        for (long i = 0; i < steps; ++i)
            s = rk4_step(rhs, s, h);
        return s;
    };
    const Eigen::Vector3d ref = integrate(1e-5);
    const double e1 = (integrate(0.01) - ref).norm(), e2 = (integrate(0.005) - ref).norm(),
                 e3 = (integrate(0.0025) - ref).norm();
    const double order = std::min(std::log2(e1 / e2), std::log2(e2 / e3));
    detail << "rk4 order " << fixed(order, 2);
    if (!(order >= 3.5))
        failures.push_back("rk4 order");

    // Benettin oracle
    const auto spectrum = lyapunov_benettin_oracle(FlowSystem::lorenz);
    const std::vector<double> expected{0.906, 0.0, -14.57};
    detail << "; benettin (" << fixed(spectrum.exponents[0]) << ", " << fixed(spectrum.exponents[1]) << ", "
           << fixed(spectrum.exponents[2]) << ") sum " << fixed(spectrum.sum());
    for (int i : {0, 2})
        if (std::abs(spectrum.exponents[i] - expected[i]) > 0.05 * std::abs(expected[i]))
            failures.push_back("lambda" + std::to_string(i + 1));
    // the zero exponent: 5% of the largest magnitude
    if (std::abs(spectrum.exponents[1]) > 0.05 * expected[0])
        failures.push_back("lambda2");
    if (std::abs(spectrum.sum() + 13.667) > 0.02 * 13.667)
        failures.push_back("spectrum sum");

    // KS linear modes
    KsParams linear;
    linear.nonlinear = false;
    KsSolver lin(linear, ks_initial_condition(linear));
    const Eigen::VectorXcd v0 = lin.spectrum();
    lin.step(100);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < v0.size(); ++k) {
        if (std::abs(v0[k]) < 1e-12)
            continue;
        const double q = lin.wavenumbers()[k];
        const std::complex<double> want = v0[k] * std::exp((q * q - q * q * q * q) * lin.time());
        worst = std::max(worst, std::abs(lin.spectrum()[k] - want) / std::abs(want));
    }
    detail << "; ks linear rel err " << sci(worst);
    if (!(worst < 1e-6))
        failures.push_back("ks linear modes");

    // KS bounded
    KsParams params;
    KsSolver ks(params, ks_initial_condition(params));
    double peak = 0.0;
    bool finite = true;
    for (int i = 0; i < 100000; ++i) {
        ks.step();
        if (i % 100 == 99) {
            const auto u = ks.field();
            finite = finite && u.allFinite();
            peak = finite ? std::max(peak, u.cwiseAbs().maxCoeff()) : peak;
        }
    }
    detail << "; ks max |u| over 1e5 steps " << fixed(peak, 3);
    if (!finite || !(peak < 10.0))
        failures.push_back("ks bounded");

    for (const auto& f : failures)
        detail << "; failed: " << f;
    return {failures.empty(), detail.str()};
}

// ---------------------------------------------------------------- timing

ExperimentConfig timing_config()
{
    ExperimentConfig c = default_config(TaskKind::timing);
    c.intervals_s = {2.0, 5.0};
    c.seeds = {1, 2, 3, 4, 5};
    return c;
}

std::string curve_summary(const TimingResult& r)
{
    std::ostringstream s;
    for (std::size_t i = 0; i < r.curve.task_lengths_s.size(); ++i)
        s << (i ? ", " : "") << "R2(" << r.curve.task_lengths_s[i] << " s) = " << fixed(r.curve.mean_r2[i]);
    return s.str();
}

Outcome timing()
{
    const auto result = run_timing_experiment(timing_config());
    const bool pass = std::ranges::all_of(result.curve.mean_r2, [](double v) { return v >= 0.8; });
    return {pass, curve_summary(result)};
}

Outcome baseline()
{
    ExperimentConfig c = timing_config();
    c.oscillators = OscillatorKind::none;
    c.feedback = false;
    c.intervals_s = {5.0};
    const auto result = run_timing_experiment(c);
    return {result.curve.mean_r2.at(0) < 0.5, "no oscillators, no feedback: " + curve_summary(result)};
}

Outcome gain_sweep()
{
    ExperimentConfig c = default_config(TaskKind::timing);
    c.intervals_s = {1.0, 2.0, 5.0};
    c.seeds = {1, 2, 3};
    const auto sweep = run_parameter_sweep(c, SweepAxis::g, {0.8, 1.0, 1.2, 1.5, 2.0});
    std::map<double, double> cap;
    std::ostringstream s;
    for (const auto& row : sweep.rows) {
        cap[row.value] = row.capacity;
        s << (s.tellp() > 0 ? ", " : "") << "C(g=" << row.value << ") = " << fixed(row.capacity);
    }
    const double inside = std::max({cap[1.0], cap[1.2], cap[1.5]});
    const bool pass = inside > cap[0.8] && inside > cap[2.0];
    return {pass, s.str()};
}

Outcome noise()
{
    ExperimentConfig c = default_config(TaskKind::timing);
    c.intervals_s = {1.0, 2.0, 5.0};
    c.seeds = {1, 2, 3};
    const auto sweep = run_noise_sweep(c, {1e-3, 0.1});
    const double normalized = sweep.normalized.at(1);
    return {normalized >= 0.8, "C(1e-3) = " + fixed(sweep.capacity[0]) + ", C(0.1) = " + fixed(sweep.capacity[1])
                                   + ", normalized " + fixed(normalized)};
}

Outcome determinism()
{
    const auto root = std::filesystem::temp_directory_path() / "odrc_acceptance_determinism";
    std::filesystem::remove_all(root);
    const ExperimentConfig c = timing_config();
    for (const char* run : {"a", "b"}) {
        Report report = make_report(run_timing_experiment(c));
        report.config_json = config_to_json(c);
        emit_report(report, root / run);
    }

    std::vector<std::string> differing;
    std::size_t compared = 0;
    for (const auto& entry : std::filesystem::directory_iterator(root / "a")) {
        if (entry.path().extension() != ".csv")
            continue;
        const auto read = [](const std::filesystem::path& p) {
            std::ifstream in(p, std::ios::binary);
            return std::string(std::istreambuf_iterator<char>(in), {});
        };
        const auto other = root / "b" / entry.path().filename();
        if (!std::filesystem::exists(other) || read(entry.path()) != read(other))
            differing.push_back(entry.path().filename().string());
        ++compared;
    }
    std::filesystem::remove_all(root);
    std::string detail = std::to_string(compared) + " CSV files compared";
    for (const auto& f : differing)
        detail += "; differs: " + f;
    return {compared > 0 && differing.empty(), detail};
}

Outcome neural()
{
    ExperimentConfig c = default_config(TaskKind::timing);
    c.oscillators = OscillatorKind::neural;
    c.tau_nr_ms = 20.0;
    c.intervals_s = {2.0};
    c.seeds = {1, 2, 3};

    std::size_t checked = 0, fixed_points = 0;
    for (auto seed : c.seeds) {
        const Network net = build_network(c, seed);
        for (const auto& osc : *net.oscillators.neural()) {
            const NeuralOscillatorParams p;
            const auto trace = osc.probe_trace(p.probe_ms, p.probe_discard_ms);
            fixed_points += detect_fixed_point(trace, p.fixed_point_window_ms, p.fixed_point_tolerance);
            ++checked;
        }
    }
    const auto result = run_timing_experiment(c);
    const double r2 = result.curve.mean_r2.at(0);
    return {r2 >= 0.7 && fixed_points == 0 && checked == c.seeds.size() * static_cast<std::size_t>(c.n_os),
            "R2(2 s) = " + fixed(r2) + ", " + std::to_string(checked) + " oscillators checked, "
                + std::to_string(fixed_points) + " fixed points"};
}

// ---------------------------------------------------------------- chaos

ExperimentConfig lorenz_config(double f_min, double f_max)
{
    ExperimentConfig c = default_config(TaskKind::lorenz);
    c.f_min_hz = f_min;
    c.f_max_hz = f_max;
    c.seeds = {1, 2, 3};
    return c;
}

// 7 and 8 share one run when selected together.
std::optional<ChaosResult> lorenz_run;

const ChaosResult& lorenz_main()
{
    if (!lorenz_run)
        lorenz_run = run_chaos_experiment(lorenz_config(10.0, 25.0));
    return *lorenz_run;
}

Outcome lorenz_reproduction()
{
    const auto& result = lorenz_main();
    std::vector<double> r2;
    std::ostringstream s;
    for (const auto& seed : result.seeds) {
        r2.push_back(seed.task_r2.mean);
        s << "seed " << seed.seed << " R2 " << fixed(seed.task_r2.mean) << (seed.diverged ? " (diverged)" : "") << "; ";
    }
    s << "mean " << fixed(mean(r2));
    return {mean(r2) >= 0.8, s.str()};
}

Outcome lorenz_generalization()
{
    const auto& result = lorenz_main();
    const double reference = result.reference_spectrum ? result.reference_spectrum->exponents.at(0)
                                                       : lyapunov_benettin_oracle(FlowSystem::lorenz).exponents.at(0);
    int good = 0;
    std::ostringstream s;
    s << "benettin lambda1 " << fixed(reference);
    for (const auto& seed : result.seeds) {
        const double dist = seed.generalization_map_distance;
        s << "; seed " << seed.seed << " map distance " << fixed(dist);
        bool ok = dist < 0.05;
        if (seed.generalization_spectrum) {
            const double l1 = seed.generalization_spectrum->exponents.at(0);
            s << ", lambda1 " << fixed(l1);
            ok = ok && l1 > 0.0 && std::abs(l1 - reference) <= 0.5 * reference;
        } else {
            s << ", no spectrum (" << seed.spectrum_error << ")";
            ok = false;
        }
        good += ok;
    }
    s << "; " << good << " of " << result.seeds.size() << " seeds pass";
    return {good >= 2, s.str()};
}

Outcome band_dichotomy()
{
    const auto low = run_chaos_experiment(lorenz_config(1.0, 10.0));
    const auto high = run_chaos_experiment(lorenz_config(25.0, 50.0));
    int good = 0;
    std::ostringstream s;
    for (std::size_t i = 0; i < low.seeds.size(); ++i) {
        const auto& a = low.seeds[i];
        const auto& b = high.seeds[i];
        const bool ok = a.task_r2.mean > b.task_r2.mean && b.generalization_map_distance < a.generalization_map_distance;
        s << "seed " << a.seed << ": R2 " << fixed(a.task_r2.mean) << " vs " << fixed(b.task_r2.mean) << ", map distance "
          << fixed(a.generalization_map_distance) << " vs " << fixed(b.generalization_map_distance) << "; ";
        good += ok;
    }
    s << good << " of " << low.seeds.size() << " seeds pass ([1-10] Hz vs [25-50] Hz)";
    return {good >= 2, s.str()};
}

std::vector<Criterion> criteria()
{
    return {
        {1, "RLS exactness", 1.0, rls_exactness},
        {2, "Euler step fidelity", 1.0, euler_fidelity},
        {3, "timing task", 600.0, timing},
        {4, "baseline contrast", 300.0, baseline},
        {5, "reservoir-gain sweep", 1200.0, gain_sweep},
        {6, "noise robustness", 1200.0, noise},
        {7, "Lorenz reproduction", 2700.0, lorenz_reproduction},
        {8, "Lorenz generalization", 0.0, lorenz_generalization},
        {9, "frequency-band dichotomy", 0.0, band_dichotomy},
        {10, "target generators", 300.0, generators},
        {11, "determinism", 0.0, determinism},
        {12, "neural ODRC", 0.0, neural},
    };
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"odrc acceptance suite"};
    std::vector<int> selected;
    bool list = false;
    app.add_option("--criterion,-c", selected, "criterion number (repeatable); default all")
        ->check(CLI::Range(1, 12));
    app.add_flag("--list", list, "list criteria and exit");
    CLI11_PARSE(app, argc, argv);

    const auto all = criteria();
    if (list) {
        for (const auto& c : all)
            std::printf("%2d  %s\n", c.id, c.name.c_str());
        return 0;
    }
    const std::set<int> wanted(selected.begin(), selected.end());

    int failed = 0;
    for (const auto& c : all) {
        if (!wanted.empty() && !wanted.contains(c.id))
            continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::string timing = fixed(seconds, 2) + " s";
        if (c.budget_s > 0.0) {
            timing += " (limit " + fixed(c.budget_s, 0) + " s)";
            if (seconds >= c.budget_s) {
                outcome.pass = false;
                outcome.detail += "; over the runtime limit";
            }
        }
        std::printf("criterion %2d %-26s %s  %s  [%s]\n", c.id, c.name.c_str(), outcome.pass ? "PASS" : "FAIL",
                    outcome.detail.c_str(), timing.c_str());
        std::fflush(stdout);
        failed += !outcome.pass;
    }
    return failed == 0 ? 0 : 1;
}
