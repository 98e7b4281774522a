// odrc: command-line front end for the oscillator-driven reservoir experiments.

#include "odrc/analysis.hpp"
#include "odrc/config.hpp"
#include "odrc/error.hpp"
#include "odrc/harness.hpp"
#include "odrc/report.hpp"
#include "odrc/targets.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace odrc;

struct CommonOptions {
    std::string config_path;
    std::string seeds;
    std::string out;
    std::string preset = "desk";
    std::string oscillators;
    bool no_feedback = false;
    bool plots = false;
    int threads = 0;
};

void add_common(CLI::App* sub, CommonOptions& o)
{
    sub->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seeds", o.seeds, "seed list, e.g. 1,2,3 or 1-5");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--preset", o.preset, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
    sub->add_flag("--no-feedback", o.no_feedback, "disable output feedback");
    sub->add_option("--oscillators", o.oscillators, "sine, neural or none")
        ->check(CLI::IsMember({"sine", "neural", "none"}));
    sub->add_flag("--plots", o.plots, "also write SVG figures");
    sub->add_option("--threads", o.threads, "worker threads (seeds run in parallel)");
}

std::vector<std::uint64_t> parse_seeds(const std::string& text)
{
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        try {
            if (const auto dash = item.find('-'); dash != std::string::npos && dash > 0) {
                const auto lo = std::stoull(item.substr(0, dash));
                const auto hi = std::stoull(item.substr(dash + 1));
                if (hi < lo)
                    throw ConfigError("empty seed range " + item);
                for (auto s = lo; s <= hi; ++s)
                    seeds.push_back(s);
            } else {
                seeds.push_back(std::stoull(item));
            }
        } catch (const std::logic_error&) {
            throw ConfigError("bad seed list: " + text);
        }
    }
    if (seeds.empty())
        throw ConfigError("empty seed list");
    return seeds;
}

ExperimentConfig resolve_config(const CommonOptions& o, TaskKind default_task)
{
    const Preset preset = parse_preset(o.preset);
    ExperimentConfig config = o.config_path.empty() ? default_config(default_task, preset)
                                                    : load_config(o.config_path, preset);
    if (!o.seeds.empty())
        config.seeds = parse_seeds(o.seeds);
    if (!o.out.empty())
        config.output_dir = o.out;
    if (!o.oscillators.empty())
        config.oscillators = parse_oscillators(o.oscillators);
    if (o.no_feedback)
        config.feedback = false;
    if (o.plots)
        config.plots = true;
    if (o.threads > 0)
        config.threads = o.threads;
    validate(config);
    return config;
}

bool checked(double threshold) { return !std::isnan(threshold); }

// Prints one line per configured threshold; returns false if any failed.
class Verdict {
public:
    void check(const std::string& what, double value, double threshold, bool at_least)
    {
        if (!checked(threshold))
            return;
        const bool ok = at_least ? value >= threshold : value < threshold;
        ok_ = ok_ && ok;
        std::printf("%s %s = %.6g (%s %.6g)\n", ok ? "PASS" : "FAIL", what.c_str(), value, at_least ? ">=" : "<",
                    threshold);
    }
    bool ok() const { return ok_; }

private:
    bool ok_ = true;
};

void print_timing(const TimingResult& r)
{
    std::printf("%s\n", r.condition.c_str());
    for (std::size_t i = 0; i < r.curve.task_lengths_s.size(); ++i)
        std::printf("  T = %6.1f s   mean R^2 = %.4f\n", r.curve.task_lengths_s[i], r.curve.mean_r2[i]);
    std::printf("  capacity = %.4f s (sd %.4f)\n", r.capacity, r.capacity_sd);
}

void check_timing(const ExperimentConfig& config, const TimingResult& r, Verdict& v, const std::string& prefix = {})
{
    for (std::size_t i = 0; i < r.curve.task_lengths_s.size(); ++i)
        v.check(prefix + "mean R^2 at " + std::to_string(r.curve.task_lengths_s[i]) + " s", r.curve.mean_r2[i],
                config.min_mean_r2, true);
    v.check(prefix + "capacity", r.capacity, config.min_capacity, true);
}

void write(Report report, const ExperimentConfig& config)
{
    report.config_json = config_to_json(config);
    emit_report(report, config.output_dir, config.plots);
    std::printf("wrote %s\n", config.output_dir.c_str());
}

int cmd_timing(const CommonOptions& o)
{
    const auto config = resolve_config(o, TaskKind::timing);
    if (config.task != TaskKind::timing)
        throw ConfigError("timing needs task = timing");
    const auto result = run_timing_experiment(config);
    print_timing(result);
    write(make_report(result), config);
    Verdict v;
    check_timing(config, result, v);
    return v.ok() ? 0 : 1;
}

int cmd_noise(const CommonOptions& o)
{
    const auto config = resolve_config(o, TaskKind::timing);
    const auto result = run_noise_sweep(config, config.noise_grid);
    Verdict v;
    for (std::size_t i = 0; i < result.levels.size(); ++i) {
        std::printf("I0 = %-8g capacity = %.4f (sd %.4f) normalized = %.4f\n", result.levels[i], result.capacity[i],
                    result.capacity_sd[i], result.normalized[i]);
        v.check("capacity at I0=" + std::to_string(result.levels[i]), result.capacity[i], config.min_capacity, true);
    }
    write(make_report(result), config);
    return v.ok() ? 0 : 1;
}

int cmd_sweep(const CommonOptions& o, const std::string& axis_text, const std::vector<double>& values_override)
{
    auto config = resolve_config(o, TaskKind::timing);
    if (!axis_text.empty())
        config.sweep_axis = parse_axis(axis_text);
    if (!values_override.empty())
        config.sweep_values = values_override;
    const auto result = run_parameter_sweep(config, config.sweep_axis, config.sweep_values);
    Verdict v;
    for (const auto& row : result.rows) {
        std::printf("%s = %-8g capacity = %.4f (sd %.4f)\n", std::string(to_string(result.axis)).c_str(), row.value,
                    row.capacity, row.capacity_sd);
        v.check("capacity at " + std::string(to_string(result.axis)) + "=" + std::to_string(row.value), row.capacity,
                config.min_capacity, true);
    }
    write(make_report(result), config);
    return v.ok() ? 0 : 1;
}

void print_spectrum(const char* name, const LyapunovSpectrum& s)
{
    std::printf("  %-28s", name);
    for (double l : s.exponents)
        std::printf(" %+.4f", l);
    std::printf("   sum %+.4f\n", s.sum());
}

int cmd_chaos(const CommonOptions& o, const std::string& system)
{
    const auto config = resolve_config(o, system.empty() ? TaskKind::lorenz : parse_task(system));
    if (!is_chaotic(config.task))
        throw ConfigError("chaos needs task = lorenz, rossler or ks");
    const auto result = run_chaos_experiment(config);
    std::printf("%s on %s\n", result.condition.c_str(), std::string(to_string(config.task)).c_str());
    if (result.target_spectrum)
        print_spectrum("target (Sano-Sawada)", *result.target_spectrum);
    if (result.reference_spectrum)
        print_spectrum("target (Benettin)", *result.reference_spectrum);
    Verdict v;
    double r2_sum = 0.0, dist_sum = 0.0;
    for (const auto& s : result.seeds) {
        std::printf("seed %llu: task R^2 = %.4f  map distance repro = %.4f gen = %.4f%s\n",
                    static_cast<unsigned long long>(s.seed), s.task_r2.mean, s.reproduction_map_distance,
                    s.generalization_map_distance, s.diverged ? "  (diverged)" : "");
        if (s.generalization_spectrum)
            print_spectrum("generalization spectrum", *s.generalization_spectrum);
        if (!s.spectrum_error.empty())
            std::printf("  spectrum: %s\n", s.spectrum_error.c_str());
        r2_sum += s.task_r2.mean;
        dist_sum += s.generalization_map_distance;
    }
    const double n = static_cast<double>(result.seeds.size());
    v.check("mean task R^2", r2_sum / n, config.min_mean_r2, true);
    v.check("mean generalization map distance", dist_sum / n, config.max_return_map_distance, false);
    write(make_report(result), config);
    return v.ok() ? 0 : 1;
}

int cmd_lyapunov(const std::string& input, double model_time, const std::string& system, double duration_s,
                 bool oracle, const std::string& out)
{
    Report report;
    report.experiment = "lyapunov";
    auto add = [&](const std::string& segment, const LyapunovSpectrum& s) {
        print_spectrum(segment.c_str(), s);
        auto at = [&](std::size_t i) { return i < s.exponents.size() ? s.exponents[i] : std::nan(""); };
        report.spectrum.push_back(SpectrumRow{segment, at(0), at(1), at(2)});
    };
    if (!input.empty()) {
        const auto series = read_series_csv(input);
        SanoSawadaParams params;
        if (model_time > 0.0)
            params.model_time_per_sample = model_time;
        else if (series.model_time_per_sample > 0.0)
            params.model_time_per_sample = series.model_time_per_sample;
        add("input", lyapunov_sano_sawada(series.data, params));
    } else {
        const TaskKind task = parse_task(system);
        if (!is_chaotic(task))
            throw ArgumentError("lyapunov needs --input or --system lorenz|rossler|ks");
        const auto target = chaos_target(task, duration_s);
        ExperimentConfig config = default_config(task);
        const auto params = sano_sawada_params(config, target.model_time_per_sample);
        Eigen::MatrixXd cols(target.length(), 3);
        const auto dims = lyapunov_dimensions(task);
        for (std::size_t i = 0; i < dims.size(); ++i)
            cols.col(static_cast<Eigen::Index>(i)) = target.data.col(dims[i]);
        add("target/sano-sawada", lyapunov_sano_sawada(cols, params));
        if (oracle) {
            if (task == TaskKind::ks)
                throw ArgumentError("no tangent-space oracle for ks");
            add("target/benettin",
                lyapunov_benettin_oracle(task == TaskKind::lorenz ? FlowSystem::lorenz : FlowSystem::rossler));
        }
    }
    if (!out.empty()) {
        emit_report(report, out);
        std::printf("wrote %s\n", out.c_str());
    }
    return 0;
}

int cmd_gen_target(const std::string& system, double interval_s, double duration_s, const std::string& out)
{
    const TaskKind task = parse_task(system);
    TargetSeries series;
    if (task == TaskKind::timing)
        series = timing_target(TimingSpec{interval_s * 1000.0});
    else
        series = chaos_target(task, duration_s);
    write_series_csv(series, out);
    std::printf("wrote %s (%lld x %lld)\n", out.c_str(), static_cast<long long>(series.length()),
                static_cast<long long>(series.dims()));
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Oscillator-driven reservoir computing experiments"};
    app.require_subcommand(1);

    CommonOptions timing_opts, chaos_opts, noise_opts, sweep_opts;
    auto* timing = app.add_subcommand("timing", "interval timing task");
    add_common(timing, timing_opts);

    auto* chaos = app.add_subcommand("chaos", "chaotic time-series reproduction");
    add_common(chaos, chaos_opts);
    std::string chaos_system;
    chaos->add_option("--system", chaos_system, "lorenz, rossler or ks")
        ->check(CLI::IsMember({"lorenz", "rossler", "ks"}));

    auto* noise = app.add_subcommand("noise-sweep", "timing capacity versus noise amplitude");
    add_common(noise, noise_opts);

    auto* sweep = app.add_subcommand("param-sweep", "timing capacity versus one parameter");
    add_common(sweep, sweep_opts);
    std::string axis;
    std::vector<double> values;
    sweep->add_option("--axis", axis, "band, n_os, g_os, g or tau_nr")
        ->check(CLI::IsMember({"band", "n_os", "g_os", "g", "tau_nr"}));
    sweep->add_option("--values", values, "sweep values")->delimiter(',');

    auto* lyap = app.add_subcommand("lyapunov", "Lyapunov spectrum of a series");
    std::string lyap_input, lyap_system = "lorenz", lyap_out;
    double lyap_duration = 200.0, lyap_model_time = 0.0;
    bool lyap_oracle = false;
    lyap->add_option("--input", lyap_input, "series CSV (t_ms,d0,...)")->check(CLI::ExistingFile);
    lyap->add_option("--model-time", lyap_model_time,
                     "model time per input sample (e.g. 0.005 for Lorenz); default 1")
        ->check(CLI::PositiveNumber);
    lyap->add_option("--system", lyap_system, "generate lorenz, rossler or ks instead");
    lyap->add_option("--duration", lyap_duration, "generated length in seconds");
    lyap->add_flag("--oracle", lyap_oracle, "also run the tangent-space reference");
    lyap->add_option("--out", lyap_out, "output directory for spectrum.csv");

    auto* gen = app.add_subcommand("gen-target", "write a target series as CSV");
    std::string gen_system = "lorenz", gen_out = "target.csv";
    double gen_interval = 1.0, gen_duration = 40.0;
    gen->add_option("--system", gen_system, "timing, lorenz, rossler or ks");
    gen->add_option("--interval", gen_interval, "timing interval in seconds");
    gen->add_option("--duration", gen_duration, "chaotic series length in seconds");
    gen->add_option("--out", gen_out, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (timing->parsed())
            return cmd_timing(timing_opts);
        if (chaos->parsed())
            return cmd_chaos(chaos_opts, chaos_system);
        if (noise->parsed())
            return cmd_noise(noise_opts);
        if (sweep->parsed())
            return cmd_sweep(sweep_opts, axis, values);
        if (lyap->parsed())
            return cmd_lyapunov(lyap_input, lyap_model_time, lyap_system, lyap_duration, lyap_oracle, lyap_out);
        if (gen->parsed())
            return cmd_gen_target(gen_system, gen_interval, gen_duration, gen_out);
    } catch (const std::exception& e) {
        std::cerr << "odrc: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
