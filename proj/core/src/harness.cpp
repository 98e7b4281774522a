#include "odrc/harness.hpp"

#include "odrc/error.hpp"
#include "odrc/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace odrc {

namespace {

// Runs f(0..count-1) on up to `threads` workers. Results must be written to
// per-index slots so the outcome does not depend on scheduling.
template <class F>
void parallel_for(std::size_t count, int threads, F&& f)
{
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        f(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

std::string format_number(double v)
{
    std::ostringstream out;
    out << v;
    return out.str();
}

double mean_of(const std::vector<double>& v)
{
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v)
{
    if (v.size() < 2)
        return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v)
        ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

constexpr std::uint64_t first_test_trial = 1000;

} // namespace

Network build_network(const ExperimentConfig& config, std::uint64_t seed)
{
    validate(config);
    Network net;
    net.seed = seed;

    const int n_os = config.oscillators == OscillatorKind::none ? 0 : config.n_os;
    const GainConfig gains{config.g, config.g_os, config.g_in, config.g_fb};
    net.weights = init_weights(config.n, n_os, config.n_ro, gains, config.p,
                               derive_seed(seed, Stream::reservoir_weights));

    switch (config.oscillators) {
    case OscillatorKind::none:
        break;
    case OscillatorKind::sine:
        net.oscillators = OscillatorBank(new_sine_bank(static_cast<std::size_t>(n_os), config.f_min_hz,
                                                       config.f_max_hz, derive_seed(seed, Stream::oscillators)));
        break;
    case OscillatorKind::neural: {
        NeuralOscillatorParams params;
        params.units = static_cast<std::size_t>(config.n_nr);
        params.gain = config.g_nr;
        params.connectivity = config.p;
        params.tau_ms = config.tau_nr_ms;
        params.onset_gain = config.g_in;
        params.max_resamples = static_cast<std::size_t>(config.max_resamples);
        std::vector<NeuralOscillator> oscillators;
        oscillators.reserve(static_cast<std::size_t>(n_os));
        for (int i = 0; i < n_os; ++i)
            oscillators.push_back(
                new_neural_oscillator(params, derive_seed(seed, Stream::oscillators, static_cast<std::uint64_t>(i) + 1)));
        net.oscillators = OscillatorBank(std::move(oscillators));
        break;
    }
    }
    return net;
}

Learner make_learner(const ExperimentConfig& config)
{
    return Learner{Readout(config.n_ro, config.n), RlsState(config.n, config.alpha)};
}

std::string condition_label(const ExperimentConfig& config)
{
    std::ostringstream out;
    switch (config.oscillators) {
    case OscillatorKind::sine:
        out << "sine[" << format_number(config.f_min_hz) << "-" << format_number(config.f_max_hz) << "]Hz";
        break;
    case OscillatorKind::neural:
        out << "neural(tau=" << format_number(config.tau_nr_ms) << "ms)";
        break;
    case OscillatorKind::none:
        out << "none";
        break;
    }
    out << (config.feedback ? "/fb" : "/nofb");
    if (config.noise > 0.0)
        out << "/I0=" << format_number(config.noise);
    return out.str();
}

TrialRecord run_trial(const ExperimentConfig& config, Network& network, Learner& learner, const TargetSeries& target,
                      TrialMode mode, std::uint64_t trial_index)
{
    const auto& weights = network.weights;
    const Eigen::Index n_ro = weights.outputs();
    if (target.dims() != n_ro || learner.readout.outputs() != n_ro || learner.readout.units() != weights.units()
        || learner.rls.units() != weights.units())
        throw ArgumentError("run_trial: component dimensions disagree");
    if (target.length() < 2)
        throw ArgumentError("run_trial: target too short");
    if (static_cast<Eigen::Index>(network.oscillators.size()) != weights.oscillators())
        throw ArgumentError("run_trial: oscillator count does not match W_os");

    const auto started = std::chrono::steady_clock::now();
    TrialRecord record;
    record.seed = network.seed;
    record.condition = condition_label(config);
    record.target = target.data;
    record.output = Eigen::MatrixXd::Zero(target.length(), n_ro);

    Rng state_rng = make_stream(network.seed, Stream::initial_state, trial_index);
    Rng noise_rng = make_stream(network.seed, Stream::noise, trial_index);
    ReservoirState state = init_state(weights.units(), state_rng);
    network.oscillators.reset();

    const StepParams step_params{1.0, config.tau_ms, config.noise};
    const long end_ms = static_cast<long>(target.length()) - 1;
    const auto start_ms = static_cast<long>(simulation_start_ms);
    Eigen::VectorXd drive(weights.oscillators());
    Eigen::VectorXd y(n_ro);
    const Eigen::VectorXd no_feedback(0);
    const std::size_t updates_before = learner.rls.updates();

    try {
        for (long t = start_ms;; ++t) {
            readout(learner.readout, state.r, y);
            if (t >= 0)
                record.output.row(t) = y.transpose();
            if (mode == TrialMode::train && update_cadence(t, t >= 1 && t <= end_ms))
                rls_update(learner.rls, learner.readout, state.r, target.data.row(t).transpose());
            if (t == end_ms)
                break;

            const double now = static_cast<double>(t);
            const double onset = onset_signal(now);
            network.oscillators.sample(now, drive);
            const Eigen::VectorXd& feedback = config.feedback ? y : no_feedback;
            step(state, weights, drive, onset, feedback, step_params, &noise_rng);
            network.oscillators.advance(onset, step_params.dt_ms);

            const double peak = state.x.cwiseAbs().maxCoeff();
            if (!(peak <= config.divergence_threshold)) {
                record.diverged = true;
                break;
            }
        }
    } catch (const NumericError&) {
        record.diverged = true;
    }

    if (!record.output.allFinite())
        record.diverged = true;
    if (record.diverged) {
        record.r2.per_dimension.assign(static_cast<std::size_t>(n_ro), 0.0);
        record.r2.mean = 0.0;
        record.r2.degenerate = true;
    } else {
        record.r2 = r_squared(record.output, record.target);
    }
    record.rls_updates = learner.rls.updates() - updates_before;
    record.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return record;
}

TimingResult summarize_timing(std::string condition, const std::vector<double>& intervals_s,
                              const std::vector<std::uint64_t>& seeds, std::vector<TimingCell> cells)
{
    if (cells.size() != intervals_s.size() * seeds.size())
        throw ArgumentError("summarize_timing: cell count does not match intervals x seeds");
    TimingResult result;
    result.condition = std::move(condition);
    result.curve.task_lengths_s = intervals_s;
    result.curve.per_seed.assign(intervals_s.size(), std::vector<double>(seeds.size(), 0.0));
    for (std::size_t i = 0; i < intervals_s.size(); ++i)
        for (std::size_t s = 0; s < seeds.size(); ++s)
            result.curve.per_seed[i][s] = cells[i * seeds.size() + s].r2;
    for (const auto& row : result.curve.per_seed)
        result.curve.mean_r2.push_back(mean_of(row));

    const double upper = intervals_s.back();
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        std::vector<double> r2;
        for (std::size_t i = 0; i < intervals_s.size(); ++i)
            r2.push_back(result.curve.per_seed[i][s]);
        result.seed_capacities.push_back(capacity(intervals_s, r2, upper));
    }
    result.capacity = mean_of(result.seed_capacities);
    result.capacity_sd = sd_of(result.seed_capacities);
    result.cells = std::move(cells);
    return result;
}

TimingResult run_timing_experiment(const ExperimentConfig& config)
{
    validate(config);
    if (config.task != TaskKind::timing)
        throw ConfigError("run_timing_experiment needs task = timing");
    const auto& intervals = config.intervals_s;
    const auto& seeds = config.seeds;

    std::vector<TimingCell> cells(intervals.size() * seeds.size());
    std::optional<TrialRecord> example;

    parallel_for(seeds.size(), config.threads, [&](std::size_t s) {
        Network network = build_network(config, seeds[s]);
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            TimingSpec spec;
            spec.interval_ms = intervals[i] * 1000.0;
            const TargetSeries target = timing_target(spec);

            Learner learner = make_learner(config);
            bool diverged = false;
            for (int rep = 0; rep < config.training_repetitions; ++rep) {
                if (config.reset_rls_between_repetitions && rep > 0)
                    learner.rls.reset();
                const auto trained =
                    run_trial(config, network, learner, target, TrialMode::train, static_cast<std::uint64_t>(rep));
                diverged = diverged || trained.diverged;
            }
            std::vector<double> r2;
            for (int k = 0; k < config.test_trials; ++k) {
                auto tested = run_trial(config, network, learner, target, TrialMode::test,
                                        first_test_trial + static_cast<std::uint64_t>(k));
                diverged = diverged || tested.diverged;
                r2.push_back(tested.r2.mean);
                if (s == 0 && i + 1 == intervals.size() && k == 0)
                    example = std::move(tested);
            }
            cells[i * seeds.size() + s] = TimingCell{intervals[i], seeds[s], mean_of(r2), diverged};
        }
    });

    auto result = summarize_timing(condition_label(config), intervals, seeds, std::move(cells));
    result.example = std::move(example);
    return result;
}

NoiseSweepResult run_noise_sweep(const ExperimentConfig& config, const std::vector<double>& levels)
{
    if (levels.empty())
        throw ArgumentError("run_noise_sweep: empty noise grid");
    constexpr double anchor = 1e-3;
    std::optional<std::size_t> anchor_index;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i] >= anchor * (1.0 - 1e-12) && levels[i] <= 10.0 * (1.0 + 1e-12)))
            throw ArgumentError("run_noise_sweep: noise levels must lie within [1e-3, 10]");
        if (std::abs(levels[i] - anchor) <= 1e-12)
            anchor_index = i;
    }
    if (!anchor_index)
        throw ArgumentError("run_noise_sweep: grid must contain the 1e-3 normalization anchor");

    NoiseSweepResult result;
    for (double level : levels) {
        ExperimentConfig c = config;
        c.noise = level;
        auto run = run_timing_experiment(c);
        result.levels.push_back(level);
        result.capacity.push_back(run.capacity);
        result.capacity_sd.push_back(run.capacity_sd);
        result.runs.push_back(std::move(run));
    }
    const double reference = result.capacity[*anchor_index];
    for (double cap : result.capacity)
        result.normalized.push_back(reference > 0.0 ? cap / reference : std::nan(""));
    return result;
}

ExperimentConfig apply_sweep_value(ExperimentConfig config, SweepAxis axis, double value)
{
    switch (axis) {
    case SweepAxis::band:
        config.f_min_hz = value;
        config.f_max_hz = 10.0 * value;
        break;
    case SweepAxis::n_os:
        if (value < 0.0 || value != std::floor(value))
            throw ConfigError("n_os sweep values must be non-negative integers");
        config.n_os = static_cast<int>(value);
        break;
    case SweepAxis::g_os:
        config.g_os = value;
        break;
    case SweepAxis::g:
        config.g = value;
        break;
    case SweepAxis::tau_nr:
        if (config.oscillators != OscillatorKind::neural)
            throw ConfigError("tau_nr sweep needs neural oscillators");
        config.tau_nr_ms = value;
        break;
    }
    validate(config);
    return config;
}

SweepResult run_parameter_sweep(const ExperimentConfig& config, SweepAxis axis, const std::vector<double>& values)
{
    if (values.empty())
        throw ArgumentError("run_parameter_sweep: no values");
    SweepResult result;
    result.axis = axis;
    for (double v : values) {
        auto run = run_timing_experiment(apply_sweep_value(config, axis, v));
        SweepRow row;
        row.value = v;
        row.capacity = run.capacity;
        row.capacity_sd = run.capacity_sd;
        row.run = std::move(run);
        result.rows.push_back(std::move(row));
    }
    return result;
}

Eigen::Index return_map_dimension(TaskKind task)
{
    return task == TaskKind::ks ? 0 : 2;
}

std::vector<Eigen::Index> lyapunov_dimensions(TaskKind task)
{
    if (task == TaskKind::ks)
        return {0, 21, 42};
    return {0, 1, 2};
}

SanoSawadaParams sano_sawada_params(const ExperimentConfig& config, double model_time_per_sample)
{
    SanoSawadaParams p;
    p.neighbors = config.lyapunov_neighbors;
    p.radius_fraction = config.lyapunov_radius_fraction;
    p.evolution_step = config.lyapunov_evolution_step;
    p.theiler_window = config.lyapunov_theiler_window;
    p.model_time_per_sample = model_time_per_sample;
    return p;
}

TargetSeries chaos_target(TaskKind task, double duration_s)
{
    const double ms = duration_s * 1000.0;
    switch (task) {
    case TaskKind::lorenz: return lorenz_series(ms);
    case TaskKind::rossler: return rossler_series(ms);
    case TaskKind::ks: return ks_series(ms);
    case TaskKind::timing: break;
    }
    throw ConfigError("chaos_target: task is not chaotic");
}

namespace {

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& cols)
{
    Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        out.col(static_cast<Eigen::Index>(j)) = m.col(cols[j]);
    return out;
}

std::optional<LyapunovSpectrum> try_spectrum(const Eigen::MatrixXd& segment, const SanoSawadaParams& params,
                                             std::string& error)
{
    try {
        return lyapunov_sano_sawada(segment, params);
    } catch (const std::exception& e) {
        if (!error.empty())
            error += "; ";
        error += e.what();
        return std::nullopt;
    }
}

} // namespace

ChaosSeedResult analyze_chaos_output(const ExperimentConfig& config, const TargetSeries& target,
                                     const ReturnMap& target_map, TrialRecord test)
{
    if (test.output.rows() != target.length() || test.output.cols() != target.dims())
        throw ArgumentError("analyze_chaos_output: output does not match the target");
    ChaosSeedResult out;
    out.seed = test.seed;
    out.diverged = test.diverged;

    const auto split = static_cast<Eigen::Index>(std::llround(config.train_s * 1000.0));
    if (split < 2 || split >= target.length() - 2)
        throw ArgumentError("analyze_chaos_output: task period must leave a generalization segment");
    const Eigen::Index reproduction_rows = split + 1;
    const Eigen::Index generalization_rows = target.length() - reproduction_rows;

    const Eigen::MatrixXd reproduction = test.output.topRows(reproduction_rows);
    const Eigen::MatrixXd generalization = test.output.bottomRows(generalization_rows);

    if (test.diverged) {
        out.task_r2.per_dimension.assign(static_cast<std::size_t>(target.dims()), 0.0);
        out.task_r2.degenerate = true;
        out.reproduction_map.insufficient = out.generalization_map.insufficient = true;
        out.reproduction_map_distance = out.generalization_map_distance = std::numeric_limits<double>::infinity();
        out.spectrum_error = "trial diverged";
        out.test = std::move(test);
        return out;
    }

    out.task_r2 = r_squared(reproduction, target.data.topRows(reproduction_rows));
    const Eigen::Index map_dim = return_map_dimension(config.task);
    out.reproduction_map = successive_maxima(Eigen::VectorXd(reproduction.col(map_dim)));
    out.generalization_map = successive_maxima(Eigen::VectorXd(generalization.col(map_dim)));
    out.reproduction_map_distance = return_map_distance(out.reproduction_map, target_map);
    out.generalization_map_distance = return_map_distance(out.generalization_map, target_map);

    if (config.lyapunov) {
        const auto dims = lyapunov_dimensions(config.task);
        const auto params = sano_sawada_params(config, target.model_time_per_sample);
        out.reproduction_spectrum = try_spectrum(select_columns(reproduction, dims), params, out.spectrum_error);
        out.generalization_spectrum = try_spectrum(select_columns(generalization, dims), params, out.spectrum_error);
    }
    out.test = std::move(test);
    return out;
}

ChaosResult run_chaos_experiment(const ExperimentConfig& config)
{
    validate(config);
    if (!is_chaotic(config.task))
        throw ConfigError("run_chaos_experiment needs a chaotic task");

    ChaosResult result;
    result.condition = condition_label(config);
    result.task_s = config.train_s;
    result.target = chaos_target(config.task, config.test_s);
    const Eigen::Index map_dim = return_map_dimension(config.task);
    result.target_map = successive_maxima(Eigen::VectorXd(result.target.data.col(map_dim)));
    if (config.lyapunov) {
        std::string ignored;
        result.target_spectrum = try_spectrum(select_columns(result.target.data, lyapunov_dimensions(config.task)),
                                              sano_sawada_params(config, result.target.model_time_per_sample), ignored);
        if (config.task == TaskKind::lorenz)
            result.reference_spectrum = lyapunov_benettin_oracle(FlowSystem::lorenz);
        else if (config.task == TaskKind::rossler)
            result.reference_spectrum = lyapunov_benettin_oracle(FlowSystem::rossler);
    }

    TargetSeries training = result.target;
    training.data = result.target.data.topRows(std::llround(config.train_s * 1000.0) + 1);

    result.seeds.resize(config.seeds.size());
    parallel_for(config.seeds.size(), config.threads, [&](std::size_t s) {
        Network network = build_network(config, config.seeds[s]);
        Learner learner = make_learner(config);
        for (int rep = 0; rep < config.training_repetitions; ++rep) {
            if (config.reset_rls_between_repetitions && rep > 0)
                learner.rls.reset();
            run_trial(config, network, learner, training, TrialMode::train, static_cast<std::uint64_t>(rep));
        }
        auto test = run_trial(config, network, learner, result.target, TrialMode::test, first_test_trial);
        result.seeds[s] = analyze_chaos_output(config, result.target, result.target_map, std::move(test));
    });
    return result;
}

} // namespace odrc
