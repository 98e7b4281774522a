#pragma once

#include "odrc/analysis.hpp"
#include "odrc/config.hpp"
#include "odrc/oscillators.hpp"
#include "odrc/reservoir.hpp"
#include "odrc/targets.hpp"
#include "odrc/training.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace odrc {

/// One network instance: fixed reservoir weights plus its oscillator bank.
/// All randomness hangs off `seed` through named streams.
struct Network {
    ReservoirWeights weights;
    OscillatorBank oscillators;
    std::uint64_t seed = 0;
};

Network build_network(const ExperimentConfig& config, std::uint64_t seed);

/// Trainable part: readout plus RLS state.
struct Learner {
    Readout readout;
    RlsState rls;
};

Learner make_learner(const ExperimentConfig& config);

enum class TrialMode { train, test };

struct TrialRecord {
    std::uint64_t seed = 0;
    std::string condition;
    Eigen::MatrixXd output; ///< t = 0 .. end ms, one row per ms
    Eigen::MatrixXd target; ///< aligned with output
    RSquared r2;
    double wall_ms = 0.0;
    bool diverged = false;
    std::size_t rls_updates = 0; ///< updates performed during this trial
};

/// Simulates one trial from -250 ms to the last target sample. In train mode
/// the readout is adapted by RLS on the update cadence from t = 1 ms. A fresh
/// initial reservoir state (and noise stream) is drawn for `trial_index`.
/// Divergence (|x| above the configured threshold or non-finite values)
/// ends the trial with R^2 = 0 and the diverged flag set.
TrialRecord run_trial(const ExperimentConfig& config, Network& network, Learner& learner, const TargetSeries& target,
                      TrialMode mode, std::uint64_t trial_index);

/// Comma-free label for the configured condition, e.g. "sine[0.1-1]Hz/fb".
std::string condition_label(const ExperimentConfig& config);

struct TimingCell {
    double interval_s = 0.0;
    std::uint64_t seed = 0;
    double r2 = 0.0;
    bool diverged = false;
};

struct TimingResult {
    std::string condition;
    PerformanceCurve curve;
    std::vector<TimingCell> cells;       ///< interval-major, seed-minor
    std::vector<double> seed_capacities; ///< one per seed
    double capacity = 0.0;               ///< mean over seeds
    double capacity_sd = 0.0;
    /// Test trace of the first seed at the longest interval.
    std::optional<TrialRecord> example;
};

/// Trains (config.training_repetitions passes) and tests every
/// (interval, seed) cell and summarizes R^2 and timing capacity.
TimingResult run_timing_experiment(const ExperimentConfig& config);

/// Capacity statistics from per-cell R^2 values (also used for injected,
/// synthetic results).
TimingResult summarize_timing(std::string condition, const std::vector<double>& intervals_s,
                              const std::vector<std::uint64_t>& seeds, std::vector<TimingCell> cells);

struct NoiseSweepResult {
    std::vector<double> levels;
    std::vector<double> capacity;
    std::vector<double> capacity_sd;
    std::vector<double> normalized; ///< capacity / capacity at I_0 = 1e-3
    std::vector<TimingResult> runs;
};

/// Timing experiment per noise level (noise active in training and test).
/// The grid must lie within [1e-3, 10] and contain 1e-3.
NoiseSweepResult run_noise_sweep(const ExperimentConfig& config, const std::vector<double>& levels);

struct SweepRow {
    double value = 0.0;
    double capacity = 0.0;
    double capacity_sd = 0.0;
    TimingResult run;
};

struct SweepResult {
    SweepAxis axis = SweepAxis::g;
    std::vector<SweepRow> rows;
};

/// Applies one sweep value to a copy of `config`. For the band axis a value
/// v selects the decade band [v, 10 v] Hz.
ExperimentConfig apply_sweep_value(ExperimentConfig config, SweepAxis axis, double value);

SweepResult run_parameter_sweep(const ExperimentConfig& config, SweepAxis axis, const std::vector<double>& values);

/// Coordinate used for return maps and the three probe coordinates used for
/// Lyapunov spectra of each chaotic system.
Eigen::Index return_map_dimension(TaskKind task);
std::vector<Eigen::Index> lyapunov_dimensions(TaskKind task);

SanoSawadaParams sano_sawada_params(const ExperimentConfig& config, double model_time_per_sample);

struct ChaosSeedResult {
    std::uint64_t seed = 0;
    TrialRecord test;           ///< full free-running test output
    RSquared task_r2;           ///< reproduction segment [0, train_s]
    ReturnMap reproduction_map; ///< successive maxima during the task period
    ReturnMap generalization_map;
    double reproduction_map_distance = 0.0;
    double generalization_map_distance = 0.0;
    std::optional<LyapunovSpectrum> reproduction_spectrum;
    std::optional<LyapunovSpectrum> generalization_spectrum;
    std::string spectrum_error;
    bool diverged = false;
};

struct ChaosResult {
    std::string condition;
    double task_s = 0.0; ///< length of the reproduction segment
    TargetSeries target;
    ReturnMap target_map;
    std::optional<LyapunovSpectrum> target_spectrum;  ///< Sano-Sawada on the target
    std::optional<LyapunovSpectrum> reference_spectrum; ///< Benettin (Lorenz/Roessler only)
    std::vector<ChaosSeedResult> seeds;
};

/// Generates the target for the test duration.
TargetSeries chaos_target(TaskKind task, double duration_s);

/// Analyses one test output against the target (R^2 over the task period,
/// return maps and optional spectra for both segments).
ChaosSeedResult analyze_chaos_output(const ExperimentConfig& config, const TargetSeries& target,
                                     const ReturnMap& target_map, TrialRecord test);

/// Trains on the first train_s seconds, tests free-running for test_s and
/// analyses reproduction and generalization segments.
ChaosResult run_chaos_experiment(const ExperimentConfig& config);

} // namespace odrc
