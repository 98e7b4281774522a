#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace odrc {

enum class TaskKind { timing, lorenz, rossler, ks };
enum class OscillatorKind { sine, neural, none };
enum class Preset { desk, paper };
enum class SweepAxis { band, n_os, g_os, g, tau_nr };

std::string_view to_string(TaskKind kind);
std::string_view to_string(OscillatorKind kind);
std::string_view to_string(Preset preset);
std::string_view to_string(SweepAxis axis);
TaskKind parse_task(std::string_view text);
OscillatorKind parse_oscillators(std::string_view text);
Preset parse_preset(std::string_view text);
SweepAxis parse_axis(std::string_view text);

bool is_chaotic(TaskKind kind) noexcept;

inline constexpr double unset = std::numeric_limits<double>::quiet_NaN();

/// Everything one experiment run needs. Field names double as the keys of
/// the JSON config file.
struct ExperimentConfig {
    TaskKind task = TaskKind::timing;
    OscillatorKind oscillators = OscillatorKind::sine;

    // oscillators
    double f_min_hz = 0.1;
    double f_max_hz = 1.0;
    double tau_nr_ms = 20.0;
    int n_os = 10;
    int n_nr = 100;
    double g_nr = 1.2;
    int max_resamples = 50;

    // reservoir
    int n = 400;
    int n_ro = 1;
    double g = 1.5;
    double g_os = 0.5;
    double g_in = 5.0;
    double g_fb = 3.0;
    double p = 0.1;
    double tau_ms = 10.0;
    double noise = 0.0;
    bool feedback = true;
    double divergence_threshold = 1e6;

    // training
    double alpha = 1.0;
    int training_repetitions = 10;
    bool reset_rls_between_repetitions = false;
    int test_trials = 1;

    // schedule
    std::vector<double> intervals_s{1.0, 2.0, 5.0, 10.0};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    double train_s = 20.0;
    double test_s = 40.0;

    // sweeps
    std::vector<double> noise_grid{1e-3, 1e-2, 1e-1, 1.0, 10.0};
    SweepAxis sweep_axis = SweepAxis::g;
    std::vector<double> sweep_values{0.8, 1.0, 1.2, 1.5, 2.0};

    // Lyapunov estimation
    bool lyapunov = true;
    int lyapunov_neighbors = 30;
    double lyapunov_radius_fraction = 0.02;
    int lyapunov_evolution_step = 10;
    int lyapunov_theiler_window = 50;

    // output
    std::string output_dir = "out";
    bool plots = false;
    int threads = 1;

    // acceptance thresholds; NaN means "not checked"
    double min_mean_r2 = unset;
    double min_capacity = unset;
    double max_return_map_distance = unset;
};

/// Table-1 defaults plus task- and preset-specific schedule.
ExperimentConfig default_config(TaskKind task, Preset preset = Preset::desk);

/// Parses a flat JSON object. `task` (and the preset) pick the defaults;
/// every other key overrides one field. Unknown keys and wrongly typed
/// values throw ConfigError.
ExperimentConfig parse_config(std::string_view json_text, Preset preset = Preset::desk);
ExperimentConfig load_config(const std::filesystem::path& path, Preset preset = Preset::desk);

/// Full config as pretty-printed JSON (all keys, including defaults).
std::string config_to_json(const ExperimentConfig& config);

/// Throws ConfigError on inconsistent or out-of-range values.
void validate(const ExperimentConfig& config);

} // namespace odrc
