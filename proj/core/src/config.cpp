#include "odrc/config.hpp"

#include "odrc/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace odrc {

using nlohmann::json;

std::string_view to_string(TaskKind kind)
{
    switch (kind) {
    case TaskKind::timing: return "timing";
    case TaskKind::lorenz: return "lorenz";
    case TaskKind::rossler: return "rossler";
    case TaskKind::ks: return "ks";
    }
    return "?";
}

std::string_view to_string(OscillatorKind kind)
{
    switch (kind) {
    case OscillatorKind::sine: return "sine";
    case OscillatorKind::neural: return "neural";
    case OscillatorKind::none: return "none";
    }
    return "?";
}

std::string_view to_string(Preset preset)
{
    return preset == Preset::desk ? "desk" : "paper";
}

std::string_view to_string(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::band: return "band";
    case SweepAxis::n_os: return "n_os";
    case SweepAxis::g_os: return "g_os";
    case SweepAxis::g: return "g";
    case SweepAxis::tau_nr: return "tau_nr";
    }
    return "?";
}

namespace {

template <class Enum, std::size_t N>
Enum parse_enum(std::string_view text, const Enum (&values)[N], std::string_view what)
{
    for (Enum v : values)
        if (to_string(v) == text)
            return v;
    std::ostringstream msg;
    msg << "unknown " << what << " '" << text << "'";
    throw ConfigError(msg.str());
}

} // namespace

TaskKind parse_task(std::string_view text)
{
    static constexpr TaskKind all[] = {TaskKind::timing, TaskKind::lorenz, TaskKind::rossler, TaskKind::ks};
    return parse_enum(text, all, "task");
}

OscillatorKind parse_oscillators(std::string_view text)
{
    static constexpr OscillatorKind all[] = {OscillatorKind::sine, OscillatorKind::neural, OscillatorKind::none};
    return parse_enum(text, all, "oscillator kind");
}

Preset parse_preset(std::string_view text)
{
    static constexpr Preset all[] = {Preset::desk, Preset::paper};
    return parse_enum(text, all, "preset");
}

SweepAxis parse_axis(std::string_view text)
{
    static constexpr SweepAxis all[] = {SweepAxis::band, SweepAxis::n_os, SweepAxis::g_os, SweepAxis::g,
                                        SweepAxis::tau_nr};
    return parse_enum(text, all, "sweep axis");
}

bool is_chaotic(TaskKind kind) noexcept
{
    return kind != TaskKind::timing;
}

ExperimentConfig default_config(TaskKind task, Preset preset)
{
    ExperimentConfig c;
    c.task = task;
    if (task == TaskKind::timing) {
        c.n = 400;
        c.n_ro = 1;
        c.f_min_hz = 0.1;
        c.f_max_hz = 1.0;
        c.tau_nr_ms = 20.0;
        if (preset == Preset::paper) {
            c.intervals_s = {1, 2, 5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120};
            c.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        } else {
            c.intervals_s = {1, 2, 5, 10};
            c.seeds = {1, 2, 3, 4, 5};
        }
    } else {
        c.n = 3000;
        c.n_ro = task == TaskKind::ks ? 64 : 3;
        c.f_min_hz = 10.0;
        c.f_max_hz = 25.0;
        c.tau_nr_ms = 2.0;
        c.train_s = 20.0;
        c.test_s = 40.0;
        c.intervals_s = {20.0};
        c.seeds = preset == Preset::paper ? std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}
                                          : std::vector<std::uint64_t>{1, 2, 3};
    }
    return c;
}

namespace {

// Calls f(key, field) for every configurable field.
template <class Config, class F>
void visit_fields(Config& c, F&& f)
{
    f("task", c.task);
    f("oscillators", c.oscillators);
    f("f_min_hz", c.f_min_hz);
    f("f_max_hz", c.f_max_hz);
    f("tau_nr_ms", c.tau_nr_ms);
    f("n_os", c.n_os);
    f("n_nr", c.n_nr);
    f("g_nr", c.g_nr);
    f("max_resamples", c.max_resamples);
    f("n", c.n);
    f("n_ro", c.n_ro);
    f("g", c.g);
    f("g_os", c.g_os);
    f("g_in", c.g_in);
    f("g_fb", c.g_fb);
    f("p", c.p);
    f("tau_ms", c.tau_ms);
    f("noise", c.noise);
    f("feedback", c.feedback);
    f("divergence_threshold", c.divergence_threshold);
    f("alpha", c.alpha);
    f("training_repetitions", c.training_repetitions);
    f("reset_rls_between_repetitions", c.reset_rls_between_repetitions);
    f("test_trials", c.test_trials);
    f("intervals_s", c.intervals_s);
    f("seeds", c.seeds);
    f("train_s", c.train_s);
    f("test_s", c.test_s);
    f("noise_grid", c.noise_grid);
    f("sweep_axis", c.sweep_axis);
    f("sweep_values", c.sweep_values);
    f("lyapunov", c.lyapunov);
    f("lyapunov_neighbors", c.lyapunov_neighbors);
    f("lyapunov_radius_fraction", c.lyapunov_radius_fraction);
    f("lyapunov_evolution_step", c.lyapunov_evolution_step);
    f("lyapunov_theiler_window", c.lyapunov_theiler_window);
    f("output_dir", c.output_dir);
    f("plots", c.plots);
    f("threads", c.threads);
    f("min_mean_r2", c.min_mean_r2);
    f("min_capacity", c.min_capacity);
    f("max_return_map_distance", c.max_return_map_distance);
}

[[noreturn]] void type_error(std::string_view key, std::string_view expected)
{
    std::ostringstream msg;
    msg << "config key '" << key << "' must be " << expected;
    throw ConfigError(msg.str());
}

void read_value(std::string_view key, const json& v, double& out)
{
    if (v.is_null()) {
        out = unset;
        return;
    }
    if (!v.is_number())
        type_error(key, "a number");
    out = v.get<double>();
}

void read_value(std::string_view key, const json& v, int& out)
{
    if (!v.is_number_integer())
        type_error(key, "an integer");
    out = v.get<int>();
}

void read_value(std::string_view key, const json& v, bool& out)
{
    if (!v.is_boolean())
        type_error(key, "a boolean");
    out = v.get<bool>();
}

void read_value(std::string_view key, const json& v, std::string& out)
{
    if (!v.is_string())
        type_error(key, "a string");
    out = v.get<std::string>();
}

void read_value(std::string_view key, const json& v, std::vector<double>& out)
{
    if (!v.is_array())
        type_error(key, "an array of numbers");
    out.clear();
    for (const auto& e : v) {
        if (!e.is_number())
            type_error(key, "an array of numbers");
        out.push_back(e.get<double>());
    }
}

void read_value(std::string_view key, const json& v, std::vector<std::uint64_t>& out)
{
    if (!v.is_array())
        type_error(key, "an array of non-negative integers");
    out.clear();
    for (const auto& e : v) {
        if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<long long>() >= 0))
            type_error(key, "an array of non-negative integers");
        out.push_back(e.get<std::uint64_t>());
    }
}

void read_value(std::string_view key, const json& v, TaskKind& out)
{
    if (!v.is_string())
        type_error(key, "a string");
    out = parse_task(v.get<std::string>());
}

void read_value(std::string_view key, const json& v, OscillatorKind& out)
{
    if (!v.is_string())
        type_error(key, "a string");
    out = parse_oscillators(v.get<std::string>());
}

void read_value(std::string_view key, const json& v, SweepAxis& out)
{
    if (!v.is_string())
        type_error(key, "a string");
    out = parse_axis(v.get<std::string>());
}

template <class T>
json write_value(const T& v)
{
    if constexpr (std::is_same_v<T, double>)
        return std::isnan(v) ? json(nullptr) : json(v);
    else if constexpr (std::is_enum_v<T>)
        return json(std::string(to_string(v)));
    else
        return json(v);
}

} // namespace

ExperimentConfig parse_config(std::string_view json_text, Preset preset)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");

    if (auto it = doc.find("preset"); it != doc.end()) {
        if (!it->is_string())
            type_error("preset", "a string");
        preset = parse_preset(it->get<std::string>());
    }
    TaskKind task = TaskKind::timing;
    if (auto it = doc.find("task"); it != doc.end())
        read_value("task", *it, task);

    ExperimentConfig config = default_config(task, preset);
    std::set<std::string> known{"preset"};
    visit_fields(config, [&](std::string_view key, auto& field) {
        known.emplace(key);
        if (auto it = doc.find(std::string(key)); it != doc.end())
            read_value(key, *it, field);
    });
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (!known.contains(key))
            throw ConfigError("unknown config key '" + key + "'");
    }
    validate(config);
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path, Preset preset)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), preset);
}

std::string config_to_json(const ExperimentConfig& config)
{
    json doc = json::object();
    visit_fields(config, [&](std::string_view key, const auto& field) { doc[std::string(key)] = write_value(field); });
    return doc.dump(2) + "\n";
}

void validate(const ExperimentConfig& c)
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw ConfigError(what);
    };
    require(c.n >= 1, "n must be at least 1");
    require(c.n_os >= 0, "n_os must be non-negative");
    require(c.n_nr >= 1, "n_nr must be at least 1");
    require(c.n_ro >= 1, "n_ro must be at least 1");
    require(c.p > 0.0 && c.p <= 1.0, "p must lie in (0, 1]");
    require(c.tau_ms > 0.0, "tau_ms must be positive");
    require(c.tau_nr_ms > 0.0, "tau_nr_ms must be positive");
    require(c.alpha > 0.0, "alpha must be positive");
    require(c.noise >= 0.0, "noise must be non-negative");
    require(c.training_repetitions >= 1, "training_repetitions must be at least 1");
    require(c.test_trials >= 1, "test_trials must be at least 1");
    require(c.max_resamples >= 1, "max_resamples must be at least 1");
    require(!c.seeds.empty(), "seeds must not be empty");
    require(c.threads >= 1, "threads must be at least 1");
    require(c.divergence_threshold > 0.0, "divergence_threshold must be positive");
    if (c.oscillators == OscillatorKind::sine && c.n_os > 0)
        require(c.f_min_hz > 0.0 && c.f_min_hz <= c.f_max_hz, "invalid oscillator band");
    if (c.task == TaskKind::timing) {
        require(c.n_ro == 1, "timing task needs n_ro = 1");
        require(!c.intervals_s.empty(), "intervals_s must not be empty");
        require(c.intervals_s.front() >= 1.0, "timing intervals must be at least 1 s");
        require(std::adjacent_find(c.intervals_s.begin(), c.intervals_s.end(), std::greater_equal<>())
                    == c.intervals_s.end(),
                "intervals_s must be strictly increasing");
    } else {
        require(c.n_ro == (c.task == TaskKind::ks ? 64 : 3), "n_ro does not match the chaotic system");
        require(c.train_s > 0.0 && c.test_s >= c.train_s, "need 0 < train_s <= test_s");
    }
    require(c.lyapunov_neighbors >= 4, "lyapunov_neighbors must be at least 4");
    require(c.lyapunov_evolution_step >= 1, "lyapunov_evolution_step must be at least 1");
    require(c.lyapunov_radius_fraction > 0.0, "lyapunov_radius_fraction must be positive");
}

} // namespace odrc
