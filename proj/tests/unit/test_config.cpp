#include "odrc/config.hpp"
#include "odrc/error.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace odrc;

TEST_CASE("defaults follow the parameter table")
{
    const auto c = default_config(TaskKind::timing);
    CHECK(c.n == 400);
    CHECK(c.n_ro == 1);
    CHECK(c.n_os == 10);
    CHECK(c.n_nr == 100);
    CHECK(c.g == 1.5);
    CHECK(c.g_os == 0.5);
    CHECK(c.g_in == 5.0);
    CHECK(c.g_fb == 3.0);
    CHECK(c.g_nr == 1.2);
    CHECK(c.p == 0.1);
    CHECK(c.tau_ms == 10.0);
    CHECK(c.alpha == 1.0);
    CHECK(c.training_repetitions == 10);
    CHECK(c.f_min_hz == 0.1);
    CHECK(c.f_max_hz == 1.0);
    CHECK(c.feedback);

    const auto lorenz = default_config(TaskKind::lorenz);
    CHECK(lorenz.n == 3000);
    CHECK(lorenz.n_ro == 3);
    CHECK(lorenz.f_min_hz == 10.0);
    CHECK(lorenz.f_max_hz == 25.0);
    CHECK(default_config(TaskKind::ks).n_ro == 64);

    CHECK(default_config(TaskKind::timing, Preset::paper).intervals_s.back() == 120.0);
    CHECK(default_config(TaskKind::timing, Preset::paper).seeds.size() == 10);
}

TEST_CASE("parse_config overrides single fields")
{
    const auto c = parse_config(R"({"task": "timing", "g": 1.2, "seeds": [4, 5], "feedback": false,
                                    "oscillators": "neural", "intervals_s": [2, 5], "min_mean_r2": 0.8})");
    CHECK(c.g == 1.2);
    CHECK(c.seeds == std::vector<std::uint64_t>{4, 5});
    CHECK_FALSE(c.feedback);
    CHECK(c.oscillators == OscillatorKind::neural);
    CHECK(c.intervals_s == std::vector<double>{2.0, 5.0});
    CHECK(c.min_mean_r2 == 0.8);
    CHECK(std::isnan(c.min_capacity));

    const auto chaos = parse_config(R"({"task": "rossler"})");
    CHECK(chaos.n == 3000);
    CHECK(chaos.n_ro == 3);

    const auto paper = parse_config(R"({"preset": "paper"})");
    CHECK(paper.seeds.size() == 10);
}

TEST_CASE("parse_config rejects bad input")
{
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"gain": 1.0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"g": "big"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"n": 1.5})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"feedback": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"task": "henon"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"seeds": [-1]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"f_min_hz": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"f_min_hz": 2, "f_max_hz": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"intervals_s": [2, 1]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"intervals_s": [0.5]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"task": "lorenz", "n_ro": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"task": "lorenz", "train_s": 50})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"alpha": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"noise": -1})"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/odrc.json"), ConfigError);
}

TEST_CASE("config JSON round trip")
{
    auto c = default_config(TaskKind::lorenz, Preset::paper);
    c.noise = 0.1;
    c.oscillators = OscillatorKind::none;
    c.max_return_map_distance = 0.05;
    const auto back = parse_config(config_to_json(c));
    CHECK(config_to_json(back) == config_to_json(c));
    CHECK(back.noise == 0.1);
    CHECK(back.oscillators == OscillatorKind::none);
    CHECK(std::isnan(back.min_mean_r2));

    const auto path = std::filesystem::temp_directory_path() / "odrc_config_test.json";
    std::ofstream(path) << config_to_json(c);
    CHECK(config_to_json(load_config(path)) == config_to_json(c));
    std::filesystem::remove(path);
}

TEST_CASE("enum names")
{
    for (auto k : {TaskKind::timing, TaskKind::lorenz, TaskKind::rossler, TaskKind::ks})
        CHECK(parse_task(to_string(k)) == k);
    for (auto k : {OscillatorKind::sine, OscillatorKind::neural, OscillatorKind::none})
        CHECK(parse_oscillators(to_string(k)) == k);
    for (auto k : {SweepAxis::band, SweepAxis::n_os, SweepAxis::g_os, SweepAxis::g, SweepAxis::tau_nr})
        CHECK(parse_axis(to_string(k)) == k);
    CHECK_THROWS_AS(parse_preset("laptop"), ConfigError);
    CHECK(is_chaotic(TaskKind::ks));
    CHECK_FALSE(is_chaotic(TaskKind::timing));
}
