#include "odrc/error.hpp"
#include "odrc/report.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace odrc;

namespace {

std::filesystem::path scratch_dir(const char* name)
{
    auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    return dir;
}

std::string first_line(const std::filesystem::path& path)
{
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return line;
}

} // namespace

TEST_CASE("report tables round trip exactly")
{
    Report r;
    r.experiment = "chaos";
    r.config_json = "{}\n";
    r.curve = {{2.0, 1, 0.1 + 0.2, "sine[0.1-1]Hz/fb"}, {5.0, 2, 1.0 / 3.0, "none/nofb"}};
    r.capacity = {{"sine[0.1-1]Hz/fb", 3.99, 1e-17}};
    r.returnmap = {{"target", 0.5, 0.6}, {"s1/generalization", -1e-300, 123456.789}};
    r.spectrum = {{"s1/reproduction", 0.9, std::numeric_limits<double>::quiet_NaN(), -14.5}};
    r.trace = {{0.0, 0, 0.25, 0.2}, {1.0, 2, -0.1, 0.3}};

    const auto dir = scratch_dir("odrc_report_test");
    emit_report(r, dir, true);
    for (const char* f : {"curve.csv", "capacity.csv", "returnmap.csv", "spectrum.csv", "trace.csv", "config.json",
                          "curve.svg", "returnmap.svg", "trace.svg"})
        CHECK(std::filesystem::exists(dir / f));
    CHECK(first_line(dir / "curve.csv") == "task_s,seed,r2,condition");
    CHECK(first_line(dir / "capacity.csv") == "condition,capacity_s,sd");
    CHECK(first_line(dir / "returnmap.csv") == "segment,m_i,m_next");
    CHECK(first_line(dir / "spectrum.csv") == "segment,lambda1,lambda2,lambda3");
    CHECK(first_line(dir / "trace.csv") == "t_ms,dim,output,target");

    const auto back = load_report(dir);
    CHECK(back.curve == r.curve);
    CHECK(back.capacity == r.capacity);
    CHECK(back.returnmap == r.returnmap);
    CHECK(back.trace == r.trace);
    REQUIRE(back.spectrum.size() == 1);
    CHECK(back.spectrum[0].lambda1 == 0.9);
    CHECK(std::isnan(back.spectrum[0].lambda2));
    CHECK(back.config_json == r.config_json);
    std::filesystem::remove_all(dir);
}

TEST_CASE("report errors")
{
    CHECK_THROWS_AS(emit_report(Report{}, scratch_dir("odrc_report_empty")), ArgumentError);

    Report r;
    r.capacity = {{"a,b", 1.0, 0.0}};
    CHECK_THROWS_AS(emit_report(r, scratch_dir("odrc_report_comma")), ArgumentError);

    // a regular file where the directory should be
    const auto blocker = std::filesystem::temp_directory_path() / "odrc_report_blocker";
    std::ofstream(blocker) << "x";
    r.capacity = {{"ok", 1.0, 0.0}};
    CHECK_THROWS_AS(emit_report(r, blocker / "sub"), IoError);
    std::filesystem::remove(blocker);
}

TEST_CASE("timing results become curve and capacity rows")
{
    auto result = summarize_timing("cond", {1.0, 2.0}, {1, 2},
                                   {{1.0, 1, 0.9, false}, {1.0, 2, 0.7, false}, {2.0, 1, 0.5, false},
                                    {2.0, 2, 0.3, false}});
    const auto report = make_report(result);
    CHECK(report.curve.size() == 4);
    REQUIRE(report.capacity.size() == 1);
    CHECK(report.capacity[0].capacity_s == doctest::Approx(0.6));
    CHECK(report.trace.empty());
}
