#pragma once

#include "odrc/harness.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace odrc {

struct CurveRow {
    double task_s = 0.0;
    std::uint64_t seed = 0;
    double r2 = 0.0;
    std::string condition;
    bool operator==(const CurveRow&) const = default;
};

struct CapacityRow {
    std::string condition;
    double capacity_s = 0.0;
    double sd = 0.0;
    bool operator==(const CapacityRow&) const = default;
};

struct ReturnMapRow {
    std::string segment;
    double m_i = 0.0;
    double m_next = 0.0;
    bool operator==(const ReturnMapRow&) const = default;
};

struct SpectrumRow {
    std::string segment;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    bool operator==(const SpectrumRow&) const = default;
};

struct TraceRow {
    double t_ms = 0.0;
    int dim = 0;
    double output = 0.0;
    double target = 0.0;
    bool operator==(const TraceRow&) const = default;
};

/// Tabular form of an experiment, written as
///
///   curve.csv       task_s,seed,r2,condition
///   capacity.csv    condition,capacity_s,sd
///   returnmap.csv   segment,m_i,m_next
///   spectrum.csv    segment,lambda1,lambda2,lambda3
///   trace.csv       t_ms,dim,output,target
///
/// Segment names carry the seed ("s1/generalization", "target").
struct Report {
    std::string experiment;
    std::string config_json; ///< echoed into config.json when non-empty
    std::vector<CurveRow> curve;
    std::vector<CapacityRow> capacity;
    std::vector<ReturnMapRow> returnmap;
    std::vector<SpectrumRow> spectrum;
    std::vector<TraceRow> trace;

    bool empty() const noexcept
    {
        return curve.empty() && capacity.empty() && returnmap.empty() && spectrum.empty() && trace.empty();
    }
};

Report make_report(const TimingResult& result);
Report make_report(const NoiseSweepResult& result);
Report make_report(const SweepResult& result);
Report make_report(const ChaosResult& result);

/// Writes the non-empty tables of `report` (and config.json) into `dir`,
/// creating it if needed; with `plots` also SVG figures. Throws
/// ArgumentError for an empty report and IoError when `dir` is unwritable.
void emit_report(const Report& report, const std::filesystem::path& dir, bool plots = false);

/// Reads back whatever tables exist in `dir`.
Report load_report(const std::filesystem::path& dir);

} // namespace odrc
