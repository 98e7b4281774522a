#include "odrc/targets.hpp"

#include "odrc/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace odrc {

TargetSeries timing_target(const TimingSpec& spec)
{
    if (!(spec.interval_ms >= 1000.0))
        throw ArgumentError("timing interval must be at least 1000 ms");
    if (!(spec.peak_sd_ms > 0.0) || !(spec.tail_ms >= 0.0))
        throw ArgumentError("timing target: invalid pulse shape");

    const Eigen::Index n = samples_for_duration(spec.task_period_ms());
    TargetSeries out;
    out.label = "timing";
    out.data.resize(n, 1);
    const double two_var = 2.0 * spec.peak_sd_ms * spec.peak_sd_ms;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double dt = static_cast<double>(i) - spec.interval_ms;
        out.data(i, 0) = std::max(spec.baseline, spec.peak_amplitude * std::exp(-dt * dt / two_var));
    }
    return out;
}

Eigen::Vector3d lorenz_rhs(const Eigen::Vector3d& s, const LorenzParams& p)
{
    return {-p.sigma * (s[0] - s[1]), s[0] * (p.rho - s[2]) - s[1], s[0] * s[1] - p.beta * s[2]};
}

Eigen::Matrix3d lorenz_jacobian(const Eigen::Vector3d& s, const LorenzParams& p)
{
    Eigen::Matrix3d j;
    j << -p.sigma, p.sigma, 0.0,
         p.rho - s[2], -1.0, -s[0],
         s[1], s[0], -p.beta;
    return j;
}

Eigen::Vector3d rossler_rhs(const Eigen::Vector3d& s, const RosslerParams& p)
{
    return {-s[1] - s[2], s[0] + p.a * s[1], p.b + s[0] * s[2] - p.c * s[2]};
}

Eigen::Matrix3d rossler_jacobian(const Eigen::Vector3d& s, const RosslerParams& p)
{
    Eigen::Matrix3d j;
    j << 0.0, -1.0, -1.0,
         1.0, p.a, 0.0,
         s[2], 0.0, s[0] - p.c;
    return j;
}

namespace {

template <class Rhs>
Eigen::MatrixXd sample_flow(const Rhs& rhs, Eigen::Index samples, const FlowSampling& sampling)
{
    if (samples < 0 || sampling.downsample < 1 || !(sampling.h > 0.0) || sampling.burn_in < 0)
        throw ArgumentError("invalid flow sampling");
    Eigen::MatrixXd out(samples, 3);
    Eigen::Vector3d s = flow_initial_state;
    // sample 0 is the initial state; every downsample-th RK4 step is kept
    const Eigen::Index total = sampling.burn_in + samples;
    for (Eigen::Index kept = 0; kept < total; ++kept) {
        if (kept >= sampling.burn_in)
            out.row(kept - sampling.burn_in) = s.transpose();
        for (int i = 0; i < sampling.downsample; ++i)
            s = rk4_step(rhs, s, sampling.h);
    }
    if (!out.allFinite())
        throw GenerationError("flow integration produced non-finite values");
    return out;
}

} // namespace

Eigen::MatrixXd lorenz_raw(Eigen::Index samples, const FlowSampling& sampling, const LorenzParams& p)
{
    return sample_flow([&p](const Eigen::Vector3d& s) { return lorenz_rhs(s, p); }, samples, sampling);
}

Eigen::MatrixXd rossler_raw(Eigen::Index samples, const FlowSampling& sampling, const RosslerParams& p)
{
    return sample_flow([&p](const Eigen::Vector3d& s) { return rossler_rhs(s, p); }, samples, sampling);
}

Eigen::Index samples_for_duration(double duration_ms)
{
    if (!(duration_ms > 0.0))
        throw ArgumentError("duration must be positive");
    return static_cast<Eigen::Index>(std::llround(std::floor(duration_ms))) + 1;
}

TargetSeries lorenz_series(double duration_ms)
{
    auto out = normalize_series(lorenz_raw(samples_for_duration(duration_ms)), "lorenz");
    out.model_time_per_sample = lorenz_sampling.h * lorenz_sampling.downsample;
    return out;
}

TargetSeries rossler_series(double duration_ms)
{
    auto out = normalize_series(rossler_raw(samples_for_duration(duration_ms)), "rossler");
    out.model_time_per_sample = rossler_sampling.h * rossler_sampling.downsample;
    return out;
}

TargetSeries normalize_series(const Eigen::MatrixXd& raw, std::string label)
{
    if (raw.size() == 0 || !raw.allFinite())
        throw NormalizationError("cannot normalize an empty or non-finite series");
    const double peak = raw.cwiseAbs().maxCoeff();
    if (!(peak > 0.0))
        throw NormalizationError("cannot normalize an all-zero series");
    TargetSeries out;
    out.label = std::move(label);
    out.scale = normalization_bound / peak;
    out.data = raw * out.scale;
    return out;
}

void write_series_csv(const TargetSeries& series, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << "t_ms";
    for (Eigen::Index j = 0; j < series.dims(); ++j)
        out << ",d" << j;
    out << '\n' << std::setprecision(17);
    for (Eigen::Index i = 0; i < series.length(); ++i) {
        out << static_cast<double>(i) * series.dt_ms;
        for (Eigen::Index j = 0; j < series.dims(); ++j)
            out << ',' << series.data(i, j);
        out << '\n';
    }
}

TargetSeries read_series_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw IoError("empty series CSV: " + path.string());
    std::vector<double> times;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        bool first = true;
        while (std::getline(ss, cell, ',')) {
            if (first) {
                times.push_back(std::stod(cell));
                first = false;
            } else {
                row.push_back(std::stod(cell));
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError("ragged series CSV: " + path.string());
        rows.push_back(std::move(row));
    }
    TargetSeries series;
    series.label = path.stem().string();
    if (rows.empty())
        return series;
    series.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < series.length(); ++i)
        for (Eigen::Index j = 0; j < series.dims(); ++j)
            series.data(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (times.size() >= 2)
        series.dt_ms = times[1] - times[0];
    return series;
}

} // namespace odrc
