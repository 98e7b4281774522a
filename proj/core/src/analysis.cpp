#include "odrc/analysis.hpp"

#include "odrc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace odrc {

RSquared r_squared(const Eigen::Ref<const Eigen::MatrixXd>& output, const Eigen::Ref<const Eigen::MatrixXd>& target)
{
    if (output.rows() != target.rows() || output.cols() != target.cols())
        throw ArgumentError("r_squared: output and target shapes differ");
    if (output.rows() < 2 || output.cols() < 1)
        throw ArgumentError("r_squared: need at least two samples and one dimension");

    RSquared result;
    result.per_dimension.reserve(static_cast<std::size_t>(output.cols()));
    for (Eigen::Index j = 0; j < output.cols(); ++j) {
        const Eigen::ArrayXd a = output.col(j).array() - output.col(j).mean();
        const Eigen::ArrayXd b = target.col(j).array() - target.col(j).mean();
        const double saa = (a * a).sum();
        const double sbb = (b * b).sum();
        double r2 = 0.0;
        if (saa > 0.0 && sbb > 0.0 && std::isfinite(saa) && std::isfinite(sbb)) {
            const double sab = (a * b).sum();
            r2 = std::clamp(sab * sab / (saa * sbb), 0.0, 1.0);
        } else {
            result.degenerate = true;
        }
        result.per_dimension.push_back(r2);
    }
    result.mean = std::accumulate(result.per_dimension.begin(), result.per_dimension.end(), 0.0)
                  / static_cast<double>(result.per_dimension.size());
    return result;
}

double capacity(std::span<const double> lengths, std::span<const double> r2, double upper_s)
{
    if (lengths.size() != r2.size() || lengths.empty())
        throw ArgumentError("capacity: abscissa and ordinate lengths differ or are empty");
    for (std::size_t i = 1; i < lengths.size(); ++i)
        if (!(lengths[i] > lengths[i - 1]))
            throw ArgumentError("capacity: task lengths must be strictly increasing");
    if (upper_s < lengths.front() || upper_s > lengths.back())
        throw ArgumentError("capacity: curve does not cover the requested range");

    double area = 0.0;
    for (std::size_t i = 1; i < lengths.size() && lengths[i - 1] < upper_s; ++i) {
        const double x0 = lengths[i - 1];
        const double x1 = std::min(lengths[i], upper_s);
        const double slope = (r2[i] - r2[i - 1]) / (lengths[i] - lengths[i - 1]);
        const double y1 = r2[i - 1] + slope * (x1 - x0);
        area += 0.5 * (r2[i - 1] + y1) * (x1 - x0);
    }
    return area;
}

double capacity(const PerformanceCurve& curve, double upper_s)
{
    return capacity(curve.task_lengths_s, curve.mean_r2, upper_s);
}

ReturnMap successive_maxima(std::span<const double> trace)
{
    if (trace.size() < 3)
        throw ArgumentError("successive_maxima: trace needs at least three samples");
    std::vector<double> maxima;
    for (std::size_t i = 1; i + 1 < trace.size(); ++i)
        if (trace[i] > trace[i - 1] && trace[i] > trace[i + 1])
            maxima.push_back(trace[i]);

    ReturnMap map;
    if (maxima.size() < 2) {
        map.insufficient = true;
        return map;
    }
    map.pairs.reserve(maxima.size() - 1);
    for (std::size_t i = 0; i + 1 < maxima.size(); ++i)
        map.pairs.emplace_back(maxima[i], maxima[i + 1]);
    return map;
}

ReturnMap successive_maxima(const Eigen::Ref<const Eigen::VectorXd>& trace)
{
    return successive_maxima(std::span<const double>(trace.data(), static_cast<std::size_t>(trace.size())));
}

double return_map_distance(const ReturnMap& candidate, const ReturnMap& reference)
{
    if (candidate.pairs.empty() || reference.pairs.empty())
        return std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (const auto& [a, b] : candidate.pairs) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [c, d] : reference.pairs)
            best = std::min(best, std::hypot(a - c, b - d));
        total += best;
    }
    return total / static_cast<double>(candidate.pairs.size());
}

double LyapunovSpectrum::sum() const
{
    return std::accumulate(exponents.begin(), exponents.end(), 0.0);
}

} // namespace odrc
