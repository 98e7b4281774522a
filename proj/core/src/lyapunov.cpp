#include "odrc/analysis.hpp"
#include "odrc/error.hpp"
#include "odrc/targets.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace odrc {

namespace {

void accumulate_qr(Eigen::MatrixXd& basis, std::vector<double>& log_sums, bool record)
{
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(basis.rows(), basis.cols());
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        if (record)
            log_sums[static_cast<std::size_t>(i)] += std::log(std::abs(r(i, i)));
        // keep a consistent orientation
        if (r(i, i) < 0.0)
            q.col(i) = -q.col(i);
    }
    basis = std::move(q);
}

std::vector<double> sorted_descending(std::vector<double> v)
{
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

} // namespace

LyapunovSpectrum lyapunov_sano_sawada(const Eigen::Ref<const Eigen::MatrixXd>& series, const SanoSawadaParams& params)
{
    const Eigen::Index n = series.rows();
    const Eigen::Index dim = series.cols();
    const Eigen::Index step = params.evolution_step;
    if (dim < 1)
        throw ArgumentError("lyapunov_sano_sawada: series has no dimensions");
    if (step < 1 || params.neighbors < dim + 1 || !(params.model_time_per_sample > 0.0))
        throw ArgumentError("lyapunov_sano_sawada: invalid parameters");
    if (n < 10000)
        throw ArgumentError("lyapunov_sano_sawada: need at least 10^4 samples");
    if (!series.allFinite())
        throw ArgumentError("lyapunov_sano_sawada: series contains non-finite values");

    const Eigen::RowVectorXd extent = series.colwise().maxCoeff() - series.colwise().minCoeff();
    const double diameter = extent.norm();
    if (!(diameter > 0.0))
        throw EstimationError("lyapunov_sano_sawada: trajectory is a single point", 1.0);
    const double base_radius = params.radius_fraction * diameter;

    // candidate neighbours must themselves be evolvable
    const Eigen::Index last_candidate = n - step;
    std::vector<double> dist2(static_cast<std::size_t>(last_candidate));
    std::vector<Eigen::Index> found;
    found.reserve(static_cast<std::size_t>(last_candidate));

    Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(dim, dim);
    std::vector<double> log_sums(static_cast<std::size_t>(dim), 0.0);
    Eigen::MatrixXd before(params.neighbors, dim), after(params.neighbors, dim);

    Eigen::Index visited = 0, failing = 0, recorded = 0;
    double radius_used = 0.0;
    for (Eigen::Index ref = 0; ref + step < n; ref += step, ++visited) {
        const auto origin = series.row(ref);
        for (Eigen::Index i = 0; i < last_candidate; ++i)
            dist2[static_cast<std::size_t>(i)] = (series.row(i) - origin).squaredNorm();

        double radius = base_radius;
        for (int attempt = 0;; ++attempt) {
            found.clear();
            const double r2 = radius * radius;
            for (Eigen::Index i = 0; i < last_candidate; ++i)
                if (std::abs(i - ref) > params.theiler_window && dist2[static_cast<std::size_t>(i)] <= r2
                    && dist2[static_cast<std::size_t>(i)] > 0.0)
                    found.push_back(i);
            if (static_cast<Eigen::Index>(found.size()) >= params.neighbors || attempt >= params.max_doublings)
                break;
            radius *= 2.0;
        }
        if (static_cast<Eigen::Index>(found.size()) < params.neighbors) {
            ++failing;
            // fall back to the nearest admissible points at any distance
            found.clear();
            for (Eigen::Index i = 0; i < last_candidate; ++i)
                if (std::abs(i - ref) > params.theiler_window && dist2[static_cast<std::size_t>(i)] > 0.0)
                    found.push_back(i);
            if (static_cast<Eigen::Index>(found.size()) < params.neighbors)
                throw EstimationError("lyapunov_sano_sawada: series too short for the neighbour count", 1.0);
        }
        std::nth_element(found.begin(), found.begin() + (params.neighbors - 1), found.end(),
                         [&](Eigen::Index a, Eigen::Index b) {
                             return dist2[static_cast<std::size_t>(a)] < dist2[static_cast<std::size_t>(b)];
                         });
        radius_used = std::max(radius_used, radius);

        for (Eigen::Index k = 0; k < params.neighbors; ++k) {
            const Eigen::Index i = found[static_cast<std::size_t>(k)];
            before.row(k) = series.row(i) - origin;
            after.row(k) = series.row(i + step) - series.row(ref + step);
        }
        // after ~= before * A^T
        const Eigen::MatrixXd flow_t = before.colPivHouseholderQr().solve(after);
        basis = flow_t.transpose() * basis;
        const bool record = visited >= params.transient_steps;
        accumulate_qr(basis, log_sums, record);
        if (record)
            ++recorded;
    }

    const double failing_fraction = visited > 0 ? static_cast<double>(failing) / static_cast<double>(visited) : 1.0;
    if (failing_fraction > params.max_failing_fraction) {
        std::ostringstream msg;
        msg << "lyapunov_sano_sawada: " << failing << " of " << visited
            << " reference points lacked neighbours within the largest radius (fraction " << failing_fraction << ")";
        throw EstimationError(msg.str(), failing_fraction);
    }
    if (recorded == 0)
        throw ArgumentError("lyapunov_sano_sawada: no reference points after the transient");

    const double elapsed = static_cast<double>(recorded * step) * params.model_time_per_sample;
    LyapunovSpectrum out;
    for (double s : log_sums)
        out.exponents.push_back(s / elapsed);
    out.exponents = sorted_descending(std::move(out.exponents));
    out.neighbors = params.neighbors;
    out.radius = radius_used;
    out.evolution_step = step;
    out.reference_points = recorded;
    out.failing_fraction = failing_fraction;
    return out;
}

LyapunovSpectrum lyapunov_benettin_oracle(FlowSystem system, const BenettinParams& params)
{
    if (!(params.h > 0.0) || params.reorthonormalize_every < 1 || !(params.duration > 0.0))
        throw ArgumentError("lyapunov_benettin_oracle: invalid parameters");

    using Rhs = std::function<Eigen::Vector3d(const Eigen::Vector3d&)>;
    using Jac = std::function<Eigen::Matrix3d(const Eigen::Vector3d&)>;
    Rhs rhs;
    Jac jac;
    if (system == FlowSystem::lorenz) {
        rhs = [](const Eigen::Vector3d& s) { return lorenz_rhs(s); };
        jac = [](const Eigen::Vector3d& s) { return lorenz_jacobian(s); };
    } else {
        rhs = [](const Eigen::Vector3d& s) { return rossler_rhs(s); };
        jac = [](const Eigen::Vector3d& s) { return rossler_jacobian(s); };
    }

    // state in column 0, tangent basis in columns 1..3
    using Ext = Eigen::Matrix<double, 3, 4>;
    const auto ext_rhs = [&](const Ext& e) {
        Ext d;
        const Eigen::Vector3d s = e.col(0);
        d.col(0) = rhs(s);
        d.rightCols<3>() = jac(s) * e.rightCols<3>();
        return d;
    };

    Ext e;
    e.col(0) = flow_initial_state;
    e.rightCols<3>().setIdentity();

    const auto transient_steps = static_cast<long>(std::llround(params.transient / params.h));
    for (long i = 0; i < transient_steps; ++i)
        e.col(0) = rk4_step(rhs, Eigen::Vector3d(e.col(0)), params.h);

    const auto total_steps = static_cast<long>(std::llround(params.duration / params.h));
    std::vector<double> log_sums(3, 0.0);
    Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(3, 3);
    long done = 0;
    while (done < total_steps) {
        const long chunk = std::min<long>(params.reorthonormalize_every, total_steps - done);
        e.rightCols<3>() = basis;
        for (long i = 0; i < chunk; ++i)
            e = rk4_step(ext_rhs, e, params.h);
        basis = e.rightCols<3>();
        accumulate_qr(basis, log_sums, true);
        done += chunk;
    }

    LyapunovSpectrum out;
    const double elapsed = static_cast<double>(total_steps) * params.h;
    for (double s : log_sums)
        out.exponents.push_back(s / elapsed);
    out.exponents = sorted_descending(std::move(out.exponents));
    return out;
}

} // namespace odrc
