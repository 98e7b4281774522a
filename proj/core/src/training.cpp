#include "odrc/training.hpp"

#include "odrc/error.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace odrc {

namespace {

#if defined(__GNUC__) && !defined(__clang__) && defined(__x86_64__) && defined(__ELF__)
#define ODRC_TARGET_CLONES __attribute__((target_clones("avx512f", "avx2", "default")))
#else
#define ODRC_TARGET_CLONES
#endif

// g = P r for symmetric P given by its lower triangle (column-major,
// leading dimension n). Reads the triangle once.
ODRC_TARGET_CLONES
void symmetric_multiply(const double* __restrict lower, long n, const double* __restrict r, double* __restrict g)
{
    for (long i = 0; i < n; ++i)
        g[i] = 0.0;
    for (long j = 0; j < n; ++j) {
        const double* col = lower + j * n;
        const double rj = r[j];
        double dot = 0.0;
#pragma omp simd reduction(+ : dot)
        for (long i = j + 1; i < n; ++i) {
            dot += col[i] * r[i];
            g[i] += rj * col[i];
        }
        g[j] += dot + col[j] * rj;
    }
}

constexpr long batch = RlsState::pending_capacity;

// lower -= sum_q scale[q] * v_q v_q^T on the stored triangle for the first
// `count` columns v_q of `vectors` (n x batch, column-major). Columns past
// `count` must be finite; they get weight zero.
ODRC_TARGET_CLONES
void downdate(double* __restrict lower, long n, const double* __restrict vectors, const double* __restrict scale,
              long count)
{
    double a[batch];
    for (long j = 0; j < n; ++j) {
        double* col = lower + j * n;
        for (long q = 0; q < batch; ++q)
            a[q] = q < count ? scale[q] * vectors[q * n + j] : 0.0;
#pragma omp simd
        for (long i = j; i < n; ++i) {
            double v = col[i];
            for (long q = 0; q < batch; ++q)
                v -= a[q] * vectors[q * n + i];
            col[i] = v;
        }
    }
}

} // namespace

void readout(const Readout& ro, const Eigen::Ref<const Eigen::VectorXd>& r, Eigen::Ref<Eigen::VectorXd> y)
{
    if (r.size() != ro.units() || y.size() != ro.outputs())
        throw ArgumentError("readout: dimension mismatch");
    y.noalias() = ro.weights() * r;
}

Eigen::VectorXd readout(const Readout& ro, const Eigen::Ref<const Eigen::VectorXd>& r)
{
    Eigen::VectorXd y(ro.outputs());
    readout(ro, r, y);
    return y;
}

RlsState::RlsState(Eigen::Index units, double alpha) : alpha_(alpha)
{
    if (units < 1)
        throw ArgumentError("RLS needs at least one unit");
    if (!(alpha > 0.0))
        throw ArgumentError("RLS regularization alpha must be positive");
    gain_.resize(units);
    pending_ = Eigen::MatrixXd::Zero(units, pending_capacity);
    pending_scale_.resize(pending_capacity);
    lower_.resize(units, units);
    reset();
}

void RlsState::reset()
{
    lower_.setIdentity();
    lower_ /= alpha_;
    pending_count_ = 0;
}

Eigen::MatrixXd RlsState::covariance() const
{
    Eigen::MatrixXd lower = lower_;
    downdate(lower.data(), lower.rows(), pending_.data(), pending_scale_.data(), pending_count_);
    Eigen::MatrixXd full = lower.selfadjointView<Eigen::Lower>();
    return full;
}

Eigen::VectorXd rls_update(RlsState& rls, Readout& ro, const Eigen::Ref<const Eigen::VectorXd>& r,
                           const Eigen::Ref<const Eigen::VectorXd>& d)
{
    if (r.size() != rls.units() || r.size() != ro.units() || d.size() != ro.outputs())
        throw ArgumentError("rls_update: dimension mismatch");
    if (!r.allFinite() || !d.allFinite())
        throw NumericError("rls_update: non-finite rate or target");

    Eigen::VectorXd e = ro.weights_ * r - d;

    const Eigen::Index n = rls.units();
    const Eigen::Index k = rls.pending_count_;
    symmetric_multiply(rls.lower_.data(), n, r.data(), rls.gain_.data());
    if (k > 0) {
        const Eigen::VectorXd coeff =
            (rls.pending_.leftCols(k).transpose() * r).cwiseProduct(rls.pending_scale_.head(k));
        rls.gain_.noalias() -= rls.pending_.leftCols(k) * coeff;
    }
    const double denom = 1.0 + r.dot(rls.gain_);
    if (!(denom > 0.0) || !std::isfinite(denom))
        throw NumericError("rls_update: lost positive definiteness");

    if (k == RlsState::pending_capacity) {
        downdate(rls.lower_.data(), n, rls.pending_.data(), rls.pending_scale_.data(), k);
        rls.pending_count_ = 0;
    }
    rls.pending_.col(rls.pending_count_) = rls.gain_;
    rls.pending_scale_[rls.pending_count_] = 1.0 / denom;
    ++rls.pending_count_;
    // updated P r equals k / (1 + r^T k)
    ro.weights_.noalias() -= e * (rls.gain_ / denom).transpose();
    ++rls.updates_;
    return e;
}

void save_readout_csv(const Readout& ro, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << std::setprecision(17);
    const auto& w = ro.weights();
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            out << (j ? "," : "") << w(i, j);
        out << '\n';
    }
}

Readout load_readout_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError("ragged readout CSV: " + path.string());
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw IoError("empty readout CSV: " + path.string());
    Eigen::MatrixXd w(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < w.rows(); ++i)
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            w(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return Readout(std::move(w));
}

} // namespace odrc
