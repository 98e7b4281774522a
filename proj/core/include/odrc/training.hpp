#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>

namespace odrc {

class RlsState;

/// Linear readout y = W_ro r. Starts at zero; only rls_update changes it.
class Readout {
public:
    Readout() = default;
    Readout(Eigen::Index outputs, Eigen::Index units) : weights_(Eigen::MatrixXd::Zero(outputs, units)) {}
    explicit Readout(Eigen::MatrixXd weights) : weights_(std::move(weights)) {}

    Eigen::Index outputs() const noexcept { return weights_.rows(); }
    Eigen::Index units() const noexcept { return weights_.cols(); }
    const Eigen::MatrixXd& weights() const noexcept { return weights_; }

private:
    friend Eigen::VectorXd rls_update(RlsState&, Readout&, const Eigen::Ref<const Eigen::VectorXd>&,
                                      const Eigen::Ref<const Eigen::VectorXd>&);
    Eigen::MatrixXd weights_;
};

/// y = W_ro r. Throws ArgumentError on a dimension mismatch.
Eigen::VectorXd readout(const Readout& ro, const Eigen::Ref<const Eigen::VectorXd>& r);
void readout(const Readout& ro, const Eigen::Ref<const Eigen::VectorXd>& r, Eigen::Ref<Eigen::VectorXd> y);

/// Inverse correlation matrix of the recursive least-squares filter.
///
/// Only the lower triangle of P is stored and updated, so P is exactly
/// symmetric at all times; covariance() returns the full matrix. Rank-1
/// downdates are queued and folded into the stored triangle in batches of
/// `pending_capacity`, so most updates only read P.
class RlsState {
public:
    RlsState() = default;
    RlsState(Eigen::Index units, double alpha);

    static constexpr Eigen::Index pending_capacity = 16;

    double alpha() const noexcept { return alpha_; }
    Eigen::Index units() const noexcept { return lower_.rows(); }
    std::size_t updates() const noexcept { return updates_; }

    /// Full symmetric P.
    Eigen::MatrixXd covariance() const;

    /// Back to P = I / alpha (the update counter is kept).
    void reset();

private:
    friend Eigen::VectorXd rls_update(RlsState&, Readout&, const Eigen::Ref<const Eigen::VectorXd>&,
                                      const Eigen::Ref<const Eigen::VectorXd>&);
    Eigen::MatrixXd lower_;
    Eigen::VectorXd gain_;
    // P = lower - sum_q pending_scale_[q] * pending_.col(q) pending_.col(q)^T
    Eigen::MatrixXd pending_;
    Eigen::VectorXd pending_scale_;
    Eigen::Index pending_count_ = 0;
    double alpha_ = 1.0;
    std::size_t updates_ = 0;
};

/// One RLS step with a-priori error e = W_ro r - d:
///
///     k  = P r
///     P <- P - k k^T / (1 + r^T k)
///     W <- W - e (P r)^T            (P already updated)
///
/// Returns e. Throws NumericError when r or d contain non-finite values and
/// ArgumentError on dimension mismatch.
Eigen::VectorXd rls_update(RlsState& rls, Readout& ro, const Eigen::Ref<const Eigen::VectorXd>& r,
                           const Eigen::Ref<const Eigen::VectorXd>& d);

/// RLS fires on odd simulation steps (t = 1, 3, 5, ... ms) while inside the
/// training window.
constexpr bool update_cadence(long step_index, bool in_training_window = true) noexcept
{
    return in_training_window && step_index >= 1 && (step_index % 2) == 1;
}

/// Plain CSV, one row per output dimension, full precision.
void save_readout_csv(const Readout& ro, const std::filesystem::path& path);
Readout load_readout_csv(const std::filesystem::path& path);

} // namespace odrc
