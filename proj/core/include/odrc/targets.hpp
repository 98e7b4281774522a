#pragma once

#include <Eigen/Dense>

#include <complex>
#include <filesystem>
#include <string>

namespace odrc {

/// Uniformly sampled target d(t). One row per millisecond, one column per
/// output dimension.
struct TargetSeries {
    Eigen::MatrixXd data;
    double dt_ms = 1.0;
    std::string label;
    /// Model time of the generating ODE/PDE per sample (0 when not a flow).
    double model_time_per_sample = 0.0;
    /// Factor applied by normalize_series().
    double scale = 1.0;

    Eigen::Index length() const noexcept { return data.rows(); }
    Eigen::Index dims() const noexcept { return data.cols(); }
};

struct TimingSpec {
    double interval_ms = 1000.0;
    double peak_amplitude = 1.0;
    double peak_sd_ms = 30.0;
    double baseline = 0.2;
    double tail_ms = 150.0;

    double task_period_ms() const noexcept { return interval_ms + tail_ms; }
};

/// d(t) = max(baseline, A exp(-(t - interval)^2 / (2 sd^2))) sampled at
/// t = 0, 1, ..., interval + tail (ms).
TargetSeries timing_target(const TimingSpec& spec);

struct LorenzParams {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;
};

struct RosslerParams {
    double a = 0.2;
    double b = 0.2;
    double c = 5.7;
};

Eigen::Vector3d lorenz_rhs(const Eigen::Vector3d& s, const LorenzParams& p = {});
Eigen::Matrix3d lorenz_jacobian(const Eigen::Vector3d& s, const LorenzParams& p = {});
Eigen::Vector3d rossler_rhs(const Eigen::Vector3d& s, const RosslerParams& p = {});
Eigen::Matrix3d rossler_jacobian(const Eigen::Vector3d& s, const RosslerParams& p = {});

/// Classic fourth-order Runge-Kutta step.
template <class Vec, class Rhs>
Vec rk4_step(const Rhs& rhs, const Vec& s, double h)
{
    const Vec k1 = rhs(s);
    const Vec k2 = rhs(Vec(s + 0.5 * h * k1));
    const Vec k3 = rhs(Vec(s + 0.5 * h * k2));
    const Vec k4 = rhs(Vec(s + h * k3));
    return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Integration, down-sampling and burn-in shared by the 3-D flows.
struct FlowSampling {
    double h = 0.001;
    int downsample = 5;
    Eigen::Index burn_in = 3000; ///< kept samples discarded before recording
};

inline const Eigen::Vector3d flow_initial_state{0.1, 0.0, 0.0};

inline constexpr FlowSampling lorenz_sampling{0.001, 5, 3000};
inline constexpr FlowSampling rossler_sampling{0.001, 15, 3000};

/// Raw (unnormalized) kept samples, `samples` x 3.
Eigen::MatrixXd lorenz_raw(Eigen::Index samples, const FlowSampling& sampling = lorenz_sampling,
                           const LorenzParams& p = {});
Eigen::MatrixXd rossler_raw(Eigen::Index samples, const FlowSampling& sampling = rossler_sampling,
                            const RosslerParams& p = {});

/// Number of 1 ms samples covering [0, duration].
Eigen::Index samples_for_duration(double duration_ms);

TargetSeries lorenz_series(double duration_ms);
TargetSeries rossler_series(double duration_ms);

struct KsParams {
    Eigen::Index grid = 64;
    double domain = 22.0;
    double dt = 0.1;
    bool nonlinear = true;
    Eigen::Index burn_in = 3000;
};

/// Kuramoto-Sivashinsky u_t = -u u_x - u_xx - u_xxxx on a periodic domain,
/// advanced with ETDRK4 in Fourier space (2/3-rule dealiasing).
class KsSolver {
public:
    KsSolver(const KsParams& params, const Eigen::VectorXd& u0);

    void step();
    void step(Eigen::Index n)
    {
        for (Eigen::Index i = 0; i < n; ++i)
            step();
    }

    Eigen::VectorXd field() const;
    const Eigen::VectorXcd& spectrum() const noexcept { return v_; }
    /// Angular wavenumbers q_k = 2 pi k / L in FFT order.
    const Eigen::VectorXd& wavenumbers() const noexcept { return q_; }
    /// Linear growth rates q^2 - q^4.
    const Eigen::VectorXd& linear_rates() const noexcept { return linear_; }
    double time() const noexcept { return time_; }
    const KsParams& params() const noexcept { return params_; }

private:
    Eigen::VectorXcd nonlinear_term(const Eigen::VectorXcd& v) const;

    KsParams params_;
    Eigen::VectorXd q_, linear_;
    Eigen::VectorXcd v_;
    Eigen::VectorXcd g_;
    Eigen::VectorXd dealias_;
    Eigen::VectorXd e_, e2_, qc_, f1_, f2_, f3_;
    double time_ = 0.0;
};

/// 0.1 cos(2 pi x / L) (1 + sin(2 pi x / L)) on the grid.
Eigen::VectorXd ks_initial_condition(const KsParams& params = {});

/// Raw KS samples after burn-in, `samples` x grid. Throws GenerationError
/// on non-finite values.
Eigen::MatrixXd ks_raw(Eigen::Index samples, const KsParams& params = {});
TargetSeries ks_series(double duration_ms);

/// Scales by 0.8 / max|raw| (one factor for all dimensions). Throws
/// NormalizationError for all-zero or non-finite input.
TargetSeries normalize_series(const Eigen::MatrixXd& raw, std::string label = {});

inline constexpr double normalization_bound = 0.8;

/// CSV with header `t_ms,d0,d1,...`, one row per sample.
void write_series_csv(const TargetSeries& series, const std::filesystem::path& path);
TargetSeries read_series_csv(const std::filesystem::path& path);

} // namespace odrc
