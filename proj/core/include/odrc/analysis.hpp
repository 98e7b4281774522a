#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace odrc {

struct RSquared {
    std::vector<double> per_dimension;
    double mean = 0.0;
    /// Set when some dimension was constant in either series; that
    /// dimension scores 0.
    bool degenerate = false;
};

/// Squared Pearson correlation per column, averaged over columns.
RSquared r_squared(const Eigen::Ref<const Eigen::MatrixXd>& output, const Eigen::Ref<const Eigen::MatrixXd>& target);

/// Mean R^2 versus task length.
struct PerformanceCurve {
    std::vector<double> task_lengths_s; ///< strictly increasing
    std::vector<double> mean_r2;
    std::vector<std::vector<double>> per_seed; ///< [length][seed]
};

/// Trapezoidal area under R^2 from the first task length up to `upper_s`
/// (seconds). Throws ArgumentError when the curve does not reach `upper_s`.
double capacity(const PerformanceCurve& curve, double upper_s);
double capacity(std::span<const double> task_lengths_s, std::span<const double> r2, double upper_s);

struct ReturnMap {
    std::vector<std::pair<double, double>> pairs;
    /// Fewer than two maxima were found.
    bool insufficient = false;
};

/// Strict interior local maxima paired as (M_i, M_{i+1}).
ReturnMap successive_maxima(std::span<const double> trace);
ReturnMap successive_maxima(const Eigen::Ref<const Eigen::VectorXd>& trace);

/// Mean Euclidean distance from each pair of `candidate` to its nearest
/// pair in `reference`. Infinite when either map is empty.
double return_map_distance(const ReturnMap& candidate, const ReturnMap& reference);

struct LyapunovSpectrum {
    std::vector<double> exponents; ///< per unit model time, descending
    Eigen::Index neighbors = 0;
    double radius = 0.0;
    Eigen::Index evolution_step = 0;
    Eigen::Index reference_points = 0;
    double failing_fraction = 0.0;

    double sum() const;
};

struct SanoSawadaParams {
    Eigen::Index neighbors = 30;
    /// Initial search radius as a fraction of the attractor diameter;
    /// doubled until enough neighbours are found.
    double radius_fraction = 0.02;
    int max_doublings = 4;
    /// Samples over which the local linear flow map is fitted. The chain of
    /// reference points advances by the same amount.
    Eigen::Index evolution_step = 10;
    /// Points closer in time than this are not neighbours.
    Eigen::Index theiler_window = 50;
    /// Model time represented by one sample.
    double model_time_per_sample = 1.0;
    /// Fraction of reference points allowed to miss k neighbours within the
    /// largest radius before estimation fails.
    double max_failing_fraction = 0.2;
    /// Leading reference points dropped before accumulating exponents.
    Eigen::Index transient_steps = 10;
};

/// Lyapunov spectrum of an observed trajectory (rows = time, cols = state
/// dimensions) from locally fitted linear flow maps chained through QR.
/// Throws ArgumentError for short input and EstimationError when too many
/// reference points lack neighbours.
LyapunovSpectrum lyapunov_sano_sawada(const Eigen::Ref<const Eigen::MatrixXd>& series, const SanoSawadaParams& params);

enum class FlowSystem { lorenz, rossler };

struct BenettinParams {
    double duration = 1000.0; ///< model time accumulated
    double transient = 50.0;  ///< model time discarded first
    double h = 0.001;
    int reorthonormalize_every = 10; ///< RK4 steps between QR
};

/// Reference spectrum from tangent-space integration with analytic
/// Jacobians and periodic QR re-orthonormalization.
LyapunovSpectrum lyapunov_benettin_oracle(FlowSystem system, const BenettinParams& params = {});

} // namespace odrc
