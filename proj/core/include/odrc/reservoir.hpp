#pragma once

#include "odrc/oscillators.hpp"
#include "odrc/rng.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <filesystem>

namespace odrc {

struct GainConfig {
    double recurrent = 1.5; ///< g
    double oscillator = 0.5; ///< g_os
    double onset = 5.0;      ///< g_in
    double feedback = 3.0;   ///< g_fb
};

/// Fixed random connectivity of the reservoir. Only the readout is trained;
/// nothing in here changes after init_weights().
struct ReservoirWeights {
    SparseRowMatrix recurrent; ///< N x N, density p, sd g / sqrt(pN)
    Eigen::MatrixXd oscillator; ///< N x N_os, sd g_os / sqrt(N_os)
    Eigen::VectorXd onset;      ///< N, sd g_in
    Eigen::MatrixXd feedback;   ///< N x N_ro, sd g_fb / sqrt(N_ro)
    GainConfig gains;
    double connectivity = 0.1;

    Eigen::Index units() const noexcept { return onset.size(); }
    Eigen::Index oscillators() const noexcept { return oscillator.cols(); }
    Eigen::Index outputs() const noexcept { return feedback.cols(); }
};

/// Square sparse matrix whose entries are nonzero with probability `p` and
/// Gaussian(0, sd) when nonzero. Consumes one Bernoulli draw per entry in
/// row-major order, plus one normal draw per nonzero.
SparseRowMatrix random_sparse_gaussian(Eigen::Index n, double p, double sd, Rng& rng);

ReservoirWeights init_weights(Eigen::Index n, Eigen::Index n_os, Eigen::Index n_ro, const GainConfig& gains,
                              double p, std::uint64_t seed);

struct ReservoirState {
    Eigen::VectorXd x; ///< membrane states
    Eigen::VectorXd r; ///< rates, always tanh(x)
    double t_ms = 0.0;
};

inline constexpr double simulation_start_ms = -250.0;

/// x ~ U[-1, 1], r = tanh(x), t = -250 ms.
ReservoirState init_state(Eigen::Index n, std::uint64_t seed);
ReservoirState init_state(Eigen::Index n, Rng& rng);

/// Onset pulse: 1 on [-50, 0] ms, 0 elsewhere.
constexpr double onset_signal(double t_ms) noexcept
{
    return (t_ms >= -50.0 && t_ms <= 0.0) ? 1.0 : 0.0;
}

struct StepParams {
    double dt_ms = 1.0;
    double tau_ms = 10.0;
    double noise_amplitude = 0.0; ///< I_0; no draws are made when zero
};

/// Total synaptic input W r + W_os o + W_in s + W_fb y_fb (without noise).
/// Writes into `out`, which must have N entries.
void input_current(const ReservoirState& state, const ReservoirWeights& weights,
                   const Eigen::Ref<const Eigen::VectorXd>& drive, double onset,
                   const Eigen::Ref<const Eigen::VectorXd>& feedback, Eigen::Ref<Eigen::VectorXd> out);

/// Euler step of tau dx/dt = -x + input + noise. Advances `state` in place.
/// `noise_rng` is only touched when params.noise_amplitude > 0. `feedback`
/// may be empty, in which case W_fb is not read at all.
void step(ReservoirState& state, const ReservoirWeights& weights, const Eigen::Ref<const Eigen::VectorXd>& drive,
          double onset, const Eigen::Ref<const Eigen::VectorXd>& feedback, const StepParams& params,
          Rng* noise_rng = nullptr);

/// Debug dump: recurrent.csv (row,col,value triplets) plus dense
/// oscillator.csv, onset.csv and feedback.csv in `dir`.
void dump_weights_csv(const ReservoirWeights& weights, const std::filesystem::path& dir);

} // namespace odrc
