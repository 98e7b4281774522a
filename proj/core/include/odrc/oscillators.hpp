#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace odrc {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Bank of sinusoids o_i(t) = sin(2 pi f_i t + phi_i). Frequencies and
/// phases are drawn once and never change.
struct SineBank {
    std::vector<double> frequencies_hz;
    std::vector<double> phases;
    double f_min_hz = 0.0;
    double f_max_hz = 0.0;

    std::size_t size() const noexcept { return frequencies_hz.size(); }
};

/// Draws `n_os` frequencies uniformly in [f_min, f_max] and phases uniformly
/// in [0, 2 pi). Throws ConfigError on an invalid band.
SineBank new_sine_bank(std::size_t n_os, double f_min_hz, double f_max_hz, std::uint64_t seed);

/// Drive vector at time `t_ms` (milliseconds, may be negative).
Eigen::VectorXd sample_sine(const SineBank& bank, double t_ms);
void sample_sine(const SineBank& bank, double t_ms, Eigen::Ref<Eigen::VectorXd> out);

struct NeuralOscillatorParams {
    std::size_t units = 100;
    double gain = 1.2;
    double connectivity = 0.1;
    double tau_ms = 20.0;
    double onset_gain = 5.0;
    std::size_t max_resamples = 50;
    // probe used to reject fixed points
    double probe_ms = 12000.0;
    double probe_discard_ms = 2000.0;
    double fixed_point_window_ms = 1000.0;
    double fixed_point_tolerance = 1e-3;
};

/// Small random rate network whose chosen unit acts as one oscillator.
class NeuralOscillator {
public:
    NeuralOscillator(SparseRowMatrix recurrent, Eigen::VectorXd onset_weights,
                     Eigen::VectorXd initial_state, double tau_ms, Eigen::Index output_unit);

    /// One Euler step of tau dx/dt = -x + W tanh(x) + w_in s. Returns the
    /// output unit's rate after the step.
    double step(double onset, double dt_ms);

    /// Current rate of the output unit.
    double output() const { return std::tanh(state_[output_unit_]); }

    /// Restores the construction-time initial state.
    void reset() { state_ = initial_state_; }

    const Eigen::VectorXd& state() const noexcept { return state_; }
    void set_state(const Eigen::VectorXd& x);
    const SparseRowMatrix& recurrent() const noexcept { return recurrent_; }
    const Eigen::VectorXd& onset_weights() const noexcept { return onset_weights_; }
    double tau_ms() const noexcept { return tau_ms_; }
    Eigen::Index output_unit() const noexcept { return output_unit_; }
    Eigen::Index units() const noexcept { return state_.size(); }

    /// Runs the fixed-point probe from the initial state (onset pulse on
    /// [-50, 0] ms, start at -250 ms) and returns the output trace after the
    /// discard period, sampled every `dt_ms`. Does not modify *this.
    std::vector<double> probe_trace(double total_ms, double discard_ms, double dt_ms = 1.0) const;

private:
    SparseRowMatrix recurrent_;
    Eigen::VectorXd onset_weights_;
    Eigen::VectorXd initial_state_;
    Eigen::VectorXd state_;
    Eigen::VectorXd scratch_;
    double tau_ms_;
    Eigen::Index output_unit_;
};

/// Builds an oscillator, resampling the recurrent weights until the probe
/// trace is not a fixed point. Throws ConstructionError when the budget of
/// `max_resamples` draws is exhausted.
NeuralOscillator new_neural_oscillator(const NeuralOscillatorParams& params, std::uint64_t seed);

/// True iff max - min over the trailing `window_ms` of `trace` is below
/// `tolerance`. Throws ArgumentError when the trace is shorter than the window.
bool detect_fixed_point(std::span<const double> trace, double window_ms = 1000.0,
                        double tolerance = 1e-3, double dt_ms = 1.0);

/// Oscillator drive as seen by the reservoir: nothing, a sine bank, or a set
/// of neural oscillators (which carry state and must be advanced).
class OscillatorBank {
public:
    OscillatorBank() = default;
    explicit OscillatorBank(SineBank bank) : impl_(std::move(bank)) {}
    explicit OscillatorBank(std::vector<NeuralOscillator> oscillators) : impl_(std::move(oscillators)) {}

    std::size_t size() const noexcept;
    bool is_neural() const noexcept { return std::holds_alternative<std::vector<NeuralOscillator>>(impl_); }
    bool empty() const noexcept { return size() == 0; }

    /// Returns neural oscillators to their initial states (trial start).
    void reset();

    /// Drive vector o(t) at the current time.
    void sample(double t_ms, Eigen::Ref<Eigen::VectorXd> out) const;

    /// Advances stateful oscillators by `dt_ms` under onset input `onset`.
    void advance(double onset, double dt_ms);

    const SineBank* sine() const noexcept { return std::get_if<SineBank>(&impl_); }
    const std::vector<NeuralOscillator>* neural() const noexcept
    {
        return std::get_if<std::vector<NeuralOscillator>>(&impl_);
    }

private:
    std::variant<std::monostate, SineBank, std::vector<NeuralOscillator>> impl_;
};

} // namespace odrc
