#include "odrc/oscillators.hpp"

#include "odrc/error.hpp"
#include "odrc/reservoir.hpp"
#include "odrc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace odrc {

SineBank new_sine_bank(std::size_t n_os, double f_min_hz, double f_max_hz, std::uint64_t seed)
{
    if (!(f_min_hz > 0.0) || !(f_min_hz <= f_max_hz) || !std::isfinite(f_max_hz)) {
        std::ostringstream msg;
        msg << "invalid oscillator band [" << f_min_hz << ", " << f_max_hz << "] Hz";
        throw ConfigError(msg.str());
    }
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> freq(f_min_hz, f_max_hz);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

    SineBank bank;
    bank.f_min_hz = f_min_hz;
    bank.f_max_hz = f_max_hz;
    bank.frequencies_hz.reserve(n_os);
    bank.phases.reserve(n_os);
    for (std::size_t i = 0; i < n_os; ++i) {
        // uniform_real_distribution(a, b) is [a, b); a degenerate band must
        // still produce exactly f_min
        bank.frequencies_hz.push_back(f_min_hz == f_max_hz ? f_min_hz : freq(rng));
        bank.phases.push_back(phase(rng));
    }
    return bank;
}

void sample_sine(const SineBank& bank, double t_ms, Eigen::Ref<Eigen::VectorXd> out)
{
    const double t_s = t_ms * 1e-3;
    for (std::size_t i = 0; i < bank.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] =
            std::sin(2.0 * std::numbers::pi * bank.frequencies_hz[i] * t_s + bank.phases[i]);
    }
}

Eigen::VectorXd sample_sine(const SineBank& bank, double t_ms)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(bank.size()));
    sample_sine(bank, t_ms, out);
    return out;
}

NeuralOscillator::NeuralOscillator(SparseRowMatrix recurrent, Eigen::VectorXd onset_weights,
                                   Eigen::VectorXd initial_state, double tau_ms, Eigen::Index output_unit)
    : recurrent_(std::move(recurrent)),
      onset_weights_(std::move(onset_weights)),
      initial_state_(std::move(initial_state)),
      state_(initial_state_),
      scratch_(initial_state_.size()),
      tau_ms_(tau_ms),
      output_unit_(output_unit)
{
    const auto n = initial_state_.size();
    if (n < 1 || recurrent_.rows() != n || recurrent_.cols() != n || onset_weights_.size() != n)
        throw ArgumentError("neural oscillator: inconsistent dimensions");
    if (!(tau_ms_ > 0.0))
        throw ArgumentError("neural oscillator: tau must be positive");
    if (output_unit_ < 0 || output_unit_ >= n)
        throw ArgumentError("neural oscillator: output unit out of range");
}

void NeuralOscillator::set_state(const Eigen::VectorXd& x)
{
    if (x.size() != state_.size())
        throw ArgumentError("neural oscillator: state size mismatch");
    state_ = x;
}

double NeuralOscillator::step(double onset, double dt_ms)
{
    const double a = dt_ms / tau_ms_;
    scratch_ = state_.array().tanh();
    state_ *= (1.0 - a);
    state_.noalias() += a * (recurrent_ * scratch_);
    if (onset != 0.0)
        state_.noalias() += (a * onset) * onset_weights_;
    return output();
}

std::vector<double> NeuralOscillator::probe_trace(double total_ms, double discard_ms, double dt_ms) const
{
    NeuralOscillator probe = *this;
    probe.reset();
    std::vector<double> trace;
    const auto total_steps = static_cast<long>(std::llround(total_ms / dt_ms));
    const auto discard_steps = static_cast<long>(std::llround(discard_ms / dt_ms));
    trace.reserve(static_cast<std::size_t>(std::max(0L, total_steps - discard_steps)));
    double t = simulation_start_ms;
    for (long k = 0; k < total_steps; ++k) {
        const double out = probe.step(onset_signal(t), dt_ms);
        t += dt_ms;
        if (k >= discard_steps)
            trace.push_back(out);
    }
    return trace;
}

NeuralOscillator new_neural_oscillator(const NeuralOscillatorParams& params, std::uint64_t seed)
{
    if (params.units < 1)
        throw ArgumentError("neural oscillator needs at least one unit");
    if (!(params.connectivity > 0.0 && params.connectivity <= 1.0))
        throw ArgumentError("neural oscillator connectivity must lie in (0, 1]");
    if (!(params.tau_ms > 0.0))
        throw ArgumentError("neural oscillator tau must be positive");

    const auto n = static_cast<Eigen::Index>(params.units);
    Rng rng = make_rng(seed);

    std::normal_distribution<double> onset_dist(0.0, params.onset_gain);
    Eigen::VectorXd onset_weights(n);
    for (Eigen::Index i = 0; i < n; ++i)
        onset_weights[i] = params.onset_gain > 0.0 ? onset_dist(rng) : 0.0;

    std::uniform_real_distribution<double> init(-1.0, 1.0);
    Eigen::VectorXd initial(n);
    for (Eigen::Index i = 0; i < n; ++i)
        initial[i] = init(rng);

    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    const Eigen::Index output_unit = pick(rng);

    const double sd = params.gain / std::sqrt(params.connectivity * static_cast<double>(n));
    for (std::size_t attempt = 1; attempt <= params.max_resamples; ++attempt) {
        NeuralOscillator candidate(random_sparse_gaussian(n, params.connectivity, sd, rng), onset_weights,
                                   initial, params.tau_ms, output_unit);
        const auto trace = candidate.probe_trace(params.probe_ms, params.probe_discard_ms);
        if (!detect_fixed_point(trace, params.fixed_point_window_ms, params.fixed_point_tolerance))
            return candidate;
    }
    std::ostringstream msg;
    msg << "neural oscillator converged to a fixed point in all " << params.max_resamples << " attempts";
    throw ConstructionError(msg.str(), params.max_resamples);
}

bool detect_fixed_point(std::span<const double> trace, double window_ms, double tolerance, double dt_ms)
{
    const auto window = static_cast<std::size_t>(std::llround(window_ms / dt_ms));
    if (window == 0 || trace.size() < window)
        throw ArgumentError("detect_fixed_point: trace shorter than window");
    const auto tail = trace.last(window);
    const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
    return (*hi - *lo) < tolerance;
}

std::size_t OscillatorBank::size() const noexcept
{
    if (const auto* s = std::get_if<SineBank>(&impl_))
        return s->size();
    if (const auto* n = std::get_if<std::vector<NeuralOscillator>>(&impl_))
        return n->size();
    return 0;
}

void OscillatorBank::reset()
{
    if (auto* n = std::get_if<std::vector<NeuralOscillator>>(&impl_))
        for (auto& osc : *n)
            osc.reset();
}

void OscillatorBank::sample(double t_ms, Eigen::Ref<Eigen::VectorXd> out) const
{
    if (const auto* s = std::get_if<SineBank>(&impl_)) {
        sample_sine(*s, t_ms, out);
    } else if (const auto* n = std::get_if<std::vector<NeuralOscillator>>(&impl_)) {
        for (std::size_t i = 0; i < n->size(); ++i)
            out[static_cast<Eigen::Index>(i)] = (*n)[i].output();
    }
}

void OscillatorBank::advance(double onset, double dt_ms)
{
    if (auto* n = std::get_if<std::vector<NeuralOscillator>>(&impl_))
        for (auto& osc : *n)
            osc.step(onset, dt_ms);
}

} // namespace odrc
