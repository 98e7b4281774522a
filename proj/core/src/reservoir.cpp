#include "odrc/reservoir.hpp"

#include "odrc/error.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <vector>

namespace odrc {

SparseRowMatrix random_sparse_gaussian(Eigen::Index n, double p, double sd, Rng& rng)
{
    std::bernoulli_distribution connected(p);
    std::normal_distribution<double> value(0.0, sd > 0.0 ? sd : 1.0);
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(p * static_cast<double>(n) * static_cast<double>(n) * 1.1) + 16);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!connected(rng))
                continue;
            const double w = value(rng);
            if (sd > 0.0)
                entries.emplace_back(i, j, w);
        }
    }
    SparseRowMatrix m(n, n);
    m.setFromTriplets(entries.begin(), entries.end());
    m.makeCompressed();
    return m;
}

namespace {

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double sd, Rng& rng)
{
    Eigen::MatrixXd m(rows, cols);
    if (sd <= 0.0) {
        m.setZero();
        return m;
    }
    std::normal_distribution<double> dist(0.0, sd);
    // row-major draw order regardless of storage
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = dist(rng);
    return m;
}

} // namespace

ReservoirWeights init_weights(Eigen::Index n, Eigen::Index n_os, Eigen::Index n_ro, const GainConfig& gains,
                              double p, std::uint64_t seed)
{
    if (n < 1)
        throw ArgumentError("reservoir needs at least one unit");
    if (n_os < 0)
        throw ArgumentError("negative oscillator count");
    if (n_ro < 1)
        throw ArgumentError("reservoir needs at least one readout dimension");
    if (!(p > 0.0 && p <= 1.0))
        throw ArgumentError("connection probability must lie in (0, 1]");

    // one sub-stream per matrix so that resizing one (e.g. no oscillators)
    // leaves the others unchanged
    Rng recurrent_rng = make_stream(seed, Stream::reservoir_weights, 0);
    Rng oscillator_rng = make_stream(seed, Stream::reservoir_weights, 1);
    Rng onset_rng = make_stream(seed, Stream::reservoir_weights, 2);
    Rng feedback_rng = make_stream(seed, Stream::reservoir_weights, 3);

    ReservoirWeights w;
    w.gains = gains;
    w.connectivity = p;
    w.recurrent =
        random_sparse_gaussian(n, p, gains.recurrent / std::sqrt(p * static_cast<double>(n)), recurrent_rng);
    w.oscillator = gaussian_matrix(n, n_os, n_os > 0 ? gains.oscillator / std::sqrt(static_cast<double>(n_os)) : 0.0,
                                   oscillator_rng);
    w.onset = gaussian_matrix(n, 1, gains.onset, onset_rng).col(0);
    w.feedback = gaussian_matrix(n, n_ro, gains.feedback / std::sqrt(static_cast<double>(n_ro)), feedback_rng);
    return w;
}

ReservoirState init_state(Eigen::Index n, Rng& rng)
{
    if (n < 1)
        throw ArgumentError("reservoir needs at least one unit");
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ReservoirState s;
    s.x.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
        s.x[i] = dist(rng);
    s.r = s.x.array().tanh();
    s.t_ms = simulation_start_ms;
    return s;
}

ReservoirState init_state(Eigen::Index n, std::uint64_t seed)
{
    Rng rng = make_rng(seed);
    return init_state(n, rng);
}

namespace {

void check_dimensions(const ReservoirState& state, const ReservoirWeights& weights,
                      const Eigen::Ref<const Eigen::VectorXd>& drive, const Eigen::Ref<const Eigen::VectorXd>& feedback)
{
    const auto n = weights.units();
    if (state.x.size() != n || state.r.size() != n || weights.recurrent.rows() != n || weights.oscillator.rows() != n
        || weights.feedback.rows() != n)
        throw ArgumentError("reservoir step: state and weight sizes disagree");
    if (drive.size() != weights.oscillators())
        throw ArgumentError("reservoir step: drive vector has wrong length");
    if (feedback.size() != 0 && feedback.size() != weights.outputs())
        throw ArgumentError("reservoir step: feedback vector has wrong length");
}

} // namespace

void input_current(const ReservoirState& state, const ReservoirWeights& weights,
                   const Eigen::Ref<const Eigen::VectorXd>& drive, double onset,
                   const Eigen::Ref<const Eigen::VectorXd>& feedback, Eigen::Ref<Eigen::VectorXd> out)
{
    check_dimensions(state, weights, drive, feedback);
    out.noalias() = weights.recurrent * state.r;
    if (drive.size() > 0)
        out.noalias() += weights.oscillator * drive;
    if (onset != 0.0)
        out.noalias() += onset * weights.onset;
    if (feedback.size() > 0)
        out.noalias() += weights.feedback * feedback;
}

void step(ReservoirState& state, const ReservoirWeights& weights, const Eigen::Ref<const Eigen::VectorXd>& drive,
          double onset, const Eigen::Ref<const Eigen::VectorXd>& feedback, const StepParams& params, Rng* noise_rng)
{
    if (!(params.dt_ms > 0.0) || !(params.tau_ms > 0.0))
        throw ArgumentError("reservoir step: dt and tau must be positive");
    check_dimensions(state, weights, drive, feedback);

    const double a = params.dt_ms / params.tau_ms;
    state.x *= (1.0 - a);
    state.x.noalias() += a * (weights.recurrent * state.r);
    if (drive.size() > 0)
        state.x.noalias() += a * (weights.oscillator * drive);
    if (onset != 0.0)
        state.x.noalias() += (a * onset) * weights.onset;
    if (feedback.size() > 0)
        state.x.noalias() += a * (weights.feedback * feedback);
    if (params.noise_amplitude > 0.0) {
        if (noise_rng == nullptr)
            throw ArgumentError("reservoir step: noise requested without a generator");
        std::normal_distribution<double> noise(0.0, params.noise_amplitude);
        for (Eigen::Index i = 0; i < state.x.size(); ++i)
            state.x[i] += a * noise(*noise_rng);
    }
    state.r = state.x.array().tanh();
    state.t_ms += params.dt_ms;
}

namespace {

void write_dense(const Eigen::MatrixXd& m, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out << (j ? "," : "") << m(i, j);
        out << '\n';
    }
}

} // namespace

void dump_weights_csv(const ReservoirWeights& weights, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::ofstream out(dir / "recurrent.csv");
    if (!out)
        throw IoError("cannot write " + (dir / "recurrent.csv").string());
    out << std::setprecision(17) << "row,col,value\n";
    for (Eigen::Index i = 0; i < weights.recurrent.outerSize(); ++i)
        for (SparseRowMatrix::InnerIterator it(weights.recurrent, i); it; ++it)
            out << it.row() << ',' << it.col() << ',' << it.value() << '\n';
    write_dense(weights.oscillator, dir / "oscillator.csv");
    write_dense(weights.onset, dir / "onset.csv");
    write_dense(weights.feedback, dir / "feedback.csv");
}

} // namespace odrc
