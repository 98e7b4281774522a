#include "odrc/error.hpp"
#include "odrc/reservoir.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace odrc;

namespace {

double sample_sd(const Eigen::VectorXd& v)
{
    const double mean = v.mean();
    return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size() - 1));
}

Eigen::VectorXd nonzeros(const SparseRowMatrix& m)
{
    return Eigen::Map<const Eigen::VectorXd>(m.valuePtr(), m.nonZeros());
}

} // namespace

TEST_CASE("weight statistics at N = 2000")
{
    const GainConfig gains;
    const auto w = init_weights(2000, 10, 1, gains, 0.1, 1);
    const double density = static_cast<double>(w.recurrent.nonZeros()) / (2000.0 * 2000.0);
    CHECK(density == doctest::Approx(0.1).epsilon(0.01));

    const double expected_sd = 1.5 / std::sqrt(0.1 * 2000.0);
    CHECK(std::abs(sample_sd(nonzeros(w.recurrent)) / expected_sd - 1.0) < 0.05);
    CHECK(std::abs(nonzeros(w.recurrent).mean()) < 0.05 * expected_sd);

    const Eigen::VectorXd osc = w.oscillator.reshaped();
    CHECK(std::abs(sample_sd(osc) / (0.5 / std::sqrt(10.0)) - 1.0) < 0.05);
    CHECK(std::abs(sample_sd(w.onset) / 5.0 - 1.0) < 0.05);
    CHECK(std::abs(sample_sd(w.feedback.col(0)) / 3.0 - 1.0) < 0.05);
}

TEST_CASE("weights are reproducible and sub-streams independent")
{
    const GainConfig gains;
    const auto a = init_weights(100, 10, 1, gains, 0.1, 3);
    const auto b = init_weights(100, 10, 1, gains, 0.1, 3);
    CHECK(Eigen::MatrixXd(a.recurrent) == Eigen::MatrixXd(b.recurrent));
    CHECK(a.oscillator == b.oscillator);

    // dropping the oscillators changes nothing else
    const auto c = init_weights(100, 0, 1, gains, 0.1, 3);
    CHECK(Eigen::MatrixXd(a.recurrent) == Eigen::MatrixXd(c.recurrent));
    CHECK(a.onset == c.onset);
    CHECK(a.feedback == c.feedback);
    CHECK(c.oscillators() == 0);

    const auto d = init_weights(100, 10, 1, gains, 0.1, 4);
    CHECK(a.onset != d.onset);
}

TEST_CASE("init_weights validates")
{
    const GainConfig gains;
    CHECK_THROWS_AS(init_weights(0, 10, 1, gains, 0.1, 1), ArgumentError);
    CHECK_THROWS_AS(init_weights(10, -1, 1, gains, 0.1, 1), ArgumentError);
    CHECK_THROWS_AS(init_weights(10, 10, 0, gains, 0.1, 1), ArgumentError);
    CHECK_THROWS_AS(init_weights(10, 10, 1, gains, 0.0, 1), ArgumentError);
    CHECK_THROWS_AS(init_weights(10, 10, 1, gains, 1.5, 1), ArgumentError);
}

TEST_CASE("init_state is uniform on [-1, 1]")
{
    const auto s = init_state(100000, 5);
    CHECK(std::abs(s.x.mean()) < 0.02);
    CHECK(s.x.minCoeff() >= -1.0);
    CHECK(s.x.maxCoeff() <= 1.0);
    CHECK(s.x.array().square().mean() == doctest::Approx(1.0 / 3.0).epsilon(0.02));
    CHECK(s.r == Eigen::VectorXd(s.x.array().tanh()));
    CHECK(s.t_ms == simulation_start_ms);
}

TEST_CASE("onset signal")
{
    CHECK(onset_signal(-51.0) == 0.0);
    CHECK(onset_signal(-50.0) == 1.0);
    CHECK(onset_signal(-1.0) == 1.0);
    CHECK(onset_signal(0.0) == 1.0);
    CHECK(onset_signal(1.0) == 0.0);
}

TEST_CASE("step agrees with a long double recomputation")
{
    const GainConfig gains;
    const auto w = init_weights(60, 10, 3, gains, 0.2, 8);
    const Eigen::MatrixXd dense(w.recurrent);
    Rng rng = make_rng(99);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const StepParams params;

    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        ReservoirState s = init_state(60, rng);
        Eigen::VectorXd o(10), y(3);
        for (auto& v : o)
            v = gauss(rng);
        for (auto& v : y)
            v = gauss(rng);
        const double onset = trial % 2;
        const ReservoirState before = s;
        step(s, w, o, onset, y, params);

        const long double a = 1.0L / 10.0L;
        for (Eigen::Index i = 0; i < 60; ++i) {
            long double in = onset * static_cast<long double>(w.onset[i]);
            for (Eigen::Index j = 0; j < 60; ++j)
                in += static_cast<long double>(dense(i, j)) * before.r[j];
            for (Eigen::Index j = 0; j < 10; ++j)
                in += static_cast<long double>(w.oscillator(i, j)) * o[j];
            for (Eigen::Index j = 0; j < 3; ++j)
                in += static_cast<long double>(w.feedback(i, j)) * y[j];
            const long double ref = (1.0L - a) * before.x[i] + a * in;
            const double scale = std::max(1.0, static_cast<double>(std::abs(ref)));
            worst = std::max(worst, static_cast<double>(std::abs(s.x[i] - ref)) / scale);
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("step is affine in each input")
{
    const GainConfig gains;
    const auto w = init_weights(50, 4, 2, gains, 0.2, 2);
    const StepParams params;
    const auto base = init_state(50, 3);
    auto run = [&](const Eigen::VectorXd& o, const Eigen::VectorXd& y) {
        ReservoirState s = base;
        step(s, w, o, 0.0, y, params);
        return Eigen::VectorXd(s.x);
    };
    const Eigen::VectorXd o1 = Eigen::VectorXd::LinSpaced(4, -1.0, 1.0), o2 = Eigen::VectorXd::Constant(4, 0.3);
    const Eigen::VectorXd y1 = Eigen::VectorXd::LinSpaced(2, 0.5, -0.2), y2 = Eigen::VectorXd::Constant(2, -0.7);
    const Eigen::VectorXd z4 = Eigen::VectorXd::Zero(4), z2 = Eigen::VectorXd::Zero(2);

    const Eigen::VectorXd x0 = run(z4, z2);
    const Eigen::VectorXd lhs = run(o1 + o2, y1 + y2) - x0;
    const Eigen::VectorXd rhs = (run(o1, z2) - x0) + (run(o2, z2) - x0) + (run(z4, y1) - x0) + (run(z4, y2) - x0);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);

    const Eigen::VectorXd scaled = run(2.5 * o1, z2) - x0;
    CHECK((scaled - 2.5 * (run(o1, z2) - x0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("empty feedback never reads W_fb")
{
    const GainConfig gains;
    auto w = init_weights(30, 2, 1, gains, 0.2, 2);
    w.feedback.setConstant(std::numeric_limits<double>::quiet_NaN());
    auto s = init_state(30, 1);
    const Eigen::VectorXd o = Eigen::VectorXd::Ones(2);
    for (int i = 0; i < 10; ++i)
        step(s, w, o, 1.0, Eigen::VectorXd(), StepParams{});
    CHECK(s.x.allFinite());
    CHECK(s.t_ms == doctest::Approx(simulation_start_ms + 10.0));
}

TEST_CASE("reservoir is contractive for g < 1 without input")
{
    GainConfig gains;
    gains.recurrent = 0.5;
    const auto w = init_weights(200, 0, 1, gains, 0.1, 4);
    auto a = init_state(200, 1);
    auto b = init_state(200, 2);
    const double initial = (a.x - b.x).norm();
    const Eigen::VectorXd none;
    for (int i = 0; i < 500; ++i) {
        step(a, w, none, 0.0, none, StepParams{});
        step(b, w, none, 0.0, none, StepParams{});
    }
    CHECK((a.x - b.x).norm() < 1e-6 * initial);
    CHECK(a.x.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("noise is drawn only when requested")
{
    const GainConfig gains;
    const auto w = init_weights(20, 0, 1, gains, 0.2, 4);
    const Eigen::VectorXd none;
    StepParams noisy;
    noisy.noise_amplitude = 0.1;
    auto s = init_state(20, 1);
    CHECK_THROWS_AS(step(s, w, none, 0.0, none, noisy), ArgumentError);

    Rng r1 = make_rng(1), r2 = make_rng(1);
    auto a = init_state(20, 1), b = init_state(20, 1), c = init_state(20, 1);
    step(a, w, none, 0.0, none, noisy, &r1);
    step(b, w, none, 0.0, none, noisy, &r2);
    step(c, w, none, 0.0, none, StepParams{}, &r2);
    CHECK(a.x == b.x);
    CHECK(a.x != c.x);
    // the noiseless step consumed nothing
    Rng r3 = make_rng(1);
    step(b, w, none, 0.0, none, noisy, &r3);
    CHECK(r2() == r3());
}

TEST_CASE("step validates dimensions")
{
    const GainConfig gains;
    const auto w = init_weights(20, 3, 2, gains, 0.2, 4);
    auto s = init_state(20, 1);
    CHECK_THROWS_AS(step(s, w, Eigen::VectorXd::Zero(2), 0.0, Eigen::VectorXd(), StepParams{}), ArgumentError);
    CHECK_THROWS_AS(step(s, w, Eigen::VectorXd::Zero(3), 0.0, Eigen::VectorXd::Zero(1), StepParams{}),
                    ArgumentError);
    auto small = init_state(19, 1);
    CHECK_THROWS_AS(step(small, w, Eigen::VectorXd::Zero(3), 0.0, Eigen::VectorXd(), StepParams{}), ArgumentError);
}
