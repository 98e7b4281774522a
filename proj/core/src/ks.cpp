#include "odrc/error.hpp"
#include "odrc/targets.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>

namespace odrc {

namespace {

using Complex = std::complex<double>;

// Contour points for the ETDRK4 phi-function averages.
constexpr int contour_points = 64;

} // namespace

KsSolver::KsSolver(const KsParams& params, const Eigen::VectorXd& u0) : params_(params)
{
    const auto n = params.grid;
    if (n < 4 || (n % 2) != 0)
        throw ArgumentError("KS grid must be even and at least 4");
    if (!(params.domain > 0.0) || !(params.dt > 0.0))
        throw ArgumentError("KS domain and step must be positive");
    if (u0.size() != n)
        throw ArgumentError("KS initial field has wrong length");

    q_.resize(n);
    dealias_.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index m = k < n / 2 ? k : (k == n / 2 ? 0 : k - n);
        q_[k] = 2.0 * std::numbers::pi * static_cast<double>(m) / params.domain;
        dealias_[k] = (3 * std::abs(m) < n && k != n / 2) ? 1.0 : 0.0;
    }
    linear_ = q_.array().square() - q_.array().pow(4);

    const double h = params.dt;
    e_ = (h * linear_).array().exp();
    e2_ = (0.5 * h * linear_).array().exp();
    qc_.resize(n);
    f1_.resize(n);
    f2_.resize(n);
    f3_.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Complex q{0.0}, a{0.0}, b{0.0}, c{0.0};
        for (int j = 1; j <= contour_points; ++j) {
            const Complex root = std::exp(Complex(0.0, std::numbers::pi * (j - 0.5) / contour_points));
            const Complex lr = h * linear_[k] + root;
            const Complex elr = std::exp(lr);
            const Complex lr3 = lr * lr * lr;
            q += (std::exp(lr / 2.0) - 1.0) / lr;
            a += (-4.0 - lr + elr * (4.0 - 3.0 * lr + lr * lr)) / lr3;
            b += (2.0 + lr + elr * (-2.0 + lr)) / lr3;
            c += (-4.0 - 3.0 * lr - lr * lr + elr * (4.0 - lr)) / lr3;
        }
        qc_[k] = h * (q / double(contour_points)).real();
        f1_[k] = h * (a / double(contour_points)).real();
        f2_[k] = h * (b / double(contour_points)).real();
        f3_[k] = h * (c / double(contour_points)).real();
    }

    g_.resize(n);
    for (Eigen::Index k = 0; k < n; ++k)
        g_[k] = Complex(0.0, -0.5 * q_[k]);

    Eigen::FFT<double> fft;
    Eigen::VectorXcd in = u0.cast<Complex>();
    v_.resize(n);
    fft.fwd(v_, in);
}

Eigen::VectorXcd KsSolver::nonlinear_term(const Eigen::VectorXcd& v) const
{
    if (!params_.nonlinear)
        return Eigen::VectorXcd::Zero(v.size());
    // -u u_x = -(u^2)_x / 2, computed pseudo-spectrally
    Eigen::FFT<double> fft;
    Eigen::VectorXcd masked = v.cwiseProduct(dealias_.cast<Complex>());
    Eigen::VectorXcd u(v.size());
    fft.inv(u, masked);
    Eigen::VectorXcd sq = u.real().array().square().matrix().cast<Complex>();
    Eigen::VectorXcd out(v.size());
    fft.fwd(out, sq);
    return g_.cwiseProduct(out).cwiseProduct(dealias_.cast<Complex>());
}

void KsSolver::step()
{
    const Eigen::VectorXcd e = e_.cast<Complex>();
    const Eigen::VectorXcd e2 = e2_.cast<Complex>();
    const Eigen::VectorXcd qc = qc_.cast<Complex>();

    const Eigen::VectorXcd nv = nonlinear_term(v_);
    const Eigen::VectorXcd a = e2.cwiseProduct(v_) + qc.cwiseProduct(nv);
    const Eigen::VectorXcd na = nonlinear_term(a);
    const Eigen::VectorXcd b = e2.cwiseProduct(v_) + qc.cwiseProduct(na);
    const Eigen::VectorXcd nb = nonlinear_term(b);
    const Eigen::VectorXcd c = e2.cwiseProduct(a) + qc.cwiseProduct(2.0 * nb - nv);
    const Eigen::VectorXcd nc = nonlinear_term(c);

    v_ = e.cwiseProduct(v_) + nv.cwiseProduct(f1_.cast<Complex>())
         + 2.0 * (na + nb).cwiseProduct(f2_.cast<Complex>()) + nc.cwiseProduct(f3_.cast<Complex>());
    // keep the spectrum of a real field: round-off in the anti-Hermitian
    // part would otherwise grow in the linearly unstable modes
    const Eigen::Index n = v_.size();
    v_[0] = v_[0].real();
    v_[n / 2] = 0.0;
    for (Eigen::Index k = 1; k < n / 2; ++k) {
        const Complex sym = 0.5 * (v_[k] + std::conj(v_[n - k]));
        v_[k] = sym;
        v_[n - k] = std::conj(sym);
    }
    time_ += params_.dt;
}

Eigen::VectorXd KsSolver::field() const
{
    Eigen::FFT<double> fft;
    Eigen::VectorXcd u(v_.size());
    Eigen::VectorXcd v = v_;
    fft.inv(u, v);
    return u.real();
}

Eigen::VectorXd ks_initial_condition(const KsParams& params)
{
    Eigen::VectorXd u(params.grid);
    for (Eigen::Index i = 0; i < params.grid; ++i) {
        const double x = params.domain * static_cast<double>(i) / static_cast<double>(params.grid);
        const double phase = 2.0 * std::numbers::pi * x / params.domain;
        u[i] = 0.1 * std::cos(phase) * (1.0 + std::sin(phase));
    }
    return u;
}

Eigen::MatrixXd ks_raw(Eigen::Index samples, const KsParams& params)
{
    if (samples < 0)
        throw ArgumentError("negative sample count");
    KsSolver solver(params, ks_initial_condition(params));
    solver.step(params.burn_in);
    Eigen::MatrixXd out(samples, params.grid);
    for (Eigen::Index i = 0; i < samples; ++i) {
        const Eigen::VectorXd u = solver.field();
        if (!u.allFinite())
            throw GenerationError("KS integration blew up (non-finite field)");
        out.row(i) = u.transpose();
        solver.step();
    }
    return out;
}

TargetSeries ks_series(double duration_ms)
{
    KsParams params;
    auto out = normalize_series(ks_raw(samples_for_duration(duration_ms), params), "ks");
    out.model_time_per_sample = params.dt;
    return out;
}

} // namespace odrc
