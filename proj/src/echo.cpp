#include "spinbath/echo.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

#include "spinbath/parallel.hpp"

namespace spinbath {

using Cplx = std::complex<double>;

std::string to_string(EchoMethod method) {
    switch (method) {
        case EchoMethod::Determinant: return "determinant";
        case EchoMethod::CentralSpin: return "central_spin";
        case EchoMethod::EDExact: return "ed";
        case EchoMethod::EDTrotter: return "trotter";
    }
    return "unknown";
}

std::vector<double> uniform_times(double t_max, int steps) {
    if (steps < 1) throw Error("uniform_times: steps must be >= 1");
    std::vector<double> t(steps + 1);
    for (int i = 0; i <= steps; ++i) t[i] = t_max * i / steps;
    return t;
}

void write_csv(const EchoSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "t,L\n";
    char buf[64];
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.15g,%.15g\n", series.times[i], series.values[i]);
        out << buf;
    }
}

DeterminantEcho::DeterminantEcho(const ChainSpec& chain, const CouplingSpec& coupling,
                                 PeriodicConvention convention) {
    const QuadraticForm form_g = build_quadratic_form(chain, std::nullopt, convention);
    const QuadraticForm form_e = build_quadratic_form(chain, coupling, convention);
    basis_g_ = diagonalize(form_g);
    basis_e_ = diagonalize(form_e);

    const int N = chain.N;
    const Eigen::MatrixXd r = correlation_matrix(basis_g_).r;
    Eigen::MatrixXd Ue(2 * N, 2 * N);
    Ue.topLeftCorner(N, N) = basis_e_.g;
    Ue.topRightCorner(N, N) = basis_e_.h;
    Ue.bottomLeftCorner(N, N) = basis_e_.h;
    Ue.bottomRightCorner(N, N) = basis_e_.g;
    r_rotated_ = Ue * r * Ue.transpose();
    De_.resize(2 * N);
    De_.head(N) = basis_e_.energies;
    De_.tail(N) = -basis_e_.energies;
}

double DeterminantEcho::value(double t) const {
    const Eigen::Index n = De_.size();
    // M = 1 - r' + r' diag(exp(-i D t)): column scaling of r'
    Eigen::MatrixXcd M(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Cplx ph = std::exp(Cplx(0.0, -De_[j] * t)) - 1.0;
        M.col(j) = r_rotated_.col(j).cast<Cplx>() * ph;
        M(j, j) += 1.0;
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    // |det| via log magnitudes of the U diagonal; permutation sign drops out
    double log_mag = 0.0;
    const auto& LU = lu.matrixLU();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = std::abs(LU(i, i));
        if (a <= 0.0 || !std::isfinite(a))
            throw NumericalFailureError("echo determinant: singular LU factor at t = " +
                                        std::to_string(t));
        log_mag += std::log(a);
    }
    return std::exp(kDeterminantExponent * log_mag);
}

EchoSeries echo_determinant(const ChainSpec& chain, const CouplingSpec& coupling,
                            const std::vector<double>& times, PeriodicConvention convention,
                            int threads) {
    for (double t : times)
        if (!std::isfinite(t)) throw Error("echo_determinant: non-finite time");
    const DeterminantEcho engine(chain, coupling, convention);
    EchoSeries series;
    series.method = EchoMethod::Determinant;
    series.chain = chain;
    series.coupling = coupling;
    series.times = times;
    series.values.resize(times.size());
    parallel_for(times.size(), [&](std::size_t i) { series.values[i] = engine.value(times[i]); },
                 threads);
    return series;
}

CentralSpinModes central_spin_modes(const ChainSpec& chain, double epsilon) {
    validate_chain(chain);
    if (chain.delta != 0.0)
        throw UnsupportedModelError("central spin closed form requires delta = 0");
    if (chain.boundary != Boundary::Periodic)
        throw UnsupportedModelError("central spin closed form requires periodic boundary");
    if (chain.N % 2 != 0)
        throw UnsupportedModelError("central spin closed form requires even N (k,-k pairing)");

    const int half = chain.N / 2;
    CentralSpinModes modes;
    modes.theta0.resize(half);
    modes.theta_eps.resize(half);
    modes.alpha.resize(half);
    modes.energies.resize(half);
    for (int k = 1; k <= half; ++k) {
        const double phi = 2.0 * M_PI * k / chain.N;
        const double c = std::cos(phi), s = std::sin(phi);
        modes.theta0[k - 1] = std::atan2(-s, c - chain.lambda);
        modes.theta_eps[k - 1] = std::atan2(-s, c - (chain.lambda + epsilon));
        modes.alpha[k - 1] = 0.5 * (modes.theta0[k - 1] - modes.theta_eps[k - 1]);
        const double a = c - (chain.lambda + epsilon);
        modes.energies[k - 1] =
            2.0 * chain.J * std::sqrt(a * a + chain.gamma * chain.gamma * s * s);
    }
    return modes;
}

EchoSeries echo_central_spin(const ChainSpec& chain, double epsilon,
                             const std::vector<double>& times) {
    const CentralSpinModes modes = central_spin_modes(chain, epsilon);
    EchoSeries series;
    series.method = EchoMethod::CentralSpin;
    series.chain = chain;
    series.coupling = make_coupling(chain, epsilon, chain.N, Geometry::StarA);
    series.times = times;
    series.values.resize(times.size());
    const Eigen::ArrayXd s2a = (2.0 * modes.alpha.array()).sin().square();
    for (std::size_t i = 0; i < times.size(); ++i) {
        const Eigen::ArrayXd s2e = (modes.energies.array() * times[i]).sin().square();
        double L = 1.0;
        for (Eigen::Index k = 0; k < s2a.size(); ++k) L *= 1.0 - s2a[k] * s2e[k];
        series.values[i] = L;
    }
    return series;
}

}  // namespace spinbath
