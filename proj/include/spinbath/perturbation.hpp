#pragma once

#include <utility>
#include <vector>

#include "spinbath/echo_series.hpp"
#include "spinbath/freefermion.hpp"

namespace spinbath {

enum class AlphaSource { Perturbative, Fit };

// Short-time Gaussian rate, L ~ exp(-alpha t^2).
struct AlphaEstimate {
    double alpha = 0.0;
    AlphaSource source = AlphaSource::Fit;
    std::pair<double, double> fit_window{0.0, 0.0};
    double residual = 0.0;
    bool flagged = false;  // residual > 1e-3
};

struct PlateauEstimate {
    double value = 0.0;
    std::pair<double, double> window{0.0, 0.0};
    double std_dev = 0.0;
};

// Gaussian envelope width of |cos(eps t)|^{p/2} exp(-S2 t^2) style decays.
struct EnvelopeFit {
    double S2 = 0.0;
    double epsilon_used = 0.0;
    double quality = 0.0;  // rms residual of -ln(peak) vs S2 t^2
    int n_peaks = 0;
};

struct ScalingFit {
    double L0 = 0.0;
    double beta = 0.0;
    bool monotone = true;  // minima strictly decreasing in N
};

// alpha = 4 eps^2 sum_{i != j} [(g_{i,s} h_{j,s})^2 - g_{i,s} g_{j,s} h_{i,s} h_{j,s}]
// with s the (1-based) linked site. Exact second-order rate; equals
// eps^2 (1 - <sigma^z_s>^2) on the unperturbed ground state.
AlphaEstimate alpha_perturbative(const BogoliubovBasis& basis_g, double epsilon, int site = 1);

// Least squares of -ln L = alpha t^2 + beta t^4 over the window
// 1 - L in [1e-6, 0.05] and t <= t_cap (the quartic term absorbs the leading
// cumulant correction; a plain quadratic fit underestimates alpha by ~30%).
AlphaEstimate fit_alpha(const EchoSeries& series, double t_cap = 0.35);

// Regresses central-difference d(alpha/eps^2)/d lambda against ln|lambda - lambda_c|
// over |lambda - lambda_c| in [window_lo, window_hi]; returns (c1, c2).
// The window keeps clear of the finite-size saturation (|dl| ≲ 3/N) and of the
// curvature beyond the scaling regime.
std::pair<double, double> fit_log_divergence(
    const std::vector<std::pair<double, double>>& lambda_alpha, double lambda_c, double epsilon,
    double window_lo = 0.015, double window_hi = 0.08);

// L_inf ~ [1 - 2 eps^2 sum_{i != j} (g_{i,s} h_{j,s} / (E_i + E_j))^2]^4,
// E from the unperturbed basis (single-quasiparticle excitation energies).
PlateauEstimate plateau_perturbative(const BogoliubovBasis& basis_g, double epsilon,
                                     int site = 1);

// Mean/std of L over [t_max/2, 0.8 t_rev] with the revival guard t_rev = N/2.
PlateauEstimate fit_plateau(const EchoSeries& series);

// Nonlinear least squares of L_min(N) = L0 / (1 + beta ln N).
ScalingFit fit_critical_scaling(const std::vector<std::pair<int, double>>& minima);

// Gaussian envelope width from the sequence of local maxima of L (parabolic
// peak refinement, peaks above `floor`): LSQ of -ln L_peak against t_peak^2.
EnvelopeFit fit_envelope(const EchoSeries& series, double epsilon, int exponent_N,
                         double floor = 1e-3);

}  // namespace spinbath
