#include "spinbath/perturbation.hpp"

#include <algorithm>
#include <cmath>

namespace spinbath {

AlphaEstimate alpha_perturbative(const BogoliubovBasis& basis_g, double epsilon, int site) {
    const int N = basis_g.size();
    if (site < 1 || site > N) throw Error("alpha_perturbative: site out of range");
    const Eigen::VectorXd gc = basis_g.g.col(site - 1);
    const Eigen::VectorXd hc = basis_g.h.col(site - 1);
    // sum_{i!=j} (g_i h_j)^2 = (sum g^2)(sum h^2) - sum g^2 h^2, same trick for the cross term
    const double g2 = gc.squaredNorm(), h2 = hc.squaredNorm();
    const double gh = gc.dot(hc);
    const double mixed = gc.array().square().matrix().dot(hc.array().square().matrix());
    const double s = (g2 * h2 - mixed) - (gh * gh - mixed);
    AlphaEstimate est;
    est.alpha = std::max(0.0, 4.0 * epsilon * epsilon * s);
    est.source = AlphaSource::Perturbative;
    return est;
}

AlphaEstimate fit_alpha(const EchoSeries& series, double t_cap) {
    std::vector<double> xs, ys;
    double t_lo = 0.0, t_hi = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series.times[i];
        const double L = series.values[i];
        const double drop = 1.0 - L;
        if (t <= 0.0 || t > t_cap) continue;
        if (drop < 1e-6 || drop > 0.05) continue;
        if (t_lo == 0.0) t_lo = t;
        t_hi = t;
        xs.push_back(t * t);
        ys.push_back(-std::log(L));
    }
    if (xs.size() < 4)
        throw InsufficientDataError("fit_alpha: fewer than 4 points with 1-L in [1e-6, 0.05]");

    // normal equations for y = a x + b x^2
    double sxx = 0, sxc = 0, scc = 0, sxy = 0, scy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i], c = xs[i] * xs[i];
        sxx += x * x;
        sxc += x * c;
        scc += c * c;
        sxy += x * ys[i];
        scy += c * ys[i];
    }
    const double det = sxx * scc - sxc * sxc;
    if (std::abs(det) < 1e-300) throw NumericalFailureError("fit_alpha: degenerate design matrix");
    const double a = (scc * sxy - sxc * scy) / det;
    const double b = (sxx * scy - sxc * sxy) / det;

    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - a * xs[i] - b * xs[i] * xs[i];
        rss += r * r;
    }
    AlphaEstimate est;
    est.alpha = std::max(0.0, a);
    est.source = AlphaSource::Fit;
    est.fit_window = {t_lo, t_hi};
    est.residual = std::sqrt(rss / xs.size());
    est.flagged = est.residual > 1e-3;
    return est;
}

std::pair<double, double> fit_log_divergence(
    const std::vector<std::pair<double, double>>& lambda_alpha, double lambda_c, double epsilon,
    double window_lo, double window_hi) {
    if (epsilon == 0.0) throw Error("fit_log_divergence: epsilon must be nonzero");
    auto pts = lambda_alpha;
    std::sort(pts.begin(), pts.end());
    for (const auto& [l, a] : pts)
        if (l == lambda_c) throw Error("fit_log_divergence: samples must exclude lambda_c");

    // uniform spacing assumed; central differences that do not straddle lambda_c
    std::vector<double> xs, ys;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const double lm = pts[i - 1].first, l0 = pts[i].first, lp = pts[i + 1].first;
        if ((lm - lambda_c) * (lp - lambda_c) < 0) continue;
        const double spacing = (lp - lm) / 2.0;
        if (std::abs((lp - l0) - (l0 - lm)) > 1e-9 * std::max(1.0, std::abs(spacing)))
            continue;  // grid hole
        const double dl = std::abs(l0 - lambda_c);
        if (dl < window_lo || dl > window_hi) continue;
        xs.push_back(std::log(dl));
        ys.push_back((pts[i + 1].second - pts[i - 1].second) / (epsilon * epsilon) / (lp - lm));
    }
    if (xs.size() < 4)
        throw InsufficientDataError("fit_log_divergence: fewer than 4 usable derivative points");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double c1 = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double c2 = (sy - c1 * sx) / n;
    return {c1, c2};
}

PlateauEstimate plateau_perturbative(const BogoliubovBasis& basis_g, double epsilon, int site) {
    const int N = basis_g.size();
    if (site < 1 || site > N) throw Error("plateau_perturbative: site out of range");
    const Eigen::VectorXd gc = basis_g.g.col(site - 1);
    const Eigen::VectorXd hc = basis_g.h.col(site - 1);
    double s = 0;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            if (i == j) continue;
            const double denom = basis_g.energies[i] + basis_g.energies[j];
            const double num = gc[i] * hc[j];
            if (std::abs(denom) < 1e-10) {
                if (std::abs(num) < 1e-14) continue;  // vanishing numerator, no contribution
                throw DegenerateEstimateError(
                    "plateau_perturbative: zero-mode pair energy below 1e-10");
            }
            s += (num / denom) * (num / denom);
        }
    }
    PlateauEstimate est;
    const double bracket = 1.0 - 2.0 * epsilon * epsilon * s;
    est.value = bracket * bracket * bracket * bracket;
    return est;
}

PlateauEstimate fit_plateau(const EchoSeries& series) {
    if (series.times.empty()) throw InsufficientDataError("fit_plateau: empty series");
    const double t_max = *std::max_element(series.times.begin(), series.times.end());
    const double t_rev = series.chain.N / 2.0;
    const double lo = t_max / 2.0;
    const double hi = 0.8 * t_rev;
    double sum = 0, sum2 = 0;
    int n = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series.times[i];
        if (t < lo || t > hi) continue;
        sum += series.values[i];
        sum2 += series.values[i] * series.values[i];
        ++n;
    }
    if (n < 2)
        throw InsufficientDataError("fit_plateau: window [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "] holds fewer than 2 points");
    PlateauEstimate est;
    est.value = sum / n;
    est.window = {lo, hi};
    est.std_dev = std::sqrt(std::max(0.0, sum2 / n - est.value * est.value));
    return est;
}

ScalingFit fit_critical_scaling(const std::vector<std::pair<int, double>>& minima) {
    if (minima.size() < 4)
        throw InsufficientDataError("fit_critical_scaling: need at least 4 sizes");
    auto pts = minima;
    std::sort(pts.begin(), pts.end());
    ScalingFit fit;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].second >= pts[i - 1].second) fit.monotone = false;

    // linearized start: 1/L = (1/L0)(1 + beta ln N)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(pts.size());
    for (const auto& [N, L] : pts) {
        const double x = std::log(static_cast<double>(N)), y = 1.0 / L;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double a1 = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double a0 = (sy - a1 * sx) / n;
    double L0 = 1.0 / a0, beta = a1 / a0;

    // Gauss-Newton polish on the nonlinear model
    for (int it = 0; it < 100; ++it) {
        double jtj00 = 0, jtj01 = 0, jtj11 = 0, jtr0 = 0, jtr1 = 0;
        for (const auto& [N, L] : pts) {
            const double x = std::log(static_cast<double>(N));
            const double den = 1.0 + beta * x;
            const double f = L0 / den;
            const double r = L - f;
            const double j0 = 1.0 / den;
            const double j1 = -L0 * x / (den * den);
            jtj00 += j0 * j0;
            jtj01 += j0 * j1;
            jtj11 += j1 * j1;
            jtr0 += j0 * r;
            jtr1 += j1 * r;
        }
        const double det = jtj00 * jtj11 - jtj01 * jtj01;
        if (std::abs(det) < 1e-300) break;
        const double d0 = (jtj11 * jtr0 - jtj01 * jtr1) / det;
        const double d1 = (jtj00 * jtr1 - jtj01 * jtr0) / det;
        L0 += d0;
        beta += d1;
        if (std::abs(d0) + std::abs(d1) < 1e-14) break;
    }
    fit.L0 = L0;
    fit.beta = beta;
    return fit;
}

EnvelopeFit fit_envelope(const EchoSeries& series, double epsilon, int exponent_N,
                         double floor) {
    (void)exponent_N;  // the peak sequence carries the envelope directly
    std::vector<std::pair<double, double>> peaks;  // (t, L) with parabolic refinement
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        const double y0 = series.values[i - 1], y1 = series.values[i], y2 = series.values[i + 1];
        if (!(y1 >= y0 && y1 > y2 && y1 > floor)) continue;
        const double d = y0 - 2.0 * y1 + y2;
        double th = series.times[i], yh = y1;
        if (d < 0) {
            const double shift = 0.5 * (y0 - y2) / d;
            const double dt = series.times[i + 1] - series.times[i];
            th += shift * dt;
            yh = y1 - 0.25 * (y0 - y2) * shift;
        }
        peaks.emplace_back(th, std::min(yh, 1.0));
    }
    if (peaks.size() < 2)
        throw InsufficientDataError("fit_envelope: fewer than 2 usable echo peaks");

    double sxx = 0, sxy = 0;
    for (const auto& [t, L] : peaks) {
        const double x = t * t, y = -std::log(L);
        sxx += x * x;
        sxy += x * y;
    }
    EnvelopeFit fit;
    fit.S2 = std::max(0.0, sxy / sxx);
    fit.epsilon_used = epsilon;
    fit.n_peaks = static_cast<int>(peaks.size());
    double rss = 0;
    for (const auto& [t, L] : peaks) {
        const double r = -std::log(L) - fit.S2 * t * t;
        rss += r * r;
    }
    fit.quality = std::sqrt(rss / peaks.size());
    return fit;
}

}  // namespace spinbath
