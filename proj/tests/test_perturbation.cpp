#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spinbath/echo.hpp"
#include "spinbath/perturbation.hpp"
#include "test_helpers.hpp"

using namespace spinbath;

namespace {

BogoliubovBasis ising_basis(int N, double lambda, Boundary bd = Boundary::Periodic) {
    ChainSpec chain{N, 1.0, 1.0, 0.0, lambda, bd};
    return diagonalize(build_quadratic_form(chain));
}

EchoSeries synthetic(const std::vector<double>& times, const std::function<double(double)>& f,
                     int N = 100) {
    EchoSeries s;
    s.times = times;
    s.chain.N = N;
    for (double t : times) s.values.push_back(f(t));
    return s;
}

}  // namespace

TEST_CASE("perturbative alpha: zero coupling, polarized bath, exact eps^2 scaling") {
    const BogoliubovBasis basis = ising_basis(30, 0.8);
    CHECK(alpha_perturbative(basis, 0.0).alpha == 0.0);
    CHECK(alpha_perturbative(ising_basis(30, -40.0), 0.3).alpha < 1e-5);

    const double a1 = alpha_perturbative(basis, 0.25).alpha;
    const double a2 = alpha_perturbative(basis, 0.5).alpha;
    CHECK(a2 == doctest::Approx(4.0 * a1).epsilon(1e-14));
}

TEST_CASE("perturbative alpha equals the variance of the coupled sigma^z") {
    for (double lambda : {0.5, 0.9, 1.0, 1.5}) {
        const BogoliubovBasis basis = ising_basis(60, lambda);
        const Eigen::MatrixXd r = correlation_matrix(basis).r;
        const double msz = 2.0 * r(0, 0) - 1.0;
        const double expected = 1.0 - msz * msz;
        CHECK(alpha_perturbative(basis, 1.0).alpha ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("fit_alpha recovers a pure Gaussian and rejects flat series") {
    const auto times = uniform_times(0.5, 400);
    const EchoSeries gauss = synthetic(times, [](double t) { return std::exp(-0.3 * t * t); });
    const AlphaEstimate est = fit_alpha(gauss);
    CHECK(est.alpha == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(!est.flagged);

    const EchoSeries flat = synthetic(times, [](double) { return 1.0; });
    CHECK_THROWS_AS(fit_alpha(flat), InsufficientDataError);
}

TEST_CASE("fitted alpha tracks the perturbative estimate on determinant series") {
    ChainSpec chain{100, 1.0, 1.0, 0.0, 0.9, Boundary::Periodic};
    const auto coupling = make_coupling(chain, 0.25, 1, Geometry::Explicit, {1});
    const EchoSeries series = echo_determinant(chain, coupling, uniform_times(0.35, 140));
    const double fit = fit_alpha(series).alpha;
    const double pert = alpha_perturbative(diagonalize(build_quadratic_form(chain)), 0.25).alpha;
    CHECK(std::abs(fit - pert) / pert < 0.10);
}

TEST_CASE("log-divergence fit on a constructed antiderivative") {
    // alpha(lambda) = eps^2 [a dl ln|dl| - a dl + b lambda]  =>  d(alpha/eps^2)/dl = a ln|dl| + b
    const double a = 0.4, b = 0.01, eps = 0.1;
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i <= 40; ++i) {
        const double l = 0.9 + 0.005 * i;
        if (std::abs(l - 1.0) < 1e-9) continue;
        const double dl = l - 1.0;
        samples.emplace_back(
            l, eps * eps * (a * dl * std::log(std::abs(dl)) - a * dl + b * l));
    }
    const auto [c1, c2] = fit_log_divergence(samples, 1.0, eps);
    CHECK(c1 == doctest::Approx(a).epsilon(0.02));
    CHECK(c2 == doctest::Approx(b).epsilon(0.1));

    const std::vector<std::pair<double, double>> few = {{0.9, 0.1}, {0.95, 0.2}, {1.05, 0.2}};
    CHECK_THROWS_AS(fit_log_divergence(few, 1.0, eps), InsufficientDataError);
}

TEST_CASE("perturbative plateau: limits and degenerate detection") {
    CHECK(plateau_perturbative(ising_basis(30, 0.8), 0.0).value == doctest::Approx(1.0));
    CHECK(plateau_perturbative(ising_basis(30, -40.0), 0.2).value ==
          doctest::Approx(1.0).epsilon(1e-6));
    // XX at lambda=1/2 with N divisible by 6 has exact zero modes in pairs
    ChainSpec xx{12, 1.0, 0.0, 0.0, 0.5, Boundary::Periodic};
    const BogoliubovBasis basis = diagonalize(build_quadratic_form(xx));
    CHECK_THROWS_AS(plateau_perturbative(basis, 0.1), DegenerateEstimateError);
}

TEST_CASE("perturbative plateau matches the determinant saturation value") {
    ChainSpec chain{100, 1.0, 1.0, 0.0, 1.5, Boundary::Periodic};
    const auto coupling = make_coupling(chain, 0.05, 1, Geometry::Explicit, {1});
    const EchoSeries series = echo_determinant(chain, coupling, uniform_times(40.0, 400));
    const PlateauEstimate plat = fit_plateau(series);
    const PlateauEstimate pert =
        plateau_perturbative(diagonalize(build_quadratic_form(chain)), 0.05);
    CHECK(std::abs(plat.value - pert.value) < 1e-3);
}

TEST_CASE("plateau averaging on synthetic series") {
    const auto times = uniform_times(60.0, 600);
    EchoSeries flat = synthetic(times, [](double) { return 0.7; }, 200);
    const PlateauEstimate p = fit_plateau(flat);
    CHECK(p.value == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(p.std_dev == doctest::Approx(0.0).epsilon(1e-12));
    // window respects the revival guard 0.8 * (N/2) = 80 > t_max/2 = 30
    CHECK(p.window.first == doctest::Approx(30.0));
    CHECK(p.window.second == doctest::Approx(80.0));

    EchoSeries osc =
        synthetic(times, [](double t) { return 0.5 + 0.1 * std::sin(3.7 * t); }, 200);
    CHECK(fit_plateau(osc).value == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("plateau cusp at the critical point") {
    const auto times = uniform_times(40.0, 400);
    auto plateau_at = [&](double lambda) {
        ChainSpec chain{100, 1.0, 1.0, 0.0, lambda, Boundary::Periodic};
        const auto coupling = make_coupling(chain, 0.25, 1, Geometry::Explicit, {1});
        return fit_plateau(echo_determinant(chain, coupling, times)).value;
    };
    const double at_09 = plateau_at(0.9), at_10 = plateau_at(1.0), at_11 = plateau_at(1.1);
    CHECK(at_10 < at_09);
    CHECK(at_10 < at_11);
}

TEST_CASE("critical-scaling fit recovers the generating parameters") {
    const double L0 = 0.9967, beta = 2.369e-3;
    std::vector<std::pair<int, double>> minima;
    for (int N : {50, 100, 200, 300, 400, 800})
        minima.emplace_back(N, L0 / (1.0 + beta * std::log(N)));
    const ScalingFit fit = fit_critical_scaling(minima);
    CHECK(fit.L0 == doctest::Approx(L0).epsilon(0.01));
    CHECK(fit.beta == doctest::Approx(beta).epsilon(0.01));
    CHECK(fit.monotone);

    minima[2].second = 1.0;  // break monotonicity: still fits, flags it
    CHECK(!fit_critical_scaling(minima).monotone);
    CHECK_THROWS_AS(fit_critical_scaling({{50, 0.9}, {100, 0.89}}), InsufficientDataError);
}

TEST_CASE("envelope fit on the synthetic cosine-modulated Gaussian") {
    const auto times = uniform_times(2.0, 8000);
    const EchoSeries s = synthetic(times, [](double t) {
        return std::pow(std::abs(std::cos(5.0 * t)), 10.0) * std::exp(-2.0 * t * t);
    });
    const EnvelopeFit fit = fit_envelope(s, 5.0, 20);
    CHECK(fit.S2 == doctest::Approx(2.0).epsilon(0.01));
    CHECK(fit.n_peaks >= 3);

    const EchoSeries flat = synthetic(uniform_times(1.0, 10), [](double) { return 1.0; });
    CHECK_THROWS_AS(fit_envelope(flat, 5.0, 20), InsufficientDataError);
}
