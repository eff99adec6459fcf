#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "spinbath/ed_oracle.hpp"
#include "spinbath/freefermion.hpp"
#include "test_helpers.hpp"

using namespace spinbath;

namespace {

QuadraticForm tfim_form(int N, double lambda, Boundary bd = Boundary::Open,
                        PeriodicConvention conv = PeriodicConvention::CCyclic,
                        double gamma = 1.0) {
    ChainSpec chain{N, 1.0, gamma, 0.0, lambda, bd};
    return build_quadratic_form(chain, std::nullopt, conv);
}

}  // namespace

TEST_CASE("single-mode forms") {
    // A = [-2 lambda], B = [0]: E = 2|lambda|, occupied for lambda > 0
    for (double lambda : {0.7, -0.7}) {
        QuadraticForm form;
        form.A = Eigen::MatrixXd::Constant(1, 1, -2.0 * lambda);
        form.B = Eigen::MatrixXd::Zero(1, 1);
        const BogoliubovBasis basis = diagonalize(form);
        CHECK(basis.energies[0] == doctest::Approx(2 * std::abs(lambda)));
        if (lambda > 0) {
            CHECK(std::abs(basis.h(0, 0)) == doctest::Approx(1.0));
            CHECK(std::abs(basis.g(0, 0)) == doctest::Approx(0.0));
        } else {
            CHECK(std::abs(basis.g(0, 0)) == doctest::Approx(1.0));
            CHECK(std::abs(basis.h(0, 0)) == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("two-site Ising at zero field has spectrum {0, 2}") {
    const BogoliubovBasis basis = diagonalize(tfim_form(2, 0.0));
    CHECK(basis.energies[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(basis.energies[1] == doctest::Approx(2.0));
}

TEST_CASE("canonical constraints and mode equations") {
    testutil::Lcg rng(11);
    for (int trial = 0; trial < 12; ++trial) {
        const int N = rng.integer(2, 14);
        const double gamma = trial % 3 == 0 ? 1.0 : rng.range(0, 1);
        const double lambda = rng.range(-1.6, 1.6);
        const Boundary bd = trial % 2 ? Boundary::Periodic : Boundary::Open;
        const QuadraticForm form = tfim_form(N, lambda, bd, PeriodicConvention::CCyclic, gamma);
        const BogoliubovBasis basis = diagonalize(form);
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N, N);

        CHECK(testutil::max_abs_diff(basis.g * basis.g.transpose() +
                                         basis.h * basis.h.transpose(),
                                     I) < 1e-10);
        // {eta_k, eta_l} = (g h^T + h g^T)_{kl} = 0
        CHECK((basis.g * basis.h.transpose() + basis.h * basis.g.transpose())
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        for (int k = 1; k < N; ++k) CHECK(basis.energies[k] >= basis.energies[k - 1]);
        CHECK(basis.energies[0] >= -1e-12);

        const Eigen::MatrixXd Phi = basis.g + basis.h;
        const Eigen::MatrixXd Psi = basis.g - basis.h;
        const Eigen::MatrixXd E = basis.energies.asDiagonal();
        CHECK(testutil::max_abs_diff(Phi * (form.A - form.B), E * Psi) < 1e-9);
        CHECK(testutil::max_abs_diff(Psi * (form.A + form.B), E * Phi) < 1e-9);
    }
}

TEST_CASE("correlation matrix is a projector with trace N") {
    for (double lambda : {0.5, 1.0, 1.5}) {
        const int N = 8;
        const BogoliubovBasis basis = diagonalize(tfim_form(N, lambda));
        const Eigen::MatrixXd r = correlation_matrix(basis).r;
        CHECK(testutil::max_abs_diff(r, r.transpose()) < 1e-12);
        CHECK(testutil::max_abs_diff(r * r, r) < 1e-8);
        CHECK(r.trace() == doctest::Approx(N).epsilon(1e-8));
    }
}

TEST_CASE("polarized limit gives the empty-vacuum block structure") {
    // strong field with all spins down <-> no Jordan-Wigner fermions
    const int N = 6;
    const BogoliubovBasis basis = diagonalize(tfim_form(N, -50.0));
    const Eigen::MatrixXd r = correlation_matrix(basis).r;
    CHECK(r.topLeftCorner(N, N).cwiseAbs().maxCoeff() < 1e-3);       // <c+ c> ~ 0
    CHECK(testutil::max_abs_diff(r.bottomRightCorner(N, N),
                                 Eigen::MatrixXd::Identity(N, N)) < 1e-3);
}

TEST_CASE("r is invariant under the mode sign gauge") {
    const QuadraticForm form = tfim_form(7, 0.8);
    BogoliubovBasis basis = diagonalize(form);
    const Eigen::MatrixXd r0 = correlation_matrix(basis).r;
    basis.g.row(2) *= -1.0;
    basis.h.row(2) *= -1.0;
    basis.g.row(5) *= -1.0;
    basis.h.row(5) *= -1.0;
    CHECK(testutil::max_abs_diff(correlation_matrix(basis).r, r0) < 1e-14);
}

TEST_CASE("Nambu matrix assembly and exponential") {
    const QuadraticForm form = tfim_form(8, 0.5);
    const NambuMatrix nm = nambu(form);
    const int n = 16;

    Eigen::MatrixXd Cref(n, n);
    Cref.topLeftCorner(8, 8) = form.A;
    Cref.topRightCorner(8, 8) = form.B;
    Cref.bottomLeftCorner(8, 8) = -form.B;
    Cref.bottomRightCorner(8, 8) = -form.A;
    CHECK(testutil::max_abs_diff(nm.C, Cref) < 1e-12);
    CHECK(testutil::max_abs_diff(nm.U.transpose() * nm.D.asDiagonal() * nm.U, nm.C) < 1e-10);
    CHECK(testutil::max_abs_diff(nm.U * nm.U.transpose(), Eigen::MatrixXd::Identity(n, n)) <
          1e-10);

    // +-E pairing of the spectrum
    Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(nm.C).eigenvalues();
    for (int k = 0; k < 8; ++k)
        CHECK(ev[k] == doctest::Approx(-ev[n - 1 - k]).epsilon(1e-10));

    CHECK(testutil::max_abs_diff(nambu_exponential(nm, 0.0),
                                 Eigen::MatrixXcd::Identity(n, n)) < 1e-12);
    const Eigen::MatrixXcd e10 = nambu_exponential(nm, 10.0);
    CHECK((e10.adjoint() * e10 - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("unperturbed-equals-perturbed when eps = 0") {
    ChainSpec chain{6, 1.0, 0.6, 0.0, 0.9, Boundary::Open};
    const auto c0 = make_coupling(chain, 0.0, 2, Geometry::StarA);
    const NambuMatrix a = nambu(build_quadratic_form(chain));
    const NambuMatrix b = nambu(build_quadratic_form(chain, c0));
    CHECK(testutil::max_abs_diff(a.C, b.C) == 0.0);
}

TEST_CASE("vacuum energy matches the dense ground state (open)") {
    for (double lambda : {0.5, 1.0, 1.5}) {
        for (double gamma : {1.0, 0.4}) {
            ChainSpec chain{8, 1.0, gamma, 0.0, lambda, Boundary::Open};
            const BogoliubovBasis basis = diagonalize(build_quadratic_form(chain));
            const double e_ff = -0.5 * basis.energies.sum();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_hamiltonian(chain).H);
            CHECK(e_ff == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-8));
        }
    }
}

TEST_CASE("parity-even corners reproduce the even-sector spectrum at N=8") {
    ChainSpec chain{8, 1.0, 1.0, 0.0, 1.0, Boundary::Periodic};
    const BogoliubovBasis basis =
        diagonalize(build_quadratic_form(chain, std::nullopt, PeriodicConvention::ParityEven));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_hamiltonian(chain).H);
    const Eigen::VectorXd parity = fermion_parity_diagonal(8);
    std::vector<double> even;
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
        const Eigen::VectorXd v = es.eigenvectors().col(k);
        const double p = v.dot(parity.asDiagonal() * v);
        if (p > 0.5) even.push_back(es.eigenvalues()[k]);
    }
    REQUIRE(!even.empty());
    CHECK(-0.5 * basis.energies.sum() == doctest::Approx(even[0]).epsilon(1e-8));
    // lowest even-sector gap = two lowest quasiparticles
    CHECK(basis.energies[0] + basis.energies[1] ==
          doctest::Approx(even[1] - even[0]).epsilon(1e-8));
}

TEST_CASE("malformed forms are rejected") {
    QuadraticForm form;
    form.A = Eigen::MatrixXd::Random(4, 4);  // generically not symmetric
    form.B = Eigen::MatrixXd::Zero(4, 4);
    CHECK_THROWS_AS(diagonalize(form), InvalidFormError);
}
