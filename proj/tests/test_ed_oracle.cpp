#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "spinbath/ed_oracle.hpp"
#include "spinbath/freefermion.hpp"
#include "test_helpers.hpp"

using namespace spinbath;
using Cplx = std::complex<double>;

TEST_CASE("two-site Ising spectrum is {-J, -J, +J, +J}") {
    ChainSpec chain{2, 1.0, 1.0, 0.0, 0.0, Boundary::Open};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_hamiltonian(chain).H);
    CHECK(es.eigenvalues()[0] == doctest::Approx(-1.0));
    CHECK(es.eigenvalues()[1] == doctest::Approx(-1.0));
    CHECK(es.eigenvalues()[2] == doctest::Approx(1.0));
    CHECK(es.eigenvalues()[3] == doctest::Approx(1.0));
}

TEST_CASE("transverse field acts on every site") {
    // all-up diagonal entry: the Ising bond is purely off-diagonal, so
    // H(0,0) = -J lambda (sz_1 + sz_2) = -2 J lambda
    const DenseHamiltonian H = dense_hamiltonian(ChainSpec{2, 1.0, 1.0, 0.0, 0.8, Boundary::Open});
    CHECK(H.H(0, 0) == doctest::Approx(-1.6));
    CHECK(H.H(3, 3) == doctest::Approx(+1.6));
}

TEST_CASE("matrix-free apply agrees with the dense matrix") {
    ChainSpec chain{8, 1.0, 0.7, 0.4, 0.6, Boundary::Periodic};
    const auto coupling = make_coupling(chain, 0.3, 2, Geometry::StarA);
    const DenseHamiltonian H = dense_hamiltonian(chain, coupling);
    testutil::Lcg rng(3);
    Eigen::VectorXcd v(H.H.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Cplx(rng.range(-1, 1), rng.range(-1, 1));
    Eigen::VectorXcd out;
    apply_hamiltonian(chain, coupling, v, out);
    CHECK((out - H.H * v).cwiseAbs().maxCoeff() < 1e-12);
    // Hermiticity sample
    CHECK(testutil::max_abs_diff(H.H, H.H.transpose()) < 1e-12);
}

TEST_CASE("dense ground energy matches the free-fermion vacuum at delta=0") {
    ChainSpec chain{8, 1.0, 1.0, 0.0, 0.5, Boundary::Open};
    const BogoliubovBasis basis = diagonalize(build_quadratic_form(chain));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_hamiltonian(chain).H);
    CHECK(-0.5 * basis.energies.sum() == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-8));
}

TEST_CASE("size cap") {
    ChainSpec chain{13, 1.0, 1.0, 0.0, 0.5, Boundary::Open};
    CHECK_THROWS_AS(dense_hamiltonian(chain), SizeLimitError);
}

TEST_CASE("MaxSz picks the fully polarized ferromagnet") {
    ChainSpec chain{6, 1.0, 0.0, 1.5, 0.0, Boundary::Open};  // XXZ, Delta = 1.5
    const DenseState G = ground_state(dense_hamiltonian(chain), SectorRule::MaxSz);
    CHECK(std::abs(G.amplitudes[0]) == doctest::Approx(1.0).epsilon(1e-10));  // index 0 = all up
}

TEST_CASE("XX chain above the critical field is fully polarized") {
    ChainSpec chain{6, 1.0, 0.0, 0.0, 1.5, Boundary::Periodic};
    const DenseState G = ground_state(dense_hamiltonian(chain), SectorRule::Lowest);
    CHECK(std::abs(G.amplitudes[0]) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("XXZ two-site ground state in the far antiferromagnetic regime") {
    // Eq.-3 sign convention: the xy exchange is ferromagnetic, so the
    // Delta -> -inf ground state is the symmetric Neel combination (ud+du)/sqrt2.
    ChainSpec chain{2, 1.0, 0.0, -5.0, 0.0, Boundary::Open};
    const DenseState G = ground_state(dense_hamiltonian(chain), SectorRule::Lowest);
    // basis: index 1 = ud, index 2 = du (bit 0 of site 1)
    CHECK(std::abs(G.amplitudes[1]) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(std::abs(G.amplitudes[2]) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(std::abs(G.amplitudes[1] - G.amplitudes[2]) < 1e-10);
}

TEST_CASE("exact evolution basics") {
    ChainSpec chain{6, 1.0, 1.0, 0.0, 0.7, Boundary::Open};
    const DenseHamiltonian H = dense_hamiltonian(chain);
    const DenseState G = ground_state(H, SectorRule::Lowest);

    const DenseState same = evolve_exact(G, H, 0.0);
    CHECK((same.amplitudes - G.amplitudes).cwiseAbs().maxCoeff() < 1e-12);

    const DenseState rot = evolve_exact(G, H, 3.7);
    CHECK(std::abs(std::abs(G.amplitudes.dot(rot.amplitudes)) - 1.0) < 1e-10);  // eigenstate

    testutil::Lcg rng(5);
    Eigen::VectorXcd v(G.amplitudes.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Cplx(rng.range(-1, 1), rng.range(-1, 1));
    v.normalize();
    DenseState psi{v, 6};
    const DenseState evolved = evolve_exact(psi, H, 100.0);
    CHECK(evolved.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-10));
    const Cplx e0 = psi.amplitudes.dot(H.H * psi.amplitudes);
    const Cplx e1 = evolved.amplitudes.dot(H.H * evolved.amplitudes);
    CHECK(std::abs(e1 - e0) < 1e-10);
}

TEST_CASE("echo_ed: eps = 0 keeps L = 1 and the polarized XXZ does not decay") {
    ChainSpec chain{8, 1.0, 0.0, 1.5, 0.0, Boundary::Open};
    const auto c0 = make_coupling(chain, 0.0, 1, Geometry::Explicit, {4});
    const auto c1 = make_coupling(chain, 0.1, 1, Geometry::Explicit, {4});
    const auto t = uniform_times(3.0, 60);
    for (double L : echo_ed(chain, c0, t, SectorRule::MaxSz).values)
        CHECK(L == doctest::Approx(1.0).epsilon(1e-12));
    for (double L : echo_ed(chain, c1, t, SectorRule::MaxSz).values)
        CHECK(L == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Trotter splitting is exact when all terms commute") {
    // zero-field Ising: every bond is sx sx, F and G commute
    ChainSpec chain{6, 1.0, 1.0, 0.0, 0.0, Boundary::Open};
    ChainSpec witness{6, 1.0, 1.0, 0.0, 0.5, Boundary::Open};
    const DenseState psi = ground_state(dense_hamiltonian(witness), SectorRule::Lowest);
    const DenseHamiltonian H = dense_hamiltonian(chain);
    const DenseState exact = evolve_exact(psi, H, 2.0);
    const DenseState trot = evolve_trotter(psi, chain, std::nullopt, 2.0, 1);
    CHECK((exact.amplitudes - trot.amplitudes).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Trotter error scales as dt^2") {
    ChainSpec chain{6, 1.0, 1.0, 0.0, 0.8, Boundary::Open};
    const auto coupling = make_coupling(chain, 0.3, 1, Geometry::Explicit, {3});
    ChainSpec witness = chain;
    witness.lambda = 0.2;
    const DenseState psi = ground_state(dense_hamiltonian(witness), SectorRule::Lowest);
    const DenseHamiltonian He = dense_hamiltonian(chain, coupling);
    const DenseState exact = evolve_exact(psi, He, 1.0);

    auto err = [&](int steps) {
        const DenseState t = evolve_trotter(psi, chain, coupling, 1.0, steps);
        CHECK(t.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
        return (t.amplitudes - exact.amplitudes).norm();
    };
    const double e100 = err(100), e200 = err(200);
    CHECK(e100 / e200 == doctest::Approx(4.0).epsilon(0.12));
}

TEST_CASE("reduced density matrices") {
    // product state |ud u ...>
    const int N = 5;
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(1 << N);
    amp[1 << 1] = 1.0;  // site 2 down, others up
    DenseState prod{amp, N};
    const Eigen::Matrix4cd rho_p = reduced_density_matrix(prod, 1, 2);
    Eigen::Matrix4cd expect = Eigen::Matrix4cd::Zero();
    expect(1, 1) = 1.0;  // |u d>
    CHECK(testutil::max_abs_diff(rho_p, expect) < 1e-14);

    // GHZ
    Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(1 << N);
    ghz[0] = ghz[(1 << N) - 1] = 1.0 / std::sqrt(2.0);
    const Eigen::Matrix4cd rho_g = reduced_density_matrix(DenseState{ghz, N}, 2, 4);
    Eigen::Matrix4cd eg = Eigen::Matrix4cd::Zero();
    eg(0, 0) = eg(3, 3) = 0.5;
    CHECK(testutil::max_abs_diff(rho_g, eg) < 1e-14);

    CHECK(std::abs(rho_g.trace().real() - 1.0) < 1e-12);
    CHECK_THROWS_AS(reduced_density_matrix(prod, 2, 2), InvalidSitesError);
}

TEST_CASE("rdm cross-checks the free-fermion correlators through Wick") {
    ChainSpec chain{8, 1.0, 1.0, 0.0, 0.5, Boundary::Open};
    const DenseState G = ground_state(dense_hamiltonian(chain), SectorRule::Lowest);
    const BogoliubovBasis basis = diagonalize(build_quadratic_form(chain));
    const Eigen::MatrixXd r = correlation_matrix(basis).r;
    const int N = 8;

    // <sz_i> = 2 <c+_i c_i> - 1
    for (int i : {1, 4, 8}) {
        const Eigen::Matrix4cd rho = reduced_density_matrix(G, i, i == 1 ? 2 : 1);
        const double sz_ed = (rho(0, 0) + rho(1, 1) - rho(2, 2) - rho(3, 3)).real();
        CHECK(sz_ed == doctest::Approx(2.0 * r(i - 1, i - 1) - 1.0).epsilon(1e-8));
    }

    // <sz_i sz_j> via Wick on the fermion blocks (i=2, j=5)
    const int i = 2, j = 5;
    const double ni = r(i - 1, i - 1), nj = r(j - 1, j - 1);
    const double hop = r(i - 1, j - 1);               // <c+_i c_j>
    const double pair = r(i - 1, N + j - 1);          // <c+_i c+_j>
    const double pair2 = r(N + i - 1, j - 1);         // <c_i c_j>
    const double hop2 = r(N + i - 1, N + j - 1);      // <c_i c+_j>
    const double ninj = ni * nj - pair * pair2 + hop * hop2;
    const double szsz_ff = 4.0 * ninj - 2.0 * ni - 2.0 * nj + 1.0;

    const Eigen::Matrix4cd rho = reduced_density_matrix(G, i, j);
    const double szsz_ed = (rho(0, 0) - rho(1, 1) - rho(2, 2) + rho(3, 3)).real();
    CHECK(szsz_ed == doctest::Approx(szsz_ff).epsilon(1e-8));
}
