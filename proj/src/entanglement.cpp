#include "spinbath/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "spinbath/echo.hpp"
#include "spinbath/perturbation.hpp"

namespace spinbath {

double concurrence(const Eigen::Matrix4cd& rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
        throw InvalidStateError("concurrence: rho not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-8 || std::abs(rho.trace().imag()) > 1e-8)
        throw InvalidStateError("concurrence: trace(rho) != 1");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> herm(rho);
    if (herm.eigenvalues().minCoeff() < -1e-8)
        throw InvalidStateError("concurrence: rho has a negative eigenvalue");

    Eigen::Matrix4cd syy = Eigen::Matrix4cd::Zero();  // sigma_y x sigma_y
    syy(0, 3) = -1;
    syy(1, 2) = 1;
    syy(2, 1) = 1;
    syy(3, 0) = -1;
    const Eigen::Matrix4cd rho_tilde = syy * rho.conjugate() * syy;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(rho * rho_tilde);
    std::array<double, 4> l{};
    for (int i = 0; i < 4; ++i)
        l[i] = std::sqrt(std::max(0.0, solver.eigenvalues()[i].real()));
    std::sort(l.begin(), l.end(), std::greater<>());
    return std::clamp(l[0] - l[1] - l[2] - l[3], 0.0, 1.0);
}

ConcurrenceProfile nn_concurrence_scan(const ChainSpec& chain, SectorRule rule) {
    const DenseHamiltonian H = dense_hamiltonian(chain);
    const DenseState G = ground_state(H, rule);
    ConcurrenceProfile profile;
    profile.chain = chain;
    for (int j = 1; j < chain.N; ++j) profile.pairs.emplace_back(j, j + 1);
    if (chain.boundary == Boundary::Periodic) profile.pairs.emplace_back(chain.N, 1);
    for (const auto& [i, j] : profile.pairs)
        profile.values.push_back(concurrence(reduced_density_matrix(G, i, j)));
    return profile;
}

std::vector<AlphaConcurrenceRow> alpha_vs_concurrence(const std::vector<ChainSpec>& grid,
                                                      const CouplingSpec& coupling,
                                                      bool param_is_lambda, SectorRule rule) {
    std::vector<AlphaConcurrenceRow> rows;
    rows.reserve(grid.size());
    for (const ChainSpec& chain : grid) {
        AlphaConcurrenceRow row;
        row.param = param_is_lambda ? chain.lambda : chain.delta;

        const DenseHamiltonian H = dense_hamiltonian(chain);
        const DenseState G = ground_state(H, rule);
        const int left = (chain.boundary == Boundary::Periodic) ? 1 : chain.N / 2;
        row.C1 = concurrence(reduced_density_matrix(G, left, left + 1));

        if (chain.delta == 0.0) {
            if (coupling.m != 1)
                throw UnsupportedModelError("alpha_vs_concurrence: perturbative alpha needs m=1");
            const BogoliubovBasis basis = diagonalize(build_quadratic_form(chain));
            row.alpha = alpha_perturbative(basis, coupling.epsilon, coupling.sites.front()).alpha;
        } else {
            const auto series =
                echo_ed(chain, coupling, uniform_times(0.35, 70), rule);
            row.alpha = fit_alpha(series).alpha;
        }
        rows.push_back(row);
    }
    return rows;
}

void write_alpha_concurrence_csv(const std::vector<AlphaConcurrenceRow>& rows,
                                 const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "param,C1,alpha\n";
    char buf[96];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g\n", r.param, r.C1, r.alpha);
        out << buf;
    }
}

}  // namespace spinbath
