#pragma once

#include <Eigen/Dense>
#include <optional>

#include "spinbath/echo_series.hpp"
#include "spinbath/model.hpp"

namespace spinbath {

// Hard cap on the dense engine (2^12 = 4096 amplitudes).
inline constexpr int kDenseSiteCap = 12;

// Tie-break rule for (quasi-)degenerate ground spaces. States within
// 1e-8 * max(1,|E0|) of the lowest eigenvalue count as degenerate.
enum class SectorRule {
    MaxSz,       // maximal total sigma^z expectation (XXZ ferromagnet)
    EvenParity,  // even fermion parity, mirrors the free-fermion vacuum
    Lowest       // first eigenvector, sign fixed by its first nonzero entry
};

struct DenseState {
    Eigen::VectorXcd amplitudes;  // length 2^N, basis bit j = 0 <-> spin up at site j+1
    int N = 0;
};

struct DenseHamiltonian {
    ChainSpec chain;
    std::optional<CouplingSpec> coupling;  // adds -J eps sigma^z on linked sites
    Eigen::MatrixXd H;                     // real symmetric, 2^N x 2^N
    int N = 0;
};

// Spin Hamiltonian of Eq-type
//   H = -J/2 sum_bonds [(1+gamma) sx sx + (1-gamma) sy sy + delta sz sz]
//       - J lambda sum_j sz_j  - J eps sum_linked sz_j,
// bonds (j,j+1) for j=1..N-1 plus (N,1) when periodic.
DenseHamiltonian dense_hamiltonian(const ChainSpec& chain,
                                   const std::optional<CouplingSpec>& perturbation = std::nullopt);

// Matrix-free H|v>; same operator as dense_hamiltonian without the 4^N storage.
void apply_hamiltonian(const ChainSpec& chain,
                       const std::optional<CouplingSpec>& perturbation,
                       const Eigen::VectorXcd& in, Eigen::VectorXcd& out);

DenseState ground_state(const DenseHamiltonian& H, SectorRule rule = SectorRule::Lowest);

DenseState evolve_exact(const DenseState& state, const DenseHamiltonian& H, double t);

// L(t) = |<G| exp(-i H_e t) |G>|^2 for any (gamma, delta, lambda).
EchoSeries echo_ed(const ChainSpec& chain, const CouplingSpec& coupling,
                   const std::vector<double>& times, SectorRule rule = SectorRule::Lowest);

// Second-order Suzuki-Trotter step (F = on-site + even bonds, G = odd bonds):
//   exp(-i H t) ~ [exp(-i F dt/2) exp(-i G dt) exp(-i F dt/2)]^steps.
// Bonds are labeled by their left site; even labels go to F.
DenseState evolve_trotter(const DenseState& state, const ChainSpec& chain,
                          const std::optional<CouplingSpec>& coupling, double t, int steps);

// Trotterized echo on a caller grid; dt_target sets the slicing (J dt ~ dt_target).
EchoSeries echo_trotter(const ChainSpec& chain, const CouplingSpec& coupling,
                        const std::vector<double>& times, double dt_target = 1e-3,
                        SectorRule rule = SectorRule::Lowest);

// Two-site reduced density matrix in the basis {uu, ud, du, dd} of (i, j).
Eigen::Matrix4cd reduced_density_matrix(const DenseState& state, int site_i, int site_j);

// Diagonal of the total-sigma^z and fermion-parity operators (test helpers).
Eigen::VectorXd total_sz_diagonal(int N);
Eigen::VectorXd fermion_parity_diagonal(int N);

}  // namespace spinbath
