#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "spinbath/errors.hpp"

namespace spinbath {

enum class Boundary { Open, Periodic };
enum class Geometry { StarA, ContiguousB, Explicit };

// How the corner couplings of a periodic chain are treated after the
// Jordan-Wigner map. CCyclic keeps plain corner entries (translationally
// invariant fermions, O(1/N) off the true spin chain). ParityEven flips the
// corner sign, which is exact on the even-fermion-parity sector that hosts
// the ground state.
enum class PeriodicConvention { CCyclic, ParityEven };

// Bath chain parameters. Energies are measured in units of J, times in 1/J.
struct ChainSpec {
    int N = 2;                          // number of bath spins
    double J = 1.0;                     // nearest-neighbor exchange
    double gamma = 1.0;                 // xy anisotropy in [0,1]
    double delta = 0.0;                 // z anisotropy
    double lambda = 0.0;                // transverse field
    Boundary boundary = Boundary::Open;
};

void validate_chain(const ChainSpec& chain);

// Qubit-bath link description. `sites` are 1-based, strictly increasing.
struct CouplingSpec {
    double epsilon = 0.0;
    int m = 1;
    Geometry geometry = Geometry::Explicit;
    std::vector<int> sites;
    double omega_e = 0.0;               // qubit splitting, gate compiler only
};

// Equally spaced (StarA) or contiguous (ContiguousB) site sets.
std::vector<int> link_sites(int N, int m, Geometry geometry,
                            Boundary boundary = Boundary::Open);

// Builds a CouplingSpec with `sites` resolved for the given chain.
CouplingSpec make_coupling(const ChainSpec& chain, double epsilon, int m,
                           Geometry geometry,
                           std::vector<int> explicit_sites = {},
                           double omega_e = 0.0);

void validate_coupling(const ChainSpec& chain, const CouplingSpec& coupling);

// Free-fermion quadratic form: H = sum c^+ A c + 1/2 (c^+ B c^+ + h.c.).
// A symmetric, B antisymmetric, both real N x N.
struct QuadraticForm {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
};

// A_{jk} = -J (delta_{k,j+1} + delta_{j,k+1}) - 2 J (lambda + eps_j) delta_{jk},
// B_{jk} = -gamma J (delta_{k,j+1} - delta_{j,k+1}),
// with eps_j = epsilon on linked sites when a perturbation is given.
// Requires chain.delta == 0.
QuadraticForm build_quadratic_form(
    const ChainSpec& chain,
    const std::optional<CouplingSpec>& perturbation = std::nullopt,
    PeriodicConvention convention = PeriodicConvention::CCyclic);

}  // namespace spinbath
