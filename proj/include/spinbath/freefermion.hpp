#pragma once

#include <Eigen/Dense>

#include "spinbath/model.hpp"

namespace spinbath {

// Normal-mode basis of a quadratic form: eta_k = sum_i (g_{k,i} c_i + h_{k,i} c_i^+),
// with g = (phi + psi)/2, h = (phi - psi)/2 and energies E_k >= 0 ascending.
//
// Canonical anticommutation imposes g g^T + h h^T = 1 and g h^T + h g^T = 0
// (the second also makes [[g,h],[h,g]] orthogonal).
struct BogoliubovBasis {
    Eigen::MatrixXd g;
    Eigen::MatrixXd h;
    Eigen::VectorXd energies;

    int size() const { return static_cast<int>(energies.size()); }
};

// Ground-state two-point correlators r_ij = <Psi_i^+ Psi_j>,
// Psi = (c_1..c_N, c_1^+..c_N^+), in block form
//   r = [ h^T h   h^T g ]
//       [ g^T h   g^T g ].
// Real symmetric here (g, h real); a projector for the pure vacuum.
struct CorrelationMatrix {
    Eigen::MatrixXd r;
};

// Single-particle (Nambu) matrix C = sigma^z x A + i sigma^y x B together with
// the diagonalizing pair: C = U^T diag(D) U, U = [[g,h],[h,g]], D = (+E, -E).
struct NambuMatrix {
    Eigen::MatrixXd C;
    Eigen::MatrixXd U;
    Eigen::VectorXd D;
};

// Solves phi_k (A - B) = E_k psi_k, psi_k (A + B) = E_k phi_k via the SVD
// A - B = Phi^T diag(E) Psi. Zero modes inherit the SVD pairing; the sign of
// each (psi_k, phi_k) pair is fixed by making the first nonzero entry of
// psi_k positive.
BogoliubovBasis diagonalize(const QuadraticForm& form);

// Correlation matrix of the vacuum of `basis_g` (the unperturbed ground state).
CorrelationMatrix correlation_matrix(const BogoliubovBasis& basis_g);

NambuMatrix nambu(const QuadraticForm& form);

// exp(-i C t) evaluated as U^T diag(exp(-i D t)) U.
Eigen::MatrixXcd nambu_exponential(const NambuMatrix& nm, double t);

}  // namespace spinbath
