#include "spinbath/freefermion.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace spinbath {

namespace {

void check_form(const QuadraticForm& form) {
    const auto& A = form.A;
    const auto& B = form.B;
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw InvalidFormError("quadratic form: A and B must be square with equal size");
    const double scale = std::max(1.0, std::max(A.cwiseAbs().maxCoeff(), B.cwiseAbs().maxCoeff()));
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw InvalidFormError("quadratic form: A is not symmetric");
    if ((B + B.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw InvalidFormError("quadratic form: B is not antisymmetric");
}

}  // namespace

BogoliubovBasis diagonalize(const QuadraticForm& form) {
    check_form(form);
    const int N = static_cast<int>(form.A.rows());
    const Eigen::MatrixXd X = form.A - form.B;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();  // descending

    // ascending energies
    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin(), order.end());

    BogoliubovBasis basis;
    basis.energies.resize(N);
    Eigen::MatrixXd Phi(N, N), Psi(N, N);  // rows phi_k, psi_k
    for (int k = 0; k < N; ++k) {
        const int c = order[k];
        basis.energies[k] = sv[c];
        Phi.row(k) = svd.matrixU().col(c).transpose();
        Psi.row(k) = svd.matrixV().col(c).transpose();
    }
    // deterministic sign: first nonzero component of psi_k positive
    for (int k = 0; k < N; ++k) {
        for (int i = 0; i < N; ++i) {
            if (std::abs(Psi(k, i)) > 1e-12) {
                if (Psi(k, i) < 0) {
                    Psi.row(k) = -Psi.row(k);
                    Phi.row(k) = -Phi.row(k);
                }
                break;
            }
        }
    }
    basis.g = 0.5 * (Phi + Psi);
    basis.h = 0.5 * (Phi - Psi);
    return basis;
}

CorrelationMatrix correlation_matrix(const BogoliubovBasis& basis_g) {
    const int N = basis_g.size();
    const auto& g = basis_g.g;
    const auto& h = basis_g.h;
    CorrelationMatrix cm;
    cm.r.resize(2 * N, 2 * N);
    cm.r.topLeftCorner(N, N) = h.transpose() * h;
    cm.r.topRightCorner(N, N) = h.transpose() * g;
    cm.r.bottomLeftCorner(N, N) = g.transpose() * h;
    cm.r.bottomRightCorner(N, N) = g.transpose() * g;
    return cm;
}

NambuMatrix nambu(const QuadraticForm& form) {
    check_form(form);
    const int N = static_cast<int>(form.A.rows());
    const BogoliubovBasis basis = diagonalize(form);

    NambuMatrix nm;
    nm.C.resize(2 * N, 2 * N);
    nm.C.topLeftCorner(N, N) = form.A;
    nm.C.topRightCorner(N, N) = form.B;
    nm.C.bottomLeftCorner(N, N) = -form.B;
    nm.C.bottomRightCorner(N, N) = -form.A;

    nm.U.resize(2 * N, 2 * N);
    nm.U.topLeftCorner(N, N) = basis.g;
    nm.U.topRightCorner(N, N) = basis.h;
    nm.U.bottomLeftCorner(N, N) = basis.h;
    nm.U.bottomRightCorner(N, N) = basis.g;

    nm.D.resize(2 * N);
    nm.D.head(N) = basis.energies;
    nm.D.tail(N) = -basis.energies;
    return nm;
}

Eigen::MatrixXcd nambu_exponential(const NambuMatrix& nm, double t) {
    const int n = static_cast<int>(nm.D.size());
    Eigen::VectorXcd phase(n);
    for (int k = 0; k < n; ++k)
        phase[k] = std::exp(std::complex<double>(0.0, -nm.D[k] * t));
    // U^T diag(phase) U
    return nm.U.transpose() * phase.asDiagonal() * nm.U;
}

}  // namespace spinbath
