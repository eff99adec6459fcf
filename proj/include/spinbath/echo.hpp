#pragma once

#include <vector>

#include "spinbath/echo_series.hpp"
#include "spinbath/freefermion.hpp"
#include "spinbath/model.hpp"

namespace spinbath {

// Exponent p in L = |det(1 - r + r exp(-iCt))|^p over the doubled (2N)
// space. Calibrated against the dense oracle: the 2N determinant already
// equals |D|^2, so p = 1. The calibration test stays in the suite.
inline constexpr double kDeterminantExponent = 1.0;

// Reusable determinant-formula engine: r rotated into the H_e eigenbasis once,
// then each time point costs one LU of a 2N x 2N matrix.
class DeterminantEcho {
  public:
    DeterminantEcho(const ChainSpec& chain, const CouplingSpec& coupling,
                    PeriodicConvention convention = PeriodicConvention::CCyclic);

    double value(double t) const;  // L(t)

    const BogoliubovBasis& unperturbed_basis() const { return basis_g_; }
    const BogoliubovBasis& perturbed_basis() const { return basis_e_; }

  private:
    BogoliubovBasis basis_g_;
    BogoliubovBasis basis_e_;
    Eigen::MatrixXd r_rotated_;  // U_e r U_e^T
    Eigen::VectorXd De_;         // (+E_e, -E_e)
};

// L(t) by Eq.-det over caller times; data-parallel over the grid.
EchoSeries echo_determinant(const ChainSpec& chain, const CouplingSpec& coupling,
                            const std::vector<double>& times,
                            PeriodicConvention convention = PeriodicConvention::CCyclic,
                            int threads = 0);

// Momentum-space angles and energies of the uniformly coupled chain,
// theta_k(eps) = atan2(-sin(2 pi k/N), cos(2 pi k/N) - (lambda+eps)),
// E_k(eps) = 2 J sqrt[(cos(2 pi k/N) - (lambda+eps))^2 + gamma^2 sin^2(2 pi k/N)],
// over k = 1..N/2. Periodic boundary and even N required.
struct CentralSpinModes {
    Eigen::VectorXd theta0;
    Eigen::VectorXd theta_eps;
    Eigen::VectorXd alpha;  // (theta0 - theta_eps)/2
    Eigen::VectorXd energies;
};

CentralSpinModes central_spin_modes(const ChainSpec& chain, double epsilon);

// L(t) = prod_k [1 - sin^2(2 alpha_k) sin^2(E_k t)] (m = N closed form).
EchoSeries echo_central_spin(const ChainSpec& chain, double epsilon,
                             const std::vector<double>& times);

}  // namespace spinbath
