#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spinbath/ed_oracle.hpp"
#include "spinbath/model.hpp"

namespace spinbath {

// Wootters concurrence of a two-qubit density matrix in the canonical basis
// {uu, ud, du, dd}: C = max(l1 - l2 - l3 - l4, 0) with l_i the descending
// square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
double concurrence(const Eigen::Matrix4cd& rho);

struct ConcurrenceProfile {
    std::vector<std::pair<int, int>> pairs;
    std::vector<double> values;
    ChainSpec chain;
};

// Nearest-neighbor concurrence C(1) of the ED ground state for every bond.
ConcurrenceProfile nn_concurrence_scan(const ChainSpec& chain,
                                       SectorRule rule = SectorRule::Lowest);

struct AlphaConcurrenceRow {
    double param = 0.0;  // the swept lambda or delta
    double C1 = 0.0;
    double alpha = 0.0;
};

// Joined (param, C(1), alpha) table over a grid of chains. C(1) comes from the
// ED ground state (bond (1,2) for periodic chains, the middle bond for open).
// alpha comes from the perturbative formula when delta = 0 and from a fit of
// the ED echo otherwise; `param_is_lambda` selects which field is reported.
std::vector<AlphaConcurrenceRow> alpha_vs_concurrence(const std::vector<ChainSpec>& grid,
                                                      const CouplingSpec& coupling,
                                                      bool param_is_lambda = true,
                                                      SectorRule rule = SectorRule::Lowest);

void write_alpha_concurrence_csv(const std::vector<AlphaConcurrenceRow>& rows,
                                 const std::string& path);

}  // namespace spinbath
