#include "spinbath/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace spinbath {

void validate_chain(const ChainSpec& chain) {
    if (chain.N < 2) throw Error("ChainSpec: N must be >= 2, got " + std::to_string(chain.N));
    if (!(chain.J > 0.0)) throw Error("ChainSpec: J must be > 0");
    if (chain.gamma < 0.0 || chain.gamma > 1.0)
        throw Error("ChainSpec: gamma must lie in [0,1]");
}

std::vector<int> link_sites(int N, int m, Geometry geometry, Boundary boundary) {
    if (m < 1 || m > N)
        throw InvalidCouplingError("link number m=" + std::to_string(m) +
                                   " outside [1, N=" + std::to_string(N) + "]");
    std::vector<int> sites;
    sites.reserve(m);
    switch (geometry) {
        case Geometry::StarA: {
            std::set<int> taken;
            for (int k = 1; k <= m; ++k) {
                // round half up, shift forward past collisions (wrapping)
                int j = 1 + static_cast<int>(std::floor((k - 1) * static_cast<double>(N) / m + 0.5));
                while (taken.count(j)) j = (j % N) + 1;
                taken.insert(j);
            }
            sites.assign(taken.begin(), taken.end());
            break;
        }
        case Geometry::ContiguousB: {
            if (boundary == Boundary::Open) {
                for (int j = 1; j <= m; ++j) sites.push_back(j);
            } else {
                const int center = (N + 1) / 2;
                std::set<int> taken;
                for (int i = 0; i < m; ++i) {
                    int j = center - m / 2 + i;
                    j = ((j - 1) % N + N) % N + 1;
                    taken.insert(j);
                }
                sites.assign(taken.begin(), taken.end());
            }
            break;
        }
        case Geometry::Explicit:
            throw InvalidCouplingError("link_sites: Explicit geometry carries its own sites");
    }
    return sites;
}

CouplingSpec make_coupling(const ChainSpec& chain, double epsilon, int m,
                           Geometry geometry, std::vector<int> explicit_sites,
                           double omega_e) {
    CouplingSpec c;
    c.epsilon = epsilon;
    c.m = m;
    c.geometry = geometry;
    c.omega_e = omega_e;
    if (geometry == Geometry::Explicit) {
        c.sites = std::move(explicit_sites);
        std::sort(c.sites.begin(), c.sites.end());
    } else {
        c.sites = link_sites(chain.N, m, geometry, chain.boundary);
    }
    validate_coupling(chain, c);
    return c;
}

void validate_coupling(const ChainSpec& chain, const CouplingSpec& coupling) {
    if (coupling.m < 1 || coupling.m > chain.N)
        throw InvalidCouplingError("coupling: m=" + std::to_string(coupling.m) +
                                   " outside [1, N=" + std::to_string(chain.N) + "]");
    if (static_cast<int>(coupling.sites.size()) != coupling.m)
        throw InvalidCouplingError("coupling: |sites| != m");
    int prev = 0;
    for (int s : coupling.sites) {
        if (s < 1 || s > chain.N)
            throw InvalidCouplingError("coupling: site " + std::to_string(s) + " out of range");
        if (s <= prev) throw InvalidCouplingError("coupling: sites must be strictly increasing");
        prev = s;
    }
}

QuadraticForm build_quadratic_form(const ChainSpec& chain,
                                   const std::optional<CouplingSpec>& perturbation,
                                   PeriodicConvention convention) {
    validate_chain(chain);
    if (chain.delta != 0.0)
        throw UnsupportedModelError(
            "free-fermion form requires delta = 0; use the dense ed_oracle for delta != 0");

    const int N = chain.N;
    const double J = chain.J;
    Eigen::VectorXd eps = Eigen::VectorXd::Zero(N);
    if (perturbation) {
        validate_coupling(chain, *perturbation);
        for (int s : perturbation->sites) eps[s - 1] = perturbation->epsilon;
    }

    QuadraticForm form;
    form.A = Eigen::MatrixXd::Zero(N, N);
    form.B = Eigen::MatrixXd::Zero(N, N);
    for (int j = 0; j < N; ++j) form.A(j, j) = -2.0 * J * (chain.lambda + eps[j]);
    for (int j = 0; j + 1 < N; ++j) {
        form.A(j, j + 1) = form.A(j + 1, j) = -J;
        form.B(j, j + 1) = -chain.gamma * J;
        form.B(j + 1, j) = +chain.gamma * J;
    }
    if (chain.boundary == Boundary::Periodic) {
        const double sign = (convention == PeriodicConvention::ParityEven) ? -1.0 : 1.0;
        form.A(N - 1, 0) += -J * sign;
        form.A(0, N - 1) += -J * sign;
        form.B(N - 1, 0) += -chain.gamma * J * sign;
        form.B(0, N - 1) += +chain.gamma * J * sign;
    }
    return form;
}

}  // namespace spinbath
