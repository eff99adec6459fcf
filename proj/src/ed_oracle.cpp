#include "spinbath/ed_oracle.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace spinbath {

namespace {

using Cplx = std::complex<double>;

struct Bond {
    int j, k;  // 0-based
};

std::vector<Bond> chain_bonds(const ChainSpec& chain) {
    std::vector<Bond> bonds;
    for (int j = 0; j + 1 < chain.N; ++j) bonds.push_back({j, j + 1});
    if (chain.boundary == Boundary::Periodic) bonds.push_back({chain.N - 1, 0});
    return bonds;
}

// On-site sigma^z coefficients: -J lambda everywhere, -J eps on linked sites.
Eigen::VectorXd field_coefficients(const ChainSpec& chain,
                                   const std::optional<CouplingSpec>& coupling) {
    Eigen::VectorXd f = Eigen::VectorXd::Constant(chain.N, -chain.J * chain.lambda);
    if (coupling) {
        validate_coupling(chain, *coupling);
        for (int s : coupling->sites) f[s - 1] += -chain.J * coupling->epsilon;
    }
    return f;
}

inline double sz_bit(long b, int j) { return ((b >> j) & 1) ? -1.0 : 1.0; }

void check_cap(int N) {
    if (N > kDenseSiteCap)
        throw SizeLimitError("dense engine capped at N = " + std::to_string(kDenseSiteCap) +
                             ", got N = " + std::to_string(N));
}

// Adds the bond term -J/2 [(1+g) sx sx + (1-g) sy sy + d sz sz] to H.
void add_bond(Eigen::MatrixXd& H, const ChainSpec& chain, const Bond& b) {
    const long dim = H.rows();
    const double cxx = -chain.J / 2.0 * (1.0 + chain.gamma);
    const double cyy = -chain.J / 2.0 * (1.0 - chain.gamma);
    const double czz = -chain.J / 2.0 * chain.delta;
    for (long s = 0; s < dim; ++s) {
        H(s, s) += czz * sz_bit(s, b.j) * sz_bit(s, b.k);
        const long flipped = s ^ (1L << b.j) ^ (1L << b.k);
        // sx sx: amplitude 1; sy sy: -(sign) with sign=+1 when bits equal
        const bool equal_bits = ((s >> b.j) & 1) == ((s >> b.k) & 1);
        const double yy_sign = equal_bits ? -1.0 : 1.0;
        H(flipped, s) += cxx + cyy * yy_sign;
    }
}

struct Eigensystem {
    Eigen::VectorXd w;
    Eigen::MatrixXd V;
};

Eigensystem eigensystem(const Eigen::MatrixXd& H) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    if (solver.info() != Eigen::Success)
        throw NumericalFailureError("dense eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

void fix_sign(Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-12) {
            if (v[i] < 0) v = -v;
            return;
        }
    }
}

// Picks from the degenerate lowest eigenspace the combination maximizing the
// diagonal observable `diag` (total Sz, fermion parity, ...).
Eigen::VectorXd select_in_ground_space(const Eigensystem& es, const Eigen::VectorXd& diag) {
    const double tol = 1e-8 * std::max(1.0, std::abs(es.w[0]));
    int k = 1;
    while (k < es.w.size() && es.w[k] - es.w[0] <= tol) ++k;
    if (k == 1) {
        Eigen::VectorXd v = es.V.col(0);
        fix_sign(v);
        return v;
    }
    const Eigen::MatrixXd sub = es.V.leftCols(k);
    const Eigen::MatrixXd proj = sub.transpose() * diag.asDiagonal() * sub;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(proj);
    Eigen::VectorXd v = sub * small.eigenvectors().col(k - 1);  // max eigenvalue
    fix_sign(v);
    return v;
}

Eigen::VectorXd ground_vector(const Eigensystem& es, SectorRule rule, int N) {
    switch (rule) {
        case SectorRule::MaxSz:
            return select_in_ground_space(es, total_sz_diagonal(N));
        case SectorRule::EvenParity:
            return select_in_ground_space(es, fermion_parity_diagonal(N));
        case SectorRule::Lowest: {
            Eigen::VectorXd v = es.V.col(0);
            fix_sign(v);
            return v;
        }
    }
    throw Error("unreachable sector rule");
}

}  // namespace

Eigen::VectorXd total_sz_diagonal(int N) {
    const long dim = 1L << N;
    Eigen::VectorXd d(dim);
    for (long s = 0; s < dim; ++s) {
        double v = 0;
        for (int j = 0; j < N; ++j) v += sz_bit(s, j);
        d[s] = v;
    }
    return d;
}

Eigen::VectorXd fermion_parity_diagonal(int N) {
    // occupied <-> spin up; parity = (-1)^{# up}
    const long dim = 1L << N;
    Eigen::VectorXd d(dim);
    for (long s = 0; s < dim; ++s) {
        const int ups = N - __builtin_popcountl(s);
        d[s] = (ups % 2 == 0) ? 1.0 : -1.0;
    }
    return d;
}

DenseHamiltonian dense_hamiltonian(const ChainSpec& chain,
                                   const std::optional<CouplingSpec>& perturbation) {
    validate_chain(chain);
    check_cap(chain.N);
    const long dim = 1L << chain.N;
    DenseHamiltonian dh;
    dh.chain = chain;
    dh.coupling = perturbation;
    dh.N = chain.N;
    dh.H = Eigen::MatrixXd::Zero(dim, dim);
    for (const Bond& b : chain_bonds(chain)) add_bond(dh.H, chain, b);
    const Eigen::VectorXd f = field_coefficients(chain, perturbation);
    for (long s = 0; s < dim; ++s) {
        double v = 0;
        for (int j = 0; j < chain.N; ++j) v += f[j] * sz_bit(s, j);
        dh.H(s, s) += v;
    }
    return dh;
}

void apply_hamiltonian(const ChainSpec& chain, const std::optional<CouplingSpec>& perturbation,
                       const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    validate_chain(chain);
    const long dim = 1L << chain.N;
    if (in.size() != dim) throw Error("apply_hamiltonian: state size mismatch");
    out.setZero(dim);
    const double cxx = -chain.J / 2.0 * (1.0 + chain.gamma);
    const double cyy = -chain.J / 2.0 * (1.0 - chain.gamma);
    const double czz = -chain.J / 2.0 * chain.delta;
    const Eigen::VectorXd f = field_coefficients(chain, perturbation);
    for (long s = 0; s < dim; ++s) {
        double diag = 0;
        for (int j = 0; j < chain.N; ++j) diag += f[j] * sz_bit(s, j);
        out[s] += diag * in[s];
    }
    for (const Bond& b : chain_bonds(chain)) {
        for (long s = 0; s < dim; ++s) {
            out[s] += czz * sz_bit(s, b.j) * sz_bit(s, b.k) * in[s];
            const long flipped = s ^ (1L << b.j) ^ (1L << b.k);
            const bool equal_bits = ((s >> b.j) & 1) == ((s >> b.k) & 1);
            const double yy_sign = equal_bits ? -1.0 : 1.0;
            out[flipped] += (cxx + cyy * yy_sign) * in[s];
        }
    }
}

DenseState ground_state(const DenseHamiltonian& H, SectorRule rule) {
    const Eigensystem es = eigensystem(H.H);
    DenseState state;
    state.N = H.N;
    state.amplitudes = ground_vector(es, rule, H.N).cast<Cplx>();
    return state;
}

DenseState evolve_exact(const DenseState& state, const DenseHamiltonian& H, double t) {
    const Eigensystem es = eigensystem(H.H);
    Eigen::VectorXcd w = es.V.transpose() * state.amplitudes;
    for (Eigen::Index k = 0; k < w.size(); ++k) w[k] *= std::exp(Cplx(0.0, -es.w[k] * t));
    DenseState out;
    out.N = state.N;
    out.amplitudes = es.V * w;
    return out;
}

EchoSeries echo_ed(const ChainSpec& chain, const CouplingSpec& coupling,
                   const std::vector<double>& times, SectorRule rule) {
    const DenseHamiltonian Hg = dense_hamiltonian(chain);
    const DenseHamiltonian He = dense_hamiltonian(chain, coupling);
    const Eigensystem eg = eigensystem(Hg.H);
    const Eigensystem ee = eigensystem(He.H);
    const Eigen::VectorXd G = ground_vector(eg, rule, chain.N);
    const Eigen::VectorXd w = ee.V.transpose() * G;
    const Eigen::VectorXd probs = w.array().square();

    EchoSeries series;
    series.method = EchoMethod::EDExact;
    series.chain = chain;
    series.coupling = coupling;
    series.times = times;
    series.values.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        Cplx d = 0;
        for (Eigen::Index k = 0; k < probs.size(); ++k)
            d += probs[k] * std::exp(Cplx(0.0, -ee.w[k] * times[i]));
        series.values[i] = std::norm(d);
    }
    return series;
}

namespace {

// F = on-site + even-labeled bonds, G = odd-labeled bonds (1-based left site).
void split_hamiltonians(const ChainSpec& chain, const std::optional<CouplingSpec>& coupling,
                        Eigen::MatrixXd& F, Eigen::MatrixXd& G) {
    const long dim = 1L << chain.N;
    F.setZero(dim, dim);
    G.setZero(dim, dim);
    for (const Bond& b : chain_bonds(chain)) {
        const int label = b.j + 1;
        add_bond(label % 2 == 0 ? F : G, chain, b);
    }
    const Eigen::VectorXd f = field_coefficients(chain, coupling);
    for (long s = 0; s < dim; ++s) {
        double v = 0;
        for (int j = 0; j < chain.N; ++j) v += f[j] * sz_bit(s, j);
        F(s, s) += v;
    }
}

Eigen::MatrixXcd propagator(const Eigen::MatrixXd& H, double t) {
    const Eigensystem es = eigensystem(H);
    Eigen::VectorXcd ph(es.w.size());
    for (Eigen::Index k = 0; k < es.w.size(); ++k) ph[k] = std::exp(Cplx(0.0, -es.w[k] * t));
    return es.V * ph.asDiagonal() * es.V.transpose();
}

}  // namespace

DenseState evolve_trotter(const DenseState& state, const ChainSpec& chain,
                          const std::optional<CouplingSpec>& coupling, double t, int steps) {
    if (steps < 1) throw Error("evolve_trotter: steps must be >= 1");
    check_cap(chain.N);
    const double dt = t / steps;
    Eigen::MatrixXd F, G;
    split_hamiltonians(chain, coupling, F, G);
    const Eigen::MatrixXcd Uf = propagator(F, dt / 2.0);
    const Eigen::MatrixXcd Ug = propagator(G, dt);
    DenseState out;
    out.N = state.N;
    out.amplitudes = state.amplitudes;
    for (int s = 0; s < steps; ++s)
        out.amplitudes = Uf * (Ug * (Uf * out.amplitudes));
    return out;
}

EchoSeries echo_trotter(const ChainSpec& chain, const CouplingSpec& coupling,
                        const std::vector<double>& times, double dt_target, SectorRule rule) {
    const DenseHamiltonian Hg = dense_hamiltonian(chain);
    const DenseState G = ground_state(Hg, rule);

    Eigen::MatrixXd F, Godd;
    split_hamiltonians(chain, coupling, F, Godd);

    EchoSeries series;
    series.method = EchoMethod::EDTrotter;
    series.chain = chain;
    series.coupling = coupling;
    series.times = times;
    series.values.resize(times.size());

    // march through the sorted grid, re-slicing each interval
    Eigen::VectorXcd psi = G.amplitudes;
    double t_now = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double span = times[i] - t_now;
        if (span < 0) throw Error("echo_trotter: times must be non-decreasing");
        if (span > 0) {
            const int steps = std::max(1, static_cast<int>(std::ceil(span * chain.J / dt_target)));
            const double dt = span / steps;
            const Eigen::MatrixXcd Uf = propagator(F, dt / 2.0);
            const Eigen::MatrixXcd Ug = propagator(Godd, dt);
            for (int s = 0; s < steps; ++s) psi = Uf * (Ug * (Uf * psi));
            t_now = times[i];
        }
        series.values[i] = std::norm(G.amplitudes.dot(psi));
    }
    return series;
}

Eigen::Matrix4cd reduced_density_matrix(const DenseState& state, int site_i, int site_j) {
    const int N = state.N;
    if (site_i == site_j) throw InvalidSitesError("reduced_density_matrix: sites must differ");
    if (site_i < 1 || site_i > N || site_j < 1 || site_j > N)
        throw InvalidSitesError("reduced_density_matrix: site out of range");
    const int bi = site_i - 1, bj = site_j - 1;
    const long dim = 1L << N;
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (long s = 0; s < dim; ++s) {
        const int a = 2 * static_cast<int>((s >> bi) & 1) + static_cast<int>((s >> bj) & 1);
        const long rest = s & ~((1L << bi) | (1L << bj));
        for (int b = 0; b < 4; ++b) {
            long s2 = rest;
            if (b & 2) s2 |= (1L << bi);
            if (b & 1) s2 |= (1L << bj);
            rho(a, b) += state.amplitudes[s] * std::conj(state.amplitudes[s2]);
        }
    }
    return rho;
}

}  // namespace spinbath
