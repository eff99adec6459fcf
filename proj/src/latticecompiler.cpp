#include "spinbath/latticecompiler.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace spinbath {

using Cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

std::string to_string(GateKind kind) {
    switch (kind) {
        case GateKind::Uz: return "Uz";
        case GateKind::Uxx: return "Uxx";
        case GateKind::Uyy: return "Uyy";
        case GateKind::Uzz: return "Uzz";
        case GateKind::GlobalUz: return "GlobalUz";
        case GateKind::GlobalUxx: return "GlobalUxx";
        case GateKind::GlobalUyy: return "GlobalUyy";
        case GateKind::GlobalUzz: return "GlobalUzz";
        case GateKind::PauliX: return "PauliX";
        case GateKind::PauliZ: return "PauliZ";
        case GateKind::Vx: return "Vx";
        case GateKind::Vy: return "Vy";
        case GateKind::Laser: return "Laser";
        case GateKind::Displacement: return "Displacement";
    }
    return "?";
}

namespace {

Mat2 laser_matrix(double area, double phi) {
    Mat2 m;
    const double c = std::cos(area), s = std::sin(area);
    m << c, Cplx(0, s) * std::exp(Cplx(0, -phi)),
         Cplx(0, s) * std::exp(Cplx(0, phi)), c;
    return m;
}

Mat2 uz_matrix(double theta) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = std::exp(Cplx(0, -theta));  // |0> = spin up, sz = +1
    m(1, 1) = std::exp(Cplx(0, +theta));
    return m;
}

Mat2 v_matrix(GateKind kind, bool dagger) {
    const double s = dagger ? -1.0 : 1.0;
    Mat2 sig;
    if (kind == GateKind::Vx) sig << 0, 1, 1, 0;
    else sig << 0, Cplx(0, -1), Cplx(0, 1), 0;
    return (Mat2::Identity() + Cplx(0, s) * sig) / std::sqrt(2.0);
}

Mat4 uaa_matrix(GateKind kind, double theta) {
    // exp(+i theta s^a s^a) = cos(theta) + i sin(theta) (s^a x s^a)
    Mat4 pp = Mat4::Zero();
    switch (kind) {
        case GateKind::Uxx:
            pp(0, 3) = pp(1, 2) = pp(2, 1) = pp(3, 0) = 1;
            break;
        case GateKind::Uyy:
            pp(0, 3) = pp(3, 0) = -1;
            pp(1, 2) = pp(2, 1) = 1;
            break;
        case GateKind::Uzz:
            pp(0, 0) = pp(3, 3) = 1;
            pp(1, 1) = pp(2, 2) = -1;
            break;
        default: throw Error("uaa_matrix: not a bond gate");
    }
    return std::cos(theta) * Mat4::Identity() + Cplx(0, std::sin(theta)) * pp;
}

// applies a 1-site gate to U in place (gate * U)
void apply_single(Eigen::MatrixXcd& U, int site, const Mat2& m, int n_atoms) {
    const long dim = 1L << n_atoms;
    const long bit = 1L << site;
    for (long r = 0; r < dim; ++r) {
        if (r & bit) continue;
        const long r1 = r | bit;
        for (long c = 0; c < dim; ++c) {
            const Cplx a = U(r, c), b = U(r1, c);
            U(r, c) = m(0, 0) * a + m(0, 1) * b;
            U(r1, c) = m(1, 0) * a + m(1, 1) * b;
        }
    }
}

void apply_bond(Eigen::MatrixXcd& U, int left, const Mat4& m, int n_atoms) {
    const long dim = 1L << n_atoms;
    const long bi = 1L << left, bj = 1L << (left + 1);
    for (long r = 0; r < dim; ++r) {
        if ((r & bi) || (r & bj)) continue;
        const long rows[4] = {r, r | bj, r | bi, r | bi | bj};  // index a = 2 bit_i + bit_j
        for (long c = 0; c < dim; ++c) {
            Cplx v[4];
            for (int a = 0; a < 4; ++a) v[a] = U(rows[a], c);
            for (int a = 0; a < 4; ++a) {
                Cplx acc = 0;
                for (int b = 0; b < 4; ++b) acc += m(a, b) * v[b];
                U(rows[a], c) = acc;
            }
        }
    }
}

void apply_row_phases(Eigen::MatrixXcd& U, const Eigen::VectorXcd& phases) {
    for (Eigen::Index r = 0; r < U.rows(); ++r) U.row(r) *= phases[r];
}

}  // namespace

GateSequence compile(const ChainSpec& chain, const CouplingSpec& coupling, double t,
                     int n_steps, CompileLevel level) {
    validate_chain(chain);
    validate_coupling(chain, coupling);
    if (chain.boundary != Boundary::Open)
        throw UnsupportedLayoutError("compile: periodic chains are not supported");
    if (coupling.m != 1 || coupling.sites.front() != 1)
        throw UnsupportedLayoutError("compile: layout requires m = 1 with j1 = 1");
    if (n_steps < 1) throw Error("compile: n_steps must be >= 1");

    const int N = chain.N;
    const double tau = t / n_steps;
    const double J = chain.J;
    const double eps = coupling.epsilon;
    const double omega = coupling.omega_e;

    const double th_field = J * chain.lambda * tau / 2.0;
    const double th_qubit = omega * tau;
    const double th_int = -eps * tau;
    const double th_yy = J * (chain.gamma - 1.0) * tau / 4.0;
    const double th_xx = -J * (chain.gamma + 1.0) * tau / 4.0;
    const double th_zz = (eps - J * chain.delta / 2.0) * tau / 2.0;

    // one step at the Step level, application order
    std::vector<Gate> step;
    auto push = [&step](GateKind kind, int site, double angle) {
        step.push_back({kind, site, angle, 0.0, false});
    };
    if (th_field != 0.0) push(GateKind::GlobalUz, -1, th_field);
    if (th_qubit != 0.0) push(GateKind::Uz, 0, th_qubit);
    if (th_int != 0.0) push(GateKind::GlobalUzz, -1, th_int);
    if (th_yy != 0.0)
        for (int rep = 0; rep < 2; ++rep) {
            push(GateKind::GlobalUyy, -1, th_yy);
            push(GateKind::PauliZ, 0, 0.0);
        }
    if (th_xx != 0.0)
        for (int rep = 0; rep < 2; ++rep) {
            push(GateKind::GlobalUxx, -1, th_xx);
            push(GateKind::PauliZ, 0, 0.0);
        }
    if (th_zz != 0.0)
        for (int rep = 0; rep < 2; ++rep) {
            push(GateKind::GlobalUzz, -1, th_zz);
            push(GateKind::PauliX, 0, 0.0);
        }

    // expansion helpers
    std::vector<Gate> expanded;
    auto emit = [&expanded](Gate g) { expanded.push_back(g); };
    auto emit_uz_pulses = [&emit](int site, double theta) {
        emit({GateKind::Laser, site, M_PI / 2.0, 0.0, false});
        emit({GateKind::Laser, site, M_PI / 2.0, M_PI + theta, false});
    };
    auto emit_global_uzz_pulses = [&emit](double theta) {
        for (int rep = 0; rep < 2; ++rep) {
            emit({GateKind::Laser, -1, M_PI / 2.0, 0.0, false});
            emit({GateKind::Displacement, -1, 2.0 * theta, 0.0, false});
        }
    };

    if (level != CompileLevel::Step) {
        for (const Gate& g : step) {
            switch (g.kind) {
                case GateKind::GlobalUz:
                    if (level == CompileLevel::Gate) {
                        for (int j = 0; j <= N; ++j) emit({GateKind::Uz, j, g.angle, 0.0, false});
                    } else {
                        emit({GateKind::Laser, -1, M_PI / 2.0, 0.0, false});
                        emit({GateKind::Laser, -1, M_PI / 2.0, M_PI + g.angle, false});
                    }
                    break;
                case GateKind::Uz:
                    if (level == CompileLevel::Gate) emit(g);
                    else emit_uz_pulses(g.site, g.angle);
                    break;
                case GateKind::GlobalUzz:
                    if (level == CompileLevel::Gate) {
                        for (int j = 0; j < N; ++j) emit({GateKind::Uzz, j, g.angle, 0.0, false});
                    } else {
                        emit_global_uzz_pulses(g.angle);
                    }
                    break;
                case GateKind::GlobalUxx:
                case GateKind::GlobalUyy: {
                    // U^aa = W U^zz W^+ with W sz W^+ = +-s^a; application order W^+, zz, W
                    const bool is_xx = g.kind == GateKind::GlobalUxx;
                    const GateKind v = is_xx ? GateKind::Vy : GateKind::Vx;
                    if (level == CompileLevel::Gate) {
                        for (int j = 0; j < N; ++j) {
                            emit({v, j, 0.0, 0.0, true});
                            emit({v, j + 1, 0.0, 0.0, true});
                            emit({GateKind::Uzz, j, g.angle, 0.0, false});
                            emit({v, j + 1, 0.0, 0.0, false});
                            emit({v, j, 0.0, 0.0, false});
                        }
                    } else {
                        const double phi_dag = is_xx ? 3.0 * M_PI / 2.0 : M_PI;
                        const double phi = is_xx ? M_PI / 2.0 : 0.0;
                        emit({GateKind::Laser, -1, M_PI / 4.0, phi_dag, false});
                        emit_global_uzz_pulses(g.angle);
                        emit({GateKind::Laser, -1, M_PI / 4.0, phi, false});
                    }
                    break;
                }
                case GateKind::PauliX:
                    if (level == CompileLevel::Gate) emit(g);
                    else emit({GateKind::Laser, g.site, M_PI / 2.0, 0.0, false});
                    break;
                case GateKind::PauliZ:
                    if (level == CompileLevel::Gate) emit(g);
                    else emit_uz_pulses(g.site, -M_PI / 2.0);
                    break;
                default:
                    throw Error("compile: unexpected gate in step block");
            }
        }
        step = std::move(expanded);
    }

    GateSequence seq;
    seq.n_steps = n_steps;
    seq.tau = tau;
    seq.gates_per_step = static_cast<int>(step.size());
    seq.level = level;
    seq.chain = chain;
    seq.coupling = coupling;
    seq.t = t;
    seq.gates.reserve(step.size() * n_steps);
    for (int s = 0; s < n_steps; ++s)
        seq.gates.insert(seq.gates.end(), step.begin(), step.end());
    return seq;
}

Eigen::MatrixXcd contract(const GateSequence& sequence) {
    const int n_atoms = sequence.chain.N + 1;
    if (n_atoms > 11)
        throw SizeLimitError("contract: register capped at 10 bath sites + qubit");
    const long dim = 1L << n_atoms;
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(dim, dim);

    // cache diagonal phase vectors for the diagonal globals
    auto displacement_phases = [&](double phi) {
        Eigen::VectorXcd d(dim);
        for (long s = 0; s < dim; ++s) {
            int n01 = 0;  // pairs (j, j+1) with atom j in |0>, atom j+1 in |1>
            for (int j = 0; j + 1 < n_atoms; ++j)
                if (!((s >> j) & 1) && ((s >> (j + 1)) & 1)) ++n01;
            d[s] = std::exp(Cplx(0, -phi * n01));
        }
        return d;
    };

    for (const Gate& g : sequence.gates) {
        switch (g.kind) {
            case GateKind::Uz:
                apply_single(U, g.site, uz_matrix(g.angle), n_atoms);
                break;
            case GateKind::PauliX: {
                Mat2 m;
                m << 0, 1, 1, 0;
                apply_single(U, g.site, m, n_atoms);
                break;
            }
            case GateKind::PauliZ: {
                Mat2 m = Mat2::Zero();
                m(0, 0) = 1;
                m(1, 1) = -1;
                apply_single(U, g.site, m, n_atoms);
                break;
            }
            case GateKind::Vx:
            case GateKind::Vy:
                apply_single(U, g.site, v_matrix(g.kind, g.dagger), n_atoms);
                break;
            case GateKind::Laser: {
                const Mat2 m = laser_matrix(g.angle, g.phase);
                if (g.site < 0)
                    for (int j = 0; j < n_atoms; ++j) apply_single(U, j, m, n_atoms);
                else
                    apply_single(U, g.site, m, n_atoms);
                break;
            }
            case GateKind::Uxx:
            case GateKind::Uyy:
            case GateKind::Uzz:
                apply_bond(U, g.site, uaa_matrix(g.kind, g.angle), n_atoms);
                break;
            case GateKind::GlobalUz:
                for (int j = 0; j < n_atoms; ++j) apply_single(U, j, uz_matrix(g.angle), n_atoms);
                break;
            case GateKind::GlobalUxx:
            case GateKind::GlobalUyy:
            case GateKind::GlobalUzz: {
                const GateKind local = g.kind == GateKind::GlobalUxx   ? GateKind::Uxx
                                       : g.kind == GateKind::GlobalUyy ? GateKind::Uyy
                                                                       : GateKind::Uzz;
                const Mat4 m = uaa_matrix(local, g.angle);
                for (int j = 0; j + 1 < n_atoms; ++j) apply_bond(U, j, m, n_atoms);
                break;
            }
            case GateKind::Displacement:
                apply_row_phases(U, displacement_phases(g.angle));
                break;
        }
    }
    return U;
}

Eigen::MatrixXd step_target_hamiltonian(const ChainSpec& chain, const CouplingSpec& coupling) {
    const int n_atoms = chain.N + 1;
    const long dim = 1L << n_atoms;
    const double J = chain.J;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    auto szv = [](long s, int j) { return ((s >> j) & 1) ? -1.0 : 1.0; };

    for (int j = 1; j + 1 < n_atoms; ++j) {  // bath bonds
        const double cxx = J * (1.0 + chain.gamma) / 2.0;
        const double cyy = J * (1.0 - chain.gamma) / 2.0;
        const double czz = J * chain.delta / 2.0;
        for (long s = 0; s < dim; ++s) {
            H(s, s) += czz * szv(s, j) * szv(s, j + 1);
            const long flipped = s ^ (1L << j) ^ (1L << (j + 1));
            const bool equal = ((s >> j) & 1) == ((s >> (j + 1)) & 1);
            H(flipped, s) += cxx + cyy * (equal ? -1.0 : 1.0);
        }
    }
    for (long s = 0; s < dim; ++s) {
        double v = coupling.epsilon * szv(s, 0) * szv(s, 1) + coupling.omega_e * szv(s, 0);
        for (int j = 0; j < n_atoms; ++j) v += J * chain.lambda / 2.0 * szv(s, j);
        H(s, s) += v;
    }
    return H;
}

double phase_aligned_distance(const Eigen::MatrixXcd& U, const Eigen::MatrixXcd& V) {
    const Cplx tr = (V.adjoint() * U).trace();
    const Cplx phase = (std::abs(tr) > 0) ? tr / std::abs(tr) : Cplx(1, 0);
    const Eigen::MatrixXcd diff = U - phase * V;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(diff);
    return svd.singularValues()[0];
}

VerifyReport verify(const ChainSpec& chain, const CouplingSpec& coupling, double t,
                    const std::vector<int>& n_list) {
    const Eigen::MatrixXd H = step_target_hamiltonian(chain, coupling);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    Eigen::VectorXcd ph(es.eigenvalues().size());
    for (Eigen::Index k = 0; k < ph.size(); ++k)
        ph[k] = std::exp(Cplx(0, -es.eigenvalues()[k] * t));
    const Eigen::MatrixXcd target =
        es.eigenvectors().cast<Cplx>() * ph.asDiagonal() * es.eigenvectors().transpose().cast<Cplx>();

    VerifyReport report;
    for (int n : n_list) {
        const Eigen::MatrixXcd U = contract(compile(chain, coupling, t, n, CompileLevel::Step));
        report.n_values.push_back(n);
        report.distances.push_back(phase_aligned_distance(U, target));
    }
    for (std::size_t i = 1; i < report.distances.size(); ++i)
        if (report.distances[i] >= report.distances[i - 1]) report.monotone = false;

    // slope of ln(distance) vs ln(n)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(report.n_values.size());
    for (std::size_t i = 0; i < report.n_values.size(); ++i) {
        const double x = std::log(static_cast<double>(report.n_values[i]));
        const double y = std::log(std::max(report.distances[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    report.fitted_order = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    return report;
}

void write_schedule_text(const GateSequence& seq, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "# spinbath schedule v1 | steps=" << seq.n_steps << " tau=" << seq.tau
        << " level=" << static_cast<int>(seq.level) << "\n";
    char buf[160];
    for (std::size_t i = 0; i < seq.gates.size(); ++i) {
        const Gate& g = seq.gates[i];
        const int step = static_cast<int>(i) / seq.gates_per_step;
        std::string sites = g.site < 0 ? "all" : std::to_string(g.site);
        if (g.kind == GateKind::Uxx || g.kind == GateKind::Uyy || g.kind == GateKind::Uzz)
            sites += "," + std::to_string(g.site + 1);
        std::string name = to_string(g.kind);
        if ((g.kind == GateKind::Vx || g.kind == GateKind::Vy) && g.dagger) name += "Dag";
        if (g.kind == GateKind::Laser) {
            std::snprintf(buf, sizeof buf, "STEP %d | GATE %s | SITES %s | ANGLE %.15g | PHASE %.15g\n",
                          step, name.c_str(), sites.c_str(), g.angle, g.phase);
        } else {
            std::snprintf(buf, sizeof buf, "STEP %d | GATE %s | SITES %s | ANGLE %.15g\n", step,
                          name.c_str(), sites.c_str(), g.angle);
        }
        out << buf;
    }
}

void write_schedule_json(const GateSequence& seq, const std::string& path) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["n_steps"] = seq.n_steps;
    j["tau"] = seq.tau;
    j["level"] = static_cast<int>(seq.level);
    j["gates_per_step"] = seq.gates_per_step;
    nlohmann::json gates = nlohmann::json::array();
    for (const Gate& g : seq.gates) {
        nlohmann::json jg;
        std::string name = to_string(g.kind);
        if ((g.kind == GateKind::Vx || g.kind == GateKind::Vy) && g.dagger) name += "Dag";
        jg["gate"] = name;
        jg["site"] = g.site;
        jg["angle"] = g.angle;
        if (g.kind == GateKind::Laser) jg["phase"] = g.phase;
        gates.push_back(jg);
    }
    j["gates"] = gates;
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

}  // namespace spinbath
