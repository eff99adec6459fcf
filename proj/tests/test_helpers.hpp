#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace testutil {

template <typename A, typename B>
double max_abs_diff(const A& a, const B& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

// tiny deterministic generator for property-style checks
struct Lcg {
    std::uint64_t state;
    explicit Lcg(std::uint64_t seed = 0x5deece66dull) : state(seed) {}
    double uniform() {  // [0, 1)
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) / 9007199254740992.0;
    }
    double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }
};

inline Eigen::Matrix2cd random_su2(Lcg& rng) {
    const double a = rng.range(0, 2 * M_PI), b = rng.range(0, M_PI), c = rng.range(0, 2 * M_PI);
    const std::complex<double> i(0, 1);
    Eigen::Matrix2cd u;
    u << std::exp(i * a) * std::cos(b), std::exp(i * c) * std::sin(b),
        -std::exp(-i * c) * std::sin(b), std::exp(-i * a) * std::cos(b);
    return u;
}

}  // namespace testutil
