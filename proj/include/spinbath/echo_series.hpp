#pragma once

#include <string>
#include <vector>

#include "spinbath/model.hpp"

namespace spinbath {

enum class EchoMethod { Determinant, CentralSpin, EDExact, EDTrotter };

std::string to_string(EchoMethod method);

// Loschmidt echo time series. Values lie in [0,1]; L(0) = 1.
struct EchoSeries {
    std::vector<double> times;   // units of 1/J
    std::vector<double> values;
    EchoMethod method = EchoMethod::Determinant;
    ChainSpec chain;
    CouplingSpec coupling;

    std::size_t size() const { return times.size(); }
};

// CSV with header "t,L", one row per point, 15 significant digits.
void write_csv(const EchoSeries& series, const std::string& path);

// Uniform grid of `steps`+1 points on [0, t_max].
std::vector<double> uniform_times(double t_max, int steps);

}  // namespace spinbath
