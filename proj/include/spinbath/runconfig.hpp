#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "spinbath/echo_series.hpp"
#include "spinbath/ed_oracle.hpp"
#include "spinbath/model.hpp"

namespace spinbath {

struct TimeGrid {
    double t_max = 10.0;
    int steps = 2000;
};

struct SweepSpec {
    std::string param;  // lambda | gamma | delta | epsilon | m | N
    std::vector<double> values;
};

struct RunConfig {
    ChainSpec model;
    CouplingSpec coupling;
    TimeGrid time;
    EchoMethod method = EchoMethod::Determinant;
    std::optional<SweepSpec> sweep;
    std::string output = ".";
    int threads = 0;
    PeriodicConvention convention = PeriodicConvention::CCyclic;
    SectorRule sector = SectorRule::Lowest;
    double trotter_dt = 1e-3;  // J dt slicing for method = trotter
};

// Parses and validates; throws ConfigError with a JSON-pointer path.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json config_to_json(const RunConfig& config);

// Applies one sweep value (param in {lambda, gamma, delta, epsilon, m, N});
// derived site sets are re-resolved.
RunConfig with_param(const RunConfig& base, const std::string& param, double value);

// Method dispatch; ConfigError on invalid model/method pairings
// (e.g. determinant with delta != 0 suggests method = ed).
EchoSeries compute_series(const RunConfig& config);

struct RunResult {
    std::vector<std::string> csv_paths;
    std::string manifest_path;
};

// One CSV per sweep point (or a single CSV) plus manifest.json in config.output.
RunResult run(const RunConfig& config);

enum class RecipeKind { Echo, AlphaScan, PlateauScan, CriticalScaling, Envelope, CompilerVerify };

struct Recipe {
    std::string name;
    std::string description;
    RecipeKind kind = RecipeKind::Echo;
    std::vector<RunConfig> configs;
};

std::vector<std::string> recipe_names();
Recipe recipe(const std::string& name);  // ConfigError listing names when unknown

}  // namespace spinbath
