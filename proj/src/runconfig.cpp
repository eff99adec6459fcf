#include "spinbath/runconfig.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "spinbath/echo.hpp"

namespace spinbath {

namespace {

constexpr const char* kLibraryVersion = "spinbath 1.0.0";

using nlohmann::json;

double get_number(const json& j, const std::string& key, const std::string& ptr,
                  std::optional<double> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing required field", ptr + "/" + key);
    }
    if (!j[key].is_number()) throw ConfigError("expected a number", ptr + "/" + key);
    return j[key].get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& ptr,
            std::optional<int> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing required field", ptr + "/" + key);
    }
    if (!j[key].is_number_integer()) throw ConfigError("expected an integer", ptr + "/" + key);
    return j[key].get<int>();
}

std::string get_string(const json& j, const std::string& key, const std::string& ptr,
                       std::optional<std::string> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing required field", ptr + "/" + key);
    }
    if (!j[key].is_string()) throw ConfigError("expected a string", ptr + "/" + key);
    return j[key].get<std::string>();
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

RunConfig parse_config(const json& j) {
    RunConfig config;
    if (!j.contains("model")) throw ConfigError("missing required field", "/model");
    const json& jm = j["model"];
    config.model.N = get_int(jm, "N", "/model");
    config.model.J = get_number(jm, "J", "/model", 1.0);
    config.model.gamma = get_number(jm, "gamma", "/model", 1.0);
    config.model.delta = get_number(jm, "delta", "/model", 0.0);
    config.model.lambda = get_number(jm, "lambda", "/model", 0.0);
    const std::string boundary = get_string(jm, "boundary", "/model", "open");
    if (boundary == "open") config.model.boundary = Boundary::Open;
    else if (boundary == "periodic") config.model.boundary = Boundary::Periodic;
    else throw ConfigError("boundary must be \"open\" or \"periodic\"", "/model/boundary");
    try {
        validate_chain(config.model);
    } catch (const Error& e) {
        throw ConfigError(e.what(), "/model");
    }

    if (!j.contains("coupling")) throw ConfigError("missing required field", "/coupling");
    const json& jc = j["coupling"];
    const double epsilon = get_number(jc, "epsilon", "/coupling");
    const int m = get_int(jc, "m", "/coupling", 1);
    const double omega_e = get_number(jc, "omega_e", "/coupling", 0.0);
    const std::string geom = get_string(jc, "geometry", "/coupling", "A");
    Geometry geometry;
    if (geom == "A") geometry = Geometry::StarA;
    else if (geom == "B") geometry = Geometry::ContiguousB;
    else if (geom == "explicit") geometry = Geometry::Explicit;
    else throw ConfigError("geometry must be \"A\", \"B\" or \"explicit\"", "/coupling/geometry");
    std::vector<int> sites;
    if (jc.contains("sites")) {
        if (!jc["sites"].is_array()) throw ConfigError("expected an array", "/coupling/sites");
        for (const auto& s : jc["sites"]) {
            if (!s.is_number_integer()) throw ConfigError("sites must be integers", "/coupling/sites");
            sites.push_back(s.get<int>());
        }
    }
    if (geometry == Geometry::Explicit && sites.empty())
        throw ConfigError("explicit geometry requires sites", "/coupling/sites");
    try {
        config.coupling = make_coupling(config.model, epsilon,
                                        geometry == Geometry::Explicit
                                            ? static_cast<int>(sites.size())
                                            : m,
                                        geometry, sites, omega_e);
    } catch (const Error& e) {
        throw ConfigError(e.what(), "/coupling");
    }

    if (j.contains("time")) {
        config.time.t_max = get_number(j["time"], "t_max", "/time");
        config.time.steps = get_int(j["time"], "steps", "/time", 2000);
        if (config.time.steps < 1) throw ConfigError("steps must be >= 1", "/time/steps");
        if (!(config.time.t_max > 0)) throw ConfigError("t_max must be > 0", "/time/t_max");
    }

    const std::string method = j.contains("method") ? get_string(j, "method", "") : "determinant";
    if (method == "determinant") config.method = EchoMethod::Determinant;
    else if (method == "central_spin") config.method = EchoMethod::CentralSpin;
    else if (method == "ed") config.method = EchoMethod::EDExact;
    else if (method == "trotter") config.method = EchoMethod::EDTrotter;
    else throw ConfigError("unknown method \"" + method + "\"", "/method");

    if (j.contains("sweep") && !j["sweep"].is_null()) {
        SweepSpec sweep;
        sweep.param = get_string(j["sweep"], "param", "/sweep");
        static const std::vector<std::string> allowed = {"lambda", "gamma", "delta",
                                                         "epsilon", "m", "N"};
        if (std::find(allowed.begin(), allowed.end(), sweep.param) == allowed.end())
            throw ConfigError("sweep param must be one of lambda|gamma|delta|epsilon|m|N",
                              "/sweep/param");
        if (!j["sweep"].contains("values") || !j["sweep"]["values"].is_array())
            throw ConfigError("expected an array", "/sweep/values");
        for (const auto& v : j["sweep"]["values"]) {
            if (!v.is_number()) throw ConfigError("sweep values must be numbers", "/sweep/values");
            const double value = v.get<double>();
            if (!std::isfinite(value)) throw ConfigError("sweep values must be finite", "/sweep/values");
            sweep.values.push_back(value);
        }
        if (sweep.values.empty()) throw ConfigError("sweep values empty", "/sweep/values");
        config.sweep = sweep;
    }

    if (j.contains("output")) config.output = get_string(j, "output", "");
    if (j.contains("threads")) config.threads = get_int(j, "threads", "");
    if (j.contains("trotter_dt")) config.trotter_dt = get_number(j, "trotter_dt", "");

    const std::string conv =
        j.contains("periodic_convention") ? get_string(j, "periodic_convention", "") : "c_cyclic";
    if (conv == "c_cyclic") config.convention = PeriodicConvention::CCyclic;
    else if (conv == "parity_even") config.convention = PeriodicConvention::ParityEven;
    else throw ConfigError("periodic_convention must be c_cyclic or parity_even",
                           "/periodic_convention");

    const std::string sector = j.contains("sector") ? get_string(j, "sector", "") : "lowest";
    if (sector == "lowest") config.sector = SectorRule::Lowest;
    else if (sector == "maxsz") config.sector = SectorRule::MaxSz;
    else if (sector == "even_parity") config.sector = SectorRule::EvenParity;
    else throw ConfigError("sector must be lowest|maxsz|even_parity", "/sector");

    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

nlohmann::json config_to_json(const RunConfig& config) {
    json j;
    j["model"] = {{"N", config.model.N},
                  {"J", config.model.J},
                  {"gamma", config.model.gamma},
                  {"delta", config.model.delta},
                  {"lambda", config.model.lambda},
                  {"boundary", config.model.boundary == Boundary::Open ? "open" : "periodic"}};
    j["coupling"] = {{"epsilon", config.coupling.epsilon},
                     {"m", config.coupling.m},
                     {"geometry", config.coupling.geometry == Geometry::StarA        ? "A"
                                  : config.coupling.geometry == Geometry::ContiguousB ? "B"
                                                                                      : "explicit"},
                     {"sites", config.coupling.sites},
                     {"omega_e", config.coupling.omega_e}};
    j["time"] = {{"t_max", config.time.t_max}, {"steps", config.time.steps}};
    j["method"] = to_string(config.method);
    if (config.sweep) j["sweep"] = {{"param", config.sweep->param}, {"values", config.sweep->values}};
    j["output"] = config.output;
    j["threads"] = config.threads;
    j["periodic_convention"] =
        config.convention == PeriodicConvention::CCyclic ? "c_cyclic" : "parity_even";
    j["sector"] = config.sector == SectorRule::Lowest      ? "lowest"
                  : config.sector == SectorRule::MaxSz     ? "maxsz"
                                                           : "even_parity";
    j["trotter_dt"] = config.trotter_dt;
    return j;
}

RunConfig with_param(const RunConfig& base, const std::string& param, double value) {
    RunConfig config = base;
    config.sweep.reset();
    if (param == "lambda") config.model.lambda = value;
    else if (param == "gamma") config.model.gamma = value;
    else if (param == "delta") config.model.delta = value;
    else if (param == "epsilon") config.coupling.epsilon = value;
    else if (param == "m" || param == "N") {
        const int iv = static_cast<int>(std::llround(value));
        if (std::abs(value - iv) > 1e-9)
            throw ConfigError("sweep over " + param + " requires integer values", "/sweep/values");
        if (param == "m") config.coupling.m = iv;
        else config.model.N = iv;
        if (config.coupling.geometry == Geometry::Explicit)
            throw ConfigError("cannot sweep " + param + " with explicit sites", "/sweep/param");
    } else {
        throw ConfigError("unknown sweep param " + param, "/sweep/param");
    }
    // re-derive the site set for derived geometries
    if (config.coupling.geometry != Geometry::Explicit)
        config.coupling = make_coupling(config.model, config.coupling.epsilon, config.coupling.m,
                                        config.coupling.geometry, {}, config.coupling.omega_e);
    else
        validate_coupling(config.model, config.coupling);
    return config;
}

EchoSeries compute_series(const RunConfig& config) {
    const std::vector<double> times = uniform_times(config.time.t_max, config.time.steps);
    switch (config.method) {
        case EchoMethod::Determinant:
            if (config.model.delta != 0.0)
                throw ConfigError("method=determinant requires delta=0; use method=ed", "/method");
            return echo_determinant(config.model, config.coupling, times, config.convention,
                                    config.threads);
        case EchoMethod::CentralSpin: {
            if (config.model.delta != 0.0)
                throw ConfigError("method=central_spin requires delta=0; use method=ed", "/method");
            if (config.coupling.m != config.model.N)
                throw ConfigError("method=central_spin requires m=N; use method=determinant",
                                  "/coupling/m");
            try {
                return echo_central_spin(config.model, config.coupling.epsilon, times);
            } catch (const UnsupportedModelError& e) {
                throw ConfigError(std::string(e.what()) + "; use method=determinant", "/method");
            }
        }
        case EchoMethod::EDExact:
            if (config.model.N > kDenseSiteCap)
                throw ConfigError("method=ed capped at N=12; use method=determinant for delta=0",
                                  "/model/N");
            return echo_ed(config.model, config.coupling, times, config.sector);
        case EchoMethod::EDTrotter:
            if (config.model.N > kDenseSiteCap)
                throw ConfigError("method=trotter capped at N=12", "/model/N");
            return echo_trotter(config.model, config.coupling, times, config.trotter_dt,
                                config.sector);
    }
    throw ConfigError("unreachable method");
}

RunResult run(const RunConfig& config) {
    namespace fs = std::filesystem;
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(config.output);

    RunResult result;
    nlohmann::json manifest;
    manifest["schema_version"] = 1;
    manifest["library"] = kLibraryVersion;
    manifest["config"] = config_to_json(config);
    manifest["det_exponent"] = kDeterminantExponent;
    manifest["threads"] = config.threads;

    auto emit = [&](const RunConfig& point, const std::string& name) {
        const EchoSeries series = compute_series(point);
        const std::string path = (fs::path(config.output) / name).string();
        write_csv(series, path);
        result.csv_paths.push_back(path);
    };

    if (config.sweep) {
        for (double v : config.sweep->values) {
            const RunConfig point = with_param(config, config.sweep->param, v);
            emit(point, "echo_" + config.sweep->param + "_" + format_value(v) + ".csv");
        }
    } else {
        emit(config, "echo.csv");
    }

    const auto t1 = std::chrono::steady_clock::now();
    manifest["outputs"] = result.csv_paths;
    manifest["wall_time_s"] = std::chrono::duration<double>(t1 - t0).count();
    result.manifest_path = (fs::path(config.output) / "manifest.json").string();
    std::ofstream out(result.manifest_path);
    out << manifest.dump(2) << "\n";
    return result;
}

namespace {

RunConfig base_ising(int N, double lambda, double epsilon, Boundary boundary, int m = 1,
                     Geometry geometry = Geometry::StarA) {
    RunConfig c;
    c.model = ChainSpec{N, 1.0, 1.0, 0.0, lambda, boundary};
    c.coupling = make_coupling(c.model, epsilon, m, geometry);
    return c;
}

}  // namespace

std::vector<std::string> recipe_names() {
    return {"fig2", "fig3", "fig4", "fig7", "xx_fig", "xxz_smallN",
            "mlink_alpha", "strong_envelope", "compiler_verify"};
}

Recipe recipe(const std::string& name) {
    Recipe r;
    r.name = name;
    if (name == "fig2") {
        r.description = "single-link Ising echo, N=300 periodic, eps=0.25, lambda sweep";
        r.kind = RecipeKind::Echo;
        RunConfig c = base_ising(300, 0.5, 0.25, Boundary::Periodic);
        c.time = {200.0, 2000};
        c.sweep = SweepSpec{"lambda", {0.25, 0.5, 0.9, 0.99, 1.0, 1.01, 1.1, 1.5, 1.75}};
        r.configs = {c};
    } else if (name == "fig3") {
        r.description = "alpha log-divergence, N=200 periodic, eps in {0.05,0.1,0.25}";
        r.kind = RecipeKind::AlphaScan;
        for (double eps : {0.05, 0.1, 0.25}) {
            RunConfig c = base_ising(200, 0.9, eps, Boundary::Periodic);
            c.time = {0.35, 70};
            SweepSpec sweep{"lambda", {}};
            for (int i = 0; i <= 40; ++i) {
                const double l = 0.9 + 0.005 * i;
                if (std::abs(l - 1.0) > 1e-9) sweep.values.push_back(l);
            }
            c.sweep = sweep;
            r.configs.push_back(c);
        }
    } else if (name == "fig4") {
        r.description = "plateau vs lambda, N=200 periodic, eps in {0.05,0.25}";
        r.kind = RecipeKind::PlateauScan;
        for (double eps : {0.05, 0.25}) {
            RunConfig c = base_ising(200, 0.5, eps, Boundary::Periodic);
            c.time = {80.0, 800};
            SweepSpec sweep{"lambda", {}};
            for (int i = 1; i <= 40; ++i) sweep.values.push_back(0.05 * i);
            c.sweep = sweep;
            r.configs.push_back(c);
        }
    } else if (name == "fig7") {
        r.description = "critical minima vs size, lambda=1, eps=0.25, N in {50..400}";
        r.kind = RecipeKind::CriticalScaling;
        RunConfig c = base_ising(50, 1.0, 0.25, Boundary::Periodic);
        c.convention = PeriodicConvention::ParityEven;
        c.time = {22.5, 90};  // per-point grids are rescaled to [0, 0.45 N]
        c.sweep = SweepSpec{"N", {50, 100, 200, 300, 400}};
        r.configs = {c};
    } else if (name == "xx_fig") {
        r.description = "XX chain echo, N=300 periodic, eps=0.25";
        r.kind = RecipeKind::Echo;
        RunConfig c = base_ising(300, 0.5, 0.25, Boundary::Periodic);
        c.model.gamma = 0.0;
        c.time = {30.0, 300};
        c.sweep = SweepSpec{"lambda", {0.25, 0.5, 0.75, 0.9, 0.95, 0.99, 1.0, 1.5}};
        r.configs = {c};
    } else if (name == "xxz_smallN") {
        r.description = "XXZ bath at dense scale, N=10, eps=0.1, middle link";
        r.kind = RecipeKind::Echo;
        RunConfig c;
        c.model = ChainSpec{10, 1.0, 0.0, 0.9, 0.0, Boundary::Open};
        c.coupling = make_coupling(c.model, 0.1, 1, Geometry::Explicit, {5});
        c.method = EchoMethod::EDExact;
        c.sector = SectorRule::MaxSz;
        c.time = {2.0, 400};
        c.sweep = SweepSpec{"delta", {0.9, 0.5, 0.0, -0.5, -0.9, -1.0, -1.5, -2.0, -2.5}};
        r.configs = {c};
    } else if (name == "mlink_alpha") {
        r.description = "multi-link alpha scaling, N=300, StarA, lambda=0.5";
        r.kind = RecipeKind::AlphaScan;
        RunConfig c = base_ising(300, 0.5, 0.25, Boundary::Periodic, 1, Geometry::StarA);
        c.time = {0.35, 70};
        c.sweep = SweepSpec{"m", {1, 2, 3, 5, 10}};
        r.configs = {c};
    } else if (name == "strong_envelope") {
        r.description = "strong-coupling envelopes: B m-scan and A lambda-scan, eps=80";
        r.kind = RecipeKind::Envelope;
        RunConfig b = base_ising(200, 0.5, 80.0, Boundary::Periodic, 10, Geometry::ContiguousB);
        b.time = {0.1, 1500};
        b.sweep = SweepSpec{"m", {10, 30, 100}};
        RunConfig a = base_ising(200, 0.2, 80.0, Boundary::Periodic, 25, Geometry::StarA);
        a.time = {1.2, 2400};
        a.sweep = SweepSpec{"lambda", {0.0, 0.2, 0.4}};
        r.configs = {b, a};
    } else if (name == "compiler_verify") {
        r.description = "stroboscopic schedule verification, N=4, t=1, n in {10,20,40,80}";
        r.kind = RecipeKind::CompilerVerify;
        RunConfig c;
        c.model = ChainSpec{4, 1.0, 1.0, 0.0, 0.5, Boundary::Open};
        c.coupling = make_coupling(c.model, 0.25, 1, Geometry::Explicit, {1}, 1.0);
        c.time = {1.0, 1};
        r.configs = {c};
    } else {
        std::string names;
        for (const auto& n : recipe_names()) names += (names.empty() ? "" : ", ") + n;
        throw ConfigError("unknown recipe \"" + name + "\"; available: " + names);
    }
    return r;
}

}  // namespace spinbath
