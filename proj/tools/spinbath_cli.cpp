// Command-line front end: echo runs, parameter sweeps, fit scans, figure
// recipes, and the stroboscopic-schedule compiler/verifier.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "spinbath/echo.hpp"
#include "spinbath/entanglement.hpp"
#include "spinbath/latticecompiler.hpp"
#include "spinbath/perturbation.hpp"
#include "spinbath/runconfig.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spinbath;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    int threads = 0;
    std::string method;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "JSON run configuration");
    if (config_required) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory (overrides config)");
    cmd->add_option("--threads", opts.threads, "worker threads (0 = hardware)");
    cmd->add_option("--method", opts.method, "determinant|central_spin|ed|trotter");
}

RunConfig make_config(const CommonOpts& opts) {
    RunConfig config = load_config(opts.config_path);
    if (!opts.out_dir.empty()) config.output = opts.out_dir;
    if (opts.threads > 0) config.threads = opts.threads;
    if (!opts.method.empty()) {
        if (opts.method == "determinant") config.method = EchoMethod::Determinant;
        else if (opts.method == "central_spin") config.method = EchoMethod::CentralSpin;
        else if (opts.method == "ed") config.method = EchoMethod::EDExact;
        else if (opts.method == "trotter") config.method = EchoMethod::EDTrotter;
        else throw ConfigError("unknown method \"" + opts.method + "\"", "/method");
    }
    return config;
}

std::vector<std::pair<double, RunConfig>> sweep_points(const RunConfig& config) {
    std::vector<std::pair<double, RunConfig>> points;
    if (config.sweep) {
        for (double v : config.sweep->values)
            points.emplace_back(v, with_param(config, config.sweep->param, v));
    } else {
        points.emplace_back(0.0, config);
    }
    return points;
}

int cmd_alpha_scan(const RunConfig& config) {
    fs::create_directories(config.output);
    json report;
    report["schema_version"] = 1;
    report["param"] = config.sweep ? config.sweep->param : "none";
    json rows = json::array();
    std::ofstream csv(fs::path(config.output) / "alpha_scan.csv");
    csv << "param,alpha,residual,window_lo,window_hi\n";
    for (const auto& [v, point] : sweep_points(config)) {
        const AlphaEstimate est = fit_alpha(compute_series(point));
        char buf[160];
        std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g,%.15g,%.15g\n", v, est.alpha,
                      est.residual, est.fit_window.first, est.fit_window.second);
        csv << buf;
        rows.push_back({{"param", v},
                        {"alpha", est.alpha},
                        {"residual", est.residual},
                        {"window", {est.fit_window.first, est.fit_window.second}},
                        {"flagged", est.flagged}});
    }
    report["rows"] = rows;
    std::ofstream out(fs::path(config.output) / "alpha_scan.json");
    out << report.dump(2) << "\n";
    std::cout << "alpha-scan: " << rows.size() << " points -> " << config.output << "\n";
    return 0;
}

int cmd_plateau_scan(const RunConfig& config) {
    fs::create_directories(config.output);
    std::ofstream csv(fs::path(config.output) / "plateau_scan.csv");
    csv << "param,plateau,std\n";
    for (const auto& [v, point] : sweep_points(config)) {
        const PlateauEstimate est = fit_plateau(compute_series(point));
        char buf[120];
        std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g\n", v, est.value, est.std_dev);
        csv << buf;
    }
    std::cout << "plateau-scan -> " << config.output << "\n";
    return 0;
}

int cmd_critical_scaling(const RunConfig& config) {
    if (!config.sweep || config.sweep->param != "N")
        throw ConfigError("critical-scaling expects a sweep over N", "/sweep/param");
    fs::create_directories(config.output);
    std::vector<std::pair<int, double>> minima;
    std::ofstream csv(fs::path(config.output) / "critical_minima.csv");
    csv << "N,L_min\n";
    for (const auto& [v, point0] : sweep_points(config)) {
        RunConfig point = point0;
        point.time.t_max = 0.45 * point.model.N;  // pre-revival window
        point.time.steps = std::max(50, static_cast<int>(point.time.t_max / 0.25));
        const EchoSeries series = compute_series(point);
        const double mn = *std::min_element(series.values.begin(), series.values.end());
        minima.emplace_back(point.model.N, mn);
        char buf[80];
        std::snprintf(buf, sizeof buf, "%d,%.15g\n", point.model.N, mn);
        csv << buf;
    }
    const ScalingFit fit = fit_critical_scaling(minima);
    json out = {{"L0", fit.L0}, {"beta", fit.beta}, {"monotone", fit.monotone}};
    std::ofstream jf(fs::path(config.output) / "critical_scaling.json");
    jf << out.dump(2) << "\n";
    std::printf("critical-scaling: L0 = %.6g, beta = %.6g, monotone = %s\n", fit.L0, fit.beta,
                fit.monotone ? "yes" : "no");
    return 0;
}

int cmd_concurrence_scan(const RunConfig& config) {
    if (!config.sweep || (config.sweep->param != "lambda" && config.sweep->param != "delta"))
        throw ConfigError("concurrence-scan expects a sweep over lambda or delta", "/sweep/param");
    fs::create_directories(config.output);
    std::vector<ChainSpec> grid;
    for (const auto& [v, point] : sweep_points(config)) grid.push_back(point.model);
    const auto rows = alpha_vs_concurrence(grid, config.coupling,
                                           config.sweep->param == "lambda", config.sector);
    write_alpha_concurrence_csv(rows, (fs::path(config.output) / "alpha_concurrence.csv").string());
    std::cout << "concurrence-scan: " << rows.size() << " points -> " << config.output << "\n";
    return 0;
}

int cmd_envelope_fit(const RunConfig& config) {
    fs::create_directories(config.output);
    std::ofstream csv(fs::path(config.output) / "envelope_fit.csv");
    csv << "param,S2,n_peaks,quality\n";
    for (const auto& [v, point] : sweep_points(config)) {
        const EchoSeries series = compute_series(point);
        const EnvelopeFit fit =
            fit_envelope(series, point.coupling.epsilon, point.coupling.m);
        char buf[120];
        std::snprintf(buf, sizeof buf, "%.15g,%.15g,%d,%.15g\n", v, fit.S2, fit.n_peaks,
                      fit.quality);
        csv << buf;
    }
    std::cout << "envelope-fit -> " << config.output << "\n";
    return 0;
}

int cmd_compile(const RunConfig& config, double t, int n_steps, const std::string& level_name) {
    CompileLevel level;
    if (level_name == "step") level = CompileLevel::Step;
    else if (level_name == "gate") level = CompileLevel::Gate;
    else if (level_name == "pulse") level = CompileLevel::Pulse;
    else throw ConfigError("level must be step|gate|pulse");
    const GateSequence seq = compile(config.model, config.coupling, t, n_steps, level);
    fs::create_directories(config.output);
    write_schedule_text(seq, (fs::path(config.output) / "schedule.txt").string());
    write_schedule_json(seq, (fs::path(config.output) / "schedule.json").string());
    std::cout << "compiled " << seq.gates.size() << " gates (" << seq.gates_per_step
              << " per step) -> " << config.output << "\n";
    return 0;
}

int cmd_verify(const RunConfig& config, double t, const std::vector<int>& n_list) {
    const VerifyReport report = verify(config.model, config.coupling, t, n_list);
    json j;
    j["n"] = report.n_values;
    j["distance"] = report.distances;
    j["fitted_order"] = report.fitted_order;
    j["monotone"] = report.monotone;
    fs::create_directories(config.output);
    std::ofstream out(fs::path(config.output) / "verify.json");
    out << j.dump(2) << "\n";
    for (std::size_t i = 0; i < report.n_values.size(); ++i)
        std::printf("  n = %4d   distance = %.6e\n", report.n_values[i], report.distances[i]);
    std::printf("fitted order %.3f, monotone %s\n", report.fitted_order,
                report.monotone ? "yes" : "no");
    return 0;
}

int cmd_recipe(const std::string& name, const std::string& out_dir, int threads) {
    const Recipe rec = recipe(name);
    std::cout << "recipe " << rec.name << ": " << rec.description << "\n";
    int idx = 0;
    for (RunConfig config : rec.configs) {
        config.output = out_dir.empty() ? ("recipe_" + name) : out_dir;
        if (rec.configs.size() > 1)
            config.output += "/part" + std::to_string(idx++);
        if (threads > 0) config.threads = threads;
        switch (rec.kind) {
            case RecipeKind::Echo: run(config); break;
            case RecipeKind::AlphaScan: cmd_alpha_scan(config); break;
            case RecipeKind::PlateauScan: cmd_plateau_scan(config); break;
            case RecipeKind::CriticalScaling: cmd_critical_scaling(config); break;
            case RecipeKind::Envelope: cmd_envelope_fit(config); break;
            case RecipeKind::CompilerVerify:
                cmd_verify(config, config.time.t_max, {10, 20, 40, 80});
                break;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spinbath: qubit decoherence from interacting spin-chain baths"};
    app.require_subcommand(1);

    CommonOpts opts;
    double t_arg = 1.0;
    int n_steps = 10;
    std::string level_name = "step";
    std::string n_list_str = "10,20,40,80";
    std::string recipe_name;
    bool list_recipes = false;

    auto* c_echo = app.add_subcommand("echo", "single echo series -> CSV");
    add_common(c_echo, opts);
    auto* c_sweep = app.add_subcommand("sweep", "sweep a parameter, one CSV per point");
    add_common(c_sweep, opts);
    auto* c_alpha = app.add_subcommand("alpha-scan", "fit the short-time Gaussian rate per point");
    add_common(c_alpha, opts);
    auto* c_plateau = app.add_subcommand("plateau-scan", "fit the long-time plateau per point");
    add_common(c_plateau, opts);
    auto* c_scaling = app.add_subcommand("critical-scaling", "L_min(N) and the L0/(1+beta ln N) fit");
    add_common(c_scaling, opts);
    auto* c_conc = app.add_subcommand("concurrence-scan", "joined (param, C(1), alpha) table");
    add_common(c_conc, opts);
    auto* c_env = app.add_subcommand("envelope-fit", "strong-coupling Gaussian envelope widths");
    add_common(c_env, opts);
    auto* c_compile = app.add_subcommand("compile", "emit the stroboscopic gate schedule");
    add_common(c_compile, opts);
    c_compile->add_option("--t", t_arg, "total simulated time");
    c_compile->add_option("--n-steps", n_steps, "number of stroboscopic steps");
    c_compile->add_option("--level", level_name, "step|gate|pulse");
    auto* c_verify = app.add_subcommand("verify", "compare the schedule against its exact propagator");
    add_common(c_verify, opts);
    c_verify->add_option("--t", t_arg, "total simulated time");
    c_verify->add_option("--n-list", n_list_str, "comma-separated step counts");
    auto* c_recipe = app.add_subcommand("recipe", "run a named reproduction bundle");
    c_recipe->add_option("name", recipe_name, "recipe name");
    c_recipe->add_flag("--list", list_recipes, "list available recipes");
    c_recipe->add_option("--out", opts.out_dir, "output directory");
    c_recipe->add_option("--threads", opts.threads, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_recipe->parsed()) {
            if (list_recipes) {
                for (const auto& n : recipe_names()) std::cout << n << "\n";
                return 0;
            }
            if (recipe_name.empty()) throw ConfigError("recipe name required (or --list)");
            return cmd_recipe(recipe_name, opts.out_dir, opts.threads);
        }
        RunConfig config = make_config(opts);
        if (c_echo->parsed()) {
            config.sweep.reset();
            const RunResult res = run(config);
            std::cout << res.csv_paths.front() << "\n";
            return 0;
        }
        if (c_sweep->parsed()) {
            if (!config.sweep) throw ConfigError("sweep requires a \"sweep\" block", "/sweep");
            const RunResult res = run(config);
            std::cout << res.csv_paths.size() << " series -> " << config.output << "\n";
            return 0;
        }
        if (c_alpha->parsed()) return cmd_alpha_scan(config);
        if (c_plateau->parsed()) return cmd_plateau_scan(config);
        if (c_scaling->parsed()) return cmd_critical_scaling(config);
        if (c_conc->parsed()) return cmd_concurrence_scan(config);
        if (c_env->parsed()) return cmd_envelope_fit(config);
        if (c_compile->parsed()) return cmd_compile(config, t_arg, n_steps, level_name);
        if (c_verify->parsed()) {
            std::vector<int> n_list;
            std::stringstream ss(n_list_str);
            std::string tok;
            while (std::getline(ss, tok, ',')) n_list.push_back(std::stoi(tok));
            return cmd_verify(config, t_arg, n_list);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
