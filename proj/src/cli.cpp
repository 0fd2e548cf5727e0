#include "bottleneck/cli.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bottleneck/driver.hpp"
#include "bottleneck/equilibrium.hpp"
#include "bottleneck/io.hpp"

#ifndef BOTTLENECK_VERSION
#define BOTTLENECK_VERSION "dev"
#endif

namespace bottleneck {

namespace fs = std::filesystem;

namespace {

SimConfig config_or_demo(const std::string& path) { return path.empty() ? demo_config() : load_config(path); }

bool has_entries(const fs::path& dir) { return fs::exists(dir) && !fs::is_empty(dir); }

struct RunArgs {
    std::string config;
    std::string f0;
    std::string out;
    bool overwrite = false;
    std::optional<double> max_days;
    int flow_every = 20;
};

int cmd_run(const RunArgs& args, std::ostream& out) {
    const fs::path dir(args.out);
    if (has_entries(dir) && !args.overwrite) {
        throw Error(ErrorKind::Io, "output directory " + dir.string() + " is not empty; pass --overwrite to replace it");
    }
    const ValidatedConfig config = validate(config_or_demo(args.config));
    const Grids grids = build_grids(config);
    const std::vector<RatePiece> pieces =
        args.f0.empty() ? demo_departures(config.params()) : load_departures(args.f0);
    const Eigen::VectorXd f0 = departures_on_grid(pieces, grids.time);

    fs::create_directories(dir);
    CsvRunWriter writer(dir, grids, config.params(), args.flow_every);
    RunOptions options;
    options.max_days_override = args.max_days;
    const RunSummary summary = run(config, f0, {&writer}, options);
    writer.finish();

    nlohmann::ordered_json manifest;
    manifest["tool"] = "bottleneck_cli";
    manifest["version"] = BOTTLENECK_VERSION;
    manifest["config"] = nlohmann::ordered_json::parse(config_to_json(config.params()));
    manifest["departures_source"] = args.f0.empty() ? std::string("builtin demo") : args.f0;
    nlohmann::ordered_json departures = nlohmann::ordered_json::array();
    for (const RatePiece& p : pieces) {
        departures.push_back({p.t_start, p.rate});
    }
    manifest["departures"] = departures;
    manifest["flow_every"] = args.flow_every;
    nlohmann::ordered_json result;
    result["converged"] = summary.converged;
    result["convergence_day"] = summary.convergence_day ? nlohmann::ordered_json(*summary.convergence_day)
                                                        : nlohmann::ordered_json(nullptr);
    result["final_day"] = summary.final_day;
    result["steps"] = summary.steps;
    result["initial_gap"] = summary.initial_gap;
    result["final_gap"] = summary.final_gap;
    result["final_x_star"] = summary.final_x_star;
    result["stop_reason"] = to_string(summary.reason);
    result["warnings"] = summary.warnings;
    manifest["summary"] = result;
    write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

    out << "converged," << (summary.converged ? "true" : "false") << '\n'
        << "convergence_day,"
        << (summary.convergence_day ? format_number(*summary.convergence_day) : std::string("none")) << '\n'
        << "final_day," << format_number(summary.final_day) << '\n'
        << "final_gap," << format_number(summary.final_gap) << '\n'
        << "final_x_star," << format_number(summary.final_x_star) << '\n'
        << "stop_reason," << to_string(summary.reason) << '\n';
    for (const std::string& warning : summary.warnings) {
        out << "warning," << warning << '\n';
    }
    return summary.converged ? exit_code::kOk : exit_code::kNoConvergence;
}

int cmd_spue(const std::string& config_path, std::ostream& out) {
    const ValidatedConfig config = validate(config_or_demo(config_path));
    const SpueSolution s = analytic_spue(config, build_grids(config));
    out << "kappa,L_star,t1,t2,cost,t_switch,early_rate,late_rate\n"
        << format_number(s.kappa) << ',' << format_number(s.L_star) << ',' << format_number(s.t1) << ','
        << format_number(s.t2) << ',' << format_number(s.cost) << ',' << format_number(s.t_switch) << ','
        << format_number(s.early_rate) << ',' << format_number(s.late_rate) << '\n';
    return exit_code::kOk;
}

int cmd_stability(const std::string& config_path, std::optional<double> epsilon0, std::ostream& out) {
    const ValidatedConfig config = validate(config_or_demo(config_path));
    const PerturbationResult r = perturbation_experiment(config, epsilon0.value_or(0.01 * config.kappa()));
    const bool within = r.relative_rate_error() <= 0.10;
    out << "epsilon0,L_star,decay_rate_theory,decay_rate_fit,relative_error,r_squared,fine_settle_day,within_10pct\n"
        << format_number(r.epsilon0) << ',' << format_number(r.L_star) << ',' << format_number(r.decay_rate_theory)
        << ',' << format_number(r.decay_rate_fit) << ',' << format_number(r.relative_rate_error()) << ','
        << format_number(r.fit_r_squared) << ','
        << (r.fine_settled ? format_number(r.fine_settle_day) : std::string("none")) << ','
        << (within ? "true" : "false") << '\n';
    return within ? exit_code::kOk : exit_code::kRateMismatch;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Day-to-day departure-time dynamics at a single bottleneck"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Simulate the day-to-day dynamics and write CSV tables");
    run_cmd->add_option("--config", run_args.config, "JSON config file (default: builtin demo)");
    run_cmd->add_option("--f0", run_args.f0, "Initial departures, lines of t_start,rate (default: builtin demo)");
    run_cmd->add_option("--out", run_args.out, "Output directory")->required();
    run_cmd->add_flag("--overwrite", run_args.overwrite, "Write into a non-empty output directory");
    run_cmd->add_option("--max-days", run_args.max_days, "Override max_days");
    run_cmd->add_option("--flow-every", run_args.flow_every, "Write the flow table every N steps (and the last)")
        ->check(CLI::PositiveNumber);

    std::string spue_config;
    auto* spue_cmd = app.add_subcommand("spue", "Print the analytic equilibrium");
    spue_cmd->add_option("--config", spue_config, "JSON config file (default: builtin demo)");

    std::string stability_config;
    std::optional<double> epsilon0;
    auto* stability_cmd = app.add_subcommand("stability", "Two-cell perturbation decay experiment");
    stability_cmd->add_option("--config", stability_config, "JSON config file (default: builtin demo)");
    stability_cmd->add_option("--epsilon0", epsilon0, "Initial perturbation in veh/$ (default: 0.01 kappa)");

    app.add_subcommand("demo-config", "Print the builtin demo config as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::kOk : exit_code::kConfigError;
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(run_args, out);
        }
        if (spue_cmd->parsed()) {
            return cmd_spue(spue_config, out);
        }
        if (stability_cmd->parsed()) {
            return cmd_stability(stability_config, epsilon0, out);
        }
        out << config_to_json(demo_config());
        return exit_code::kOk;
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code::kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kConfigError;
    }
}

} // namespace bottleneck
