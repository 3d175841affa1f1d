#include "cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Airship control simulator: BS / SMC / BSMC flavor sweeps"};
    app.require_subcommand(1);

    airship::cli::RunManifest manifest;
    std::uint64_t seed = 0;
    double eps = 0.0;
    std::string mode, switch_mode, plot_cmd;

    auto* run = app.add_subcommand("run", "Run a scenario for one or more controller flavors");
    run->add_option("--scenario", manifest.scenario, "Scenario JSON path or bundled name")->required();
    run->add_option("--flavors", manifest.flavors, "Comma-separated flavors (bs,smc,bsmc) or SISO laws")
        ->delimiter(',');
    auto* seed_opt = run->add_option("--seed", seed, "Turbulence / noise seed");
    run->add_option("--out", manifest.out_dir, "Output directory")->capture_default_str();
    auto* mode_opt = run->add_option("--mode", mode, "Actuator model: ideal | actual");
    auto* eps_opt = run->add_option("--eps", eps, "Boundary-layer width (0 = hard sign)");
    auto* switch_opt = run->add_option("--switch", switch_mode, "Switching gain: fixed | timevarying");
    auto* plot_opt = run->add_option("--plot-cmd", plot_cmd, "Command run as '<cmd> <out-dir>' after writing outputs");
    run->add_flag("!--no-csv", manifest.emit_csv, "Skip the per-flavor log CSVs");
    run->add_flag("!--no-metrics", manifest.emit_metrics, "Skip the metrics JSON");
    run->add_flag("!--no-compare", manifest.emit_plots, "Skip the comparison data files");

    app.add_subcommand("list", "List bundled scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : airship::cli::kConfigError;
    }

    if (app.got_subcommand("list")) return airship::cli::list_scenarios(std::cout);

    if (*seed_opt) manifest.seed = seed;
    if (*mode_opt) manifest.mode = mode;
    if (*eps_opt) manifest.eps = eps;
    if (*switch_opt) manifest.switch_mode = switch_mode;
    if (*plot_opt) manifest.plot_cmd = plot_cmd;
    return airship::cli::run(manifest, std::cout, std::cerr);
}
