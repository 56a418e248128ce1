#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rgpucb/harness.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool need_config) {
    auto* opt = cmd->add_option("--config", args.config_path, "Path to a key-value config file");
    if (need_config) {
        opt->required();
    }
    cmd->add_option("--seed", args.seed, "Base seed (overrides the config)");
    cmd->add_option("--jobs", args.jobs, "Max concurrent repeats")->check(CLI::PositiveNumber);
    cmd->add_option("--out", args.out_dir, "Output directory");
    cmd->add_option("--set", args.overrides, "Override a config key (key=value, repeatable)");
}

rgpucb::RunConfig load_config(const CommonArgs& args) {
    rgpucb::RunConfig config = rgpucb::parse_config_file(args.config_path);
    for (const auto& assignment : args.overrides) {
        rgpucb::apply_override(config, assignment);
    }
    if (args.seed) {
        config.seed = *args.seed;
    }
    rgpucb::validate_config(config);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian optimisation with Gamma-randomised GP-UCB"};
    app.require_subcommand(1);
    app.set_version_flag("--version", RGPUCB_VERSION);

    CommonArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Run all (method x repeat) experiments");
    add_common(run_cmd, run_args, true);

    CommonArgs sweep_args;
    std::vector<double> thetas;
    auto* sweep_cmd = app.add_subcommand("sweep-theta", "Run an rgp-ucb theta sweep");
    add_common(sweep_cmd, sweep_args, true);
    sweep_cmd->add_option("--thetas", thetas, "Theta values to sweep")
        ->required()
        ->delimiter(',');

    rgpucb::VerifyBoundsOptions vb;
    std::string vb_out = "bound_report.json";
    auto* vb_cmd = app.add_subcommand("verify-bounds",
                                      "Audit the Bayesian-regret bound on GP prior draws");
    vb_cmd->add_option("--grid-size", vb.grid_size, "Grid points (<= 4096)");
    vb_cmd->add_option("--dimension", vb.dimension, "Grid dimension (1 or 2)");
    vb_cmd->add_option("--iterations", vb.T, "Iterations per repeat");
    vb_cmd->add_option("--thetas", vb.thetas, "Theta values")->delimiter(',');
    vb_cmd->add_option("--repeats", vb.repeats, "Prior draws per theta");
    vb_cmd->add_option("--lengthscale", vb.lengthscale, "Kernel lengthscale on [0,1]");
    vb_cmd->add_option("--noise-std", vb.noise_std, "Observation noise");
    vb_cmd->add_option("--seed", vb.seed, "Base seed");
    vb_cmd->add_option("--out", vb_out, "Report path (JSON)");

    std::string export_dir;
    auto* export_cmd = app.add_subcommand("export-plot-data",
                                          "Write per-method (iteration, mean, std) CSVs");
    export_cmd->add_option("run_dir", export_dir, "Directory containing traces.csv")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const rgpucb::RunConfig config = load_config(run_args);
            const auto outcome = rgpucb::run_experiments(config, run_args.out_dir, run_args.jobs);
            for (const auto& s : outcome.summaries) {
                std::printf("%-10s", s.method.c_str());
                if (!std::isnan(s.theta)) {
                    std::printf(" theta=%-6g", s.theta);
                } else {
                    std::printf("             ");
                }
                std::printf(" final best %.6g +- %.6g\n", s.final_mean, s.final_std);
            }
            std::printf("wrote %s, %s, %s\n", outcome.trace_path.c_str(),
                        outcome.aggregate_path.c_str(), outcome.manifest_path.c_str());
        } else if (sweep_cmd->parsed()) {
            const rgpucb::RunConfig config = load_config(sweep_args);
            rgpucb::sweep_theta(config, thetas, sweep_args.out_dir, sweep_args.jobs);
            std::printf("wrote %s/sweep.csv\n", sweep_args.out_dir.c_str());
        } else if (vb_cmd->parsed()) {
            rgpucb::verify_bounds(vb, vb_out);
            std::printf("wrote %s\n", vb_out.c_str());
        } else if (export_cmd->parsed()) {
            rgpucb::export_plot_data(export_dir);
            std::printf("wrote plot CSVs under %s\n", export_dir.c_str());
        }
    } catch (const rgpucb::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const rgpucb::RunError& e) {
        std::fprintf(stderr, "run failed: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
