#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rgpucb/experiment.hpp"

namespace rgpucb {

/// Config-file or override problem: invalid key/value, with the offending
/// location ("file:line" or the key name) in the message. Maps to exit 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure while executing runs, carrying method/repeat/iteration context.
/// Maps to exit 1.
class RunError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat key-value run configuration. Zero / negative sentinels mean
/// "resolve the documented default" (resolved values land in the manifest).
struct RunConfig {
    std::string problem = "sphere";
    std::vector<std::string> methods = {"rgp-ucb"};
    double theta = 1.0;
    double delta = 0.1;
    double a = 1.0;
    double b = 1.0;
    double r = 0.0;            // 0 -> max box side
    int iterations = 0;        // 0 -> 40 * d
    int initial_points = 0;    // 0 -> 3 * d + 1
    int repeats = 10;
    double lengthscale = 0.0;  // 0 -> 0.1 * box diagonal
    double noise_std = -1.0;   // < 0 -> problem default
    std::uint64_t seed = 0;
};

/// Parse `key = value` lines ('#' comments, blank lines allowed).
/// Accepts either the flat text format or a manifest JSON (re-run support).
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& source);

/// Apply a "key=value" override (the --set flag).
void apply_override(RunConfig& config, const std::string& assignment);

/// Validate ranges; throws ConfigError naming the offending key.
void validate_config(const RunConfig& config);

/// Build the per-method experiment config with every default resolved.
ExperimentConfig make_experiment_config(const RunConfig& config, const std::string& method);

struct MethodSummary {
    std::string method;
    double theta = 0.0;  // NaN when not applicable
    double final_mean = 0.0;
    double final_std = 0.0;
};

struct RunOutcome {
    std::vector<MethodSummary> summaries;
    std::string trace_path;
    std::string aggregate_path;
    std::string manifest_path;
};

/// Execute all (method x repeat) runs; write traces.csv, aggregate.csv and
/// manifest.json under out_dir. Output bytes are identical for any `jobs`.
RunOutcome run_experiments(const RunConfig& config, const std::string& out_dir, int jobs = 1);

/// One rgp-ucb run per theta; writes sweep.csv (final best mean +- std rows).
void sweep_theta(const RunConfig& config, const std::vector<double>& thetas,
                 const std::string& out_dir, int jobs = 1);

struct VerifyBoundsOptions {
    int grid_size = 256;
    int dimension = 1;
    int T = 50;
    std::vector<double> thetas = {0.5, 1.0, 8.0};
    int repeats = 20;
    double lengthscale = 0.2;
    double noise_std = 0.01;
    std::uint64_t seed = 0;
};

/// Run prior_function_check per theta and write the reports as JSON.
void verify_bounds(const VerifyBoundsOptions& options, const std::string& out_path);

/// Recompute per-(problem, method) aggregates from traces.csv in run_dir and
/// write one `iteration,mean_best,std_best` CSV per series.
void export_plot_data(const std::string& run_dir);

/// Shortest decimal text that round-trips a double (17 significant digits).
std::string format_g17(double v);

}  // namespace rgpucb
