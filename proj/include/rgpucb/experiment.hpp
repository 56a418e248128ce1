#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rgpucb/acquisition.hpp"
#include "rgpucb/benchmarks.hpp"
#include "rgpucb/gp.hpp"

namespace rgpucb {

enum class AcquisitionKind { RgpUcb, GpUcb, Ei, Thompson };

/// Acquisition identifier plus the parameters it needs.
struct MethodSpec {
    AcquisitionKind kind = AcquisitionKind::RgpUcb;
    GammaBetaSchedule gamma;      // rgp-ucb
    SrinivasBetaParams srinivas;  // gp-ucb
    /// When set, UCB variants use this beta every iteration instead of
    /// their schedule (test hook for the beta = 0 exploitation limit).
    std::optional<double> fixed_beta;

    std::string name() const;
    static MethodSpec parse(const std::string& name);  // "rgp-ucb" | "gp-ucb" | "ei" | "thompson"
};

struct ExperimentConfig {
    BenchmarkProblem problem;
    MethodSpec method;
    int iterations = 0;      // T; resolve_defaults() fills 40 * d when 0
    int initial_points = 0;  // 3 * d + 1 when 0
    int repeats = 10;
    double lengthscale = 0.0;  // 0.1 * box diagonal when 0
    double noise_std = -1.0;   // GP model noise; problem.noise_std when negative
    std::uint64_t base_seed = 0;
    bool standardize = true;  // standardise observations before each fit
    MaximizerBudget budget;

    void resolve_defaults();
    void validate() const;
};

/// One post-initialisation BO iteration. `t` is the Alg.-1 index: the number
/// of observations held when the point was chosen.
struct IterationRecord {
    int t = 0;
    Eigen::VectorXd x;
    double y = 0.0;            // noisy observation, original units
    double noiseless_f = 0.0;  // original units
    double best_so_far = 0.0;  // max observed y including the initial design
    std::optional<double> beta;
    std::optional<double> kappa;
    double sigma_at_choice = 0.0;  // GP posterior sigma (model units)
};

struct RegretTrace {
    std::vector<double> per_t_regret;  // f(x*) - f(x_t)
    std::vector<double> cumulative;    // prefix sums
};

/// Evaluation of the Bayesian-regret bound
///   sqrt([1 + (kappa_T - 1)/F^-1(1 - 1/T)] gamma + F^-1(1 - 1/T))
///     * sqrt(T * sum sigma_{t-1}(x_t)^2)  +  sum 1/(t^2 + 1)  +  pi^2/6
/// with kappa_T the largest shape over the run. The variance form
/// sum sigma^2 is used throughout (the published intermediate line shows
/// sum sigma, but both the final statement and its derivation square it).
struct BoundReport {
    int T = 0;
    double theta = 0.0;
    double kappa_used = 0.0;            // kappa_T after the shape-floor clamp
    double empirical_bayes_regret = 0.0;  // mean cumulative regret over repeats
    double bound_value = 0.0;            // r1 + r2 + r34
    double r1_term = 0.0;
    double r2_term = 0.0;
    double r34_term = 0.0;               // pi^2 / 6
    double expected_max_beta_approx = 0.0;
    // Monte-Carlo audit of the closed form (1 + theta/2)^-kappa: the first
    // entry is E[exp(-beta/2)] (the Gamma MGF, which matches it); the second
    // is E[exp(-sqrt(beta)/2)] (the quantity the proof actually needs, which
    // the closed form does not model). Both are reported, neither is hidden.
    double mgf_mc_exp_half_beta = 0.0;
    double mgf_mc_exp_half_sqrt_beta = 0.0;
    double mgf_closed_form = 0.0;
};

struct AggregateSummary {
    std::vector<double> mean;  // per-iteration mean of best_so_far
    std::vector<double> std;   // population standard deviation
    double final_mean = 0.0;
    double final_std = 0.0;
};

/// Run one repeat of the BO loop. Deterministic given (config, repeat_index).
/// GP ill-conditioning is rethrown with the iteration index attached.
std::vector<IterationRecord> bo_loop(const ExperimentConfig& config, int repeat_index);

/// per_t_regret[i] = optimum - noiseless_f[i]; cumulative = prefix sums.
RegretTrace cumulative_regret(const std::vector<IterationRecord>& records, double optimum);

/// Pointwise mean over repeats of cumulative regret (Monte-Carlo BR_T).
std::vector<double> bayes_regret_estimate(const std::vector<RegretTrace>& traces);

/// E[max of T Gamma(kappa, theta) draws], approximated as
/// [1 + (kappa - 1)/F^-1(1 - 1/T)] gamma + F^-1(1 - 1/T).
/// Throws std::domain_error when the quantile degenerates to 0.
double expected_max_beta(int T, double kappa, double theta);

/// Evaluate the bound over one run's records. Requires T == records.size().
/// The Monte-Carlo MGF audit uses 1e6 draws from a fixed internal seed.
BoundReport theorem3_bound(const std::vector<IterationRecord>& records, double theta, int T);

/// Draw `repeats` functions from the zero-mean SE prior on a regular grid
/// over [0,1]^dimension, run grid-restricted RGP-UCB on each, and report the
/// mean cumulative regret next to the bound (bound averaged over repeats).
BoundReport prior_function_check(double lengthscale, int grid_size, int T, double theta,
                                 int repeats, RngStream& rng, int dimension = 1,
                                 double noise_std = 0.01);

/// Per-iteration mean/std of best_so_far across equal-length repeat traces.
AggregateSummary aggregate(const std::vector<std::vector<double>>& best_so_far_traces);

}  // namespace rgpucb
