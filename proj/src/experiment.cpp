#include "rgpucb/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rgpucb {

std::string MethodSpec::name() const {
    switch (kind) {
        case AcquisitionKind::RgpUcb: return "rgp-ucb";
        case AcquisitionKind::GpUcb: return "gp-ucb";
        case AcquisitionKind::Ei: return "ei";
        case AcquisitionKind::Thompson: return "thompson";
    }
    return "?";
}

MethodSpec MethodSpec::parse(const std::string& name) {
    MethodSpec spec;
    if (name == "rgp-ucb") {
        spec.kind = AcquisitionKind::RgpUcb;
    } else if (name == "gp-ucb") {
        spec.kind = AcquisitionKind::GpUcb;
    } else if (name == "ei") {
        spec.kind = AcquisitionKind::Ei;
    } else if (name == "thompson") {
        spec.kind = AcquisitionKind::Thompson;
    } else {
        throw std::invalid_argument("unknown method '" + name +
                                    "'; valid: rgp-ucb gp-ucb ei thompson");
    }
    return spec;
}

void ExperimentConfig::resolve_defaults() {
    const int d = problem.dimension;
    if (iterations == 0) iterations = 40 * d;
    if (initial_points == 0) initial_points = 3 * d + 1;
    if (lengthscale == 0.0) lengthscale = 0.1 * problem.bounds.diagonal();
    if (noise_std < 0.0) noise_std = problem.noise_std;
    method.srinivas.d = d;
    if (method.srinivas.r == 0.0) method.srinivas.r = problem.bounds.max_side();
}

void ExperimentConfig::validate() const {
    problem.bounds.validate();
    if (iterations < 1) throw std::invalid_argument("config: iterations must be >= 1");
    if (initial_points < 1) throw std::invalid_argument("config: initial_points must be >= 1");
    if (repeats < 1) throw std::invalid_argument("config: repeats must be >= 1");
    if (!(lengthscale > 0.0)) throw std::invalid_argument("config: lengthscale must be positive");
    if (!(noise_std >= 0.0)) throw std::invalid_argument("config: noise_std must be >= 0");
    if (method.kind == AcquisitionKind::RgpUcb && !(method.gamma.theta > 0.0)) {
        throw std::invalid_argument("config: theta must be positive");
    }
}

namespace {

struct Standardization {
    double mean = 0.0;
    double scale = 1.0;
};

Standardization standardize_stats(const Eigen::VectorXd& y) {
    Standardization s;
    s.mean = y.mean();
    const double var = (y.array() - s.mean).square().mean();
    const double sd = std::sqrt(var);
    s.scale = sd > 1e-12 ? sd : 1.0;
    return s;
}

int thompson_candidate_count(int d) {
    return std::min(2048, 512 * d);
}

}  // namespace

std::vector<IterationRecord> bo_loop(const ExperimentConfig& config, int repeat_index) {
    ExperimentConfig cfg = config;
    cfg.resolve_defaults();
    cfg.validate();
    const BenchmarkProblem& problem = cfg.problem;
    const int d = problem.dimension;

    RngStream rng = RngStream::for_repeat(cfg.base_seed, static_cast<std::uint64_t>(repeat_index));

    const auto design = latin_hypercube(cfg.initial_points, problem.bounds, rng);
    Eigen::MatrixXd xs(cfg.initial_points, d);
    Eigen::VectorXd ys(cfg.initial_points);
    for (int i = 0; i < cfg.initial_points; ++i) {
        xs.row(i) = design[i];
        ys[i] = noisy_evaluate(problem, design[i], rng).y;
    }
    double best = ys.maxCoeff();

    std::vector<IterationRecord> records;
    records.reserve(cfg.iterations);

    for (int i = 0; i < cfg.iterations; ++i) {
        const int t = cfg.initial_points + i;  // observations held when choosing
        const int n = static_cast<int>(ys.size());

        Standardization st;
        if (cfg.standardize) st = standardize_stats(ys);
        const Eigen::VectorXd y_fit = (ys.array() - st.mean) / st.scale;
        KernelParams kp{cfg.lengthscale, cfg.noise_std / st.scale};

        GpModel model;
        try {
            model = fit(Dataset::from_rows(xs.topRows(n), y_fit), kp);
        } catch (const IllConditionedKernelError& e) {
            std::ostringstream msg;
            msg << e.what() << " (bo_loop iteration t=" << t << ")";
            throw IllConditionedKernelError(msg.str(), e.pivot_index());
        }

        IterationRecord rec;
        rec.t = t;
        AcquisitionChoice choice;

        if (cfg.method.kind == AcquisitionKind::Thompson) {
            const auto candidates = latin_hypercube(thompson_candidate_count(d), problem.bounds, rng);
            choice = thompson_select(model, candidates, rng);
        } else {
            double beta = 0.0;
            if (cfg.method.fixed_beta) {
                beta = *cfg.method.fixed_beta;
            } else if (cfg.method.kind == AcquisitionKind::RgpUcb) {
                const double k = kappa(t, cfg.method.gamma.theta);
                rec.kappa = k;
                beta = gamma_sample({std::max(k, cfg.method.gamma.shape_floor),
                                     cfg.method.gamma.theta}, rng);
            } else if (cfg.method.kind == AcquisitionKind::GpUcb) {
                beta = srinivas_beta(t, cfg.method.srinivas);
            }

            BatchSurface surface;
            if (cfg.method.kind == AcquisitionKind::Ei) {
                const double incumbent = y_fit.maxCoeff();
                surface = [&model, incumbent](const Eigen::MatrixXd& pts) {
                    Eigen::VectorXd means, vars;
                    posterior_batch(model, pts, means, vars);
                    Eigen::VectorXd out(means.size());
                    for (int j = 0; j < means.size(); ++j) {
                        out[j] = ei_value({means[j], vars[j]}, incumbent);
                    }
                    return out;
                };
            } else {
                rec.beta = beta;
                surface = [&model, beta](const Eigen::MatrixXd& pts) {
                    Eigen::VectorXd means, vars;
                    posterior_batch(model, pts, means, vars);
                    Eigen::VectorXd out(means.size());
                    for (int j = 0; j < means.size(); ++j) {
                        out[j] = ucb_value({means[j], vars[j]}, beta);
                    }
                    return out;
                };
            }
            choice = maximize_acquisition(surface, problem.bounds, rng, cfg.budget);
            choice.beta_used = rec.beta;
            choice.sigma_at_choice = std::sqrt(posterior(model, choice.point).variance);
        }

        const NoisyObservation obs = noisy_evaluate(problem, choice.point, rng);
        best = std::max(best, obs.y);

        rec.x = choice.point;
        rec.y = obs.y;
        rec.noiseless_f = evaluate(problem, choice.point);
        rec.best_so_far = best;
        rec.sigma_at_choice = choice.sigma_at_choice;
        records.push_back(rec);

        xs.conservativeResize(n + 1, Eigen::NoChange);
        xs.row(n) = choice.point;
        ys.conservativeResize(n + 1);
        ys[n] = obs.y;
    }
    return records;
}

RegretTrace cumulative_regret(const std::vector<IterationRecord>& records, double optimum) {
    if (records.empty()) {
        throw std::invalid_argument("cumulative_regret: records must be non-empty");
    }
    RegretTrace trace;
    trace.per_t_regret.reserve(records.size());
    trace.cumulative.reserve(records.size());
    double running = 0.0;
    for (const auto& rec : records) {
        const double r = optimum - rec.noiseless_f;
        trace.per_t_regret.push_back(r);
        running += r;
        trace.cumulative.push_back(running);
    }
    return trace;
}

std::vector<double> bayes_regret_estimate(const std::vector<RegretTrace>& traces) {
    if (traces.empty()) {
        throw std::invalid_argument("bayes_regret_estimate: need at least one trace");
    }
    const std::size_t len = traces.front().cumulative.size();
    for (const auto& t : traces) {
        if (t.cumulative.size() != len) {
            throw std::invalid_argument("bayes_regret_estimate: traces have unequal lengths");
        }
    }
    std::vector<double> mean(len, 0.0);
    for (const auto& t : traces) {
        for (std::size_t i = 0; i < len; ++i) {
            mean[i] += t.cumulative[i];
        }
    }
    for (auto& v : mean) {
        v /= static_cast<double>(traces.size());
    }
    return mean;
}

double expected_max_beta(int T, double kappa_shape, double theta) {
    if (T < 2) {
        throw std::invalid_argument("expected_max_beta: T must be >= 2");
    }
    const double q = gamma_inverse_cdf(1.0 - 1.0 / static_cast<double>(T), {kappa_shape, theta});
    if (!(q > 0.0)) {
        throw std::domain_error("expected_max_beta: F^-1(1 - 1/T) degenerated to 0");
    }
    return (1.0 + (kappa_shape - 1.0) / q) * std::numbers::egamma + q;
}

namespace {

constexpr double kShapeFloor = 1e-3;
constexpr std::uint64_t kMgfAuditSeed = 0xA0D17B0D5ull;
constexpr int kMgfAuditDraws = 1000000;

// Largest Gamma shape used over the run, after the positivity clamp.
double largest_kappa(const std::vector<IterationRecord>& records, double theta) {
    double k = -std::numeric_limits<double>::infinity();
    for (const auto& rec : records) {
        k = std::max(k, rec.kappa ? *rec.kappa : kappa(rec.t, theta));
    }
    return std::max(k, kShapeFloor);
}

struct BoundTerms {
    double kappa_used = 0.0;
    double emax = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double r34 = 0.0;
    double total = 0.0;
};

BoundTerms bound_terms(const std::vector<IterationRecord>& records, double theta) {
    BoundTerms terms;
    const int T = static_cast<int>(records.size());
    terms.kappa_used = largest_kappa(records, theta);
    terms.emax = expected_max_beta(T, terms.kappa_used, theta);
    double sum_sq = 0.0;
    for (const auto& rec : records) {
        sum_sq += rec.sigma_at_choice * rec.sigma_at_choice;
    }
    terms.r1 = std::sqrt(terms.emax) * std::sqrt(static_cast<double>(T) * sum_sq);
    for (int t = 1; t <= T; ++t) {
        terms.r2 += 1.0 / (static_cast<double>(t) * t + 1.0);
    }
    terms.r34 = std::numbers::pi * std::numbers::pi / 6.0;
    terms.total = terms.r1 + terms.r2 + terms.r34;
    return terms;
}

void fill_mgf_audit(BoundReport& report) {
    RngStream rng(kMgfAuditSeed);
    const GammaParams params{report.kappa_used, report.theta};
    double sum_half = 0.0;
    double sum_sqrt_half = 0.0;
    for (int i = 0; i < kMgfAuditDraws; ++i) {
        const double beta = gamma_sample(params, rng);
        sum_half += std::exp(-0.5 * beta);
        sum_sqrt_half += std::exp(-0.5 * std::sqrt(beta));
    }
    report.mgf_mc_exp_half_beta = sum_half / kMgfAuditDraws;
    report.mgf_mc_exp_half_sqrt_beta = sum_sqrt_half / kMgfAuditDraws;
    report.mgf_closed_form = std::pow(1.0 + report.theta / 2.0, -report.kappa_used);
}

}  // namespace

BoundReport theorem3_bound(const std::vector<IterationRecord>& records, double theta, int T) {
    if (records.empty()) {
        throw std::invalid_argument("theorem3_bound: records must be non-empty");
    }
    if (T != static_cast<int>(records.size())) {
        throw std::invalid_argument("theorem3_bound: T must equal the record count");
    }
    const BoundTerms terms = bound_terms(records, theta);
    BoundReport report;
    report.T = T;
    report.theta = theta;
    report.kappa_used = terms.kappa_used;
    report.expected_max_beta_approx = terms.emax;
    report.r1_term = terms.r1;
    report.r2_term = terms.r2;
    report.r34_term = terms.r34;
    report.bound_value = terms.total;
    fill_mgf_audit(report);
    return report;
}

BoundReport prior_function_check(double lengthscale, int grid_size, int T, double theta,
                                 int repeats, RngStream& rng, int dimension, double noise_std) {
    if (dimension != 1 && dimension != 2) {
        throw std::invalid_argument("prior_function_check: dimension must be 1 or 2");
    }
    if (grid_size < 2 || grid_size > 4096) {
        throw std::invalid_argument("prior_function_check: grid_size must lie in [2, 4096]");
    }
    if (T < 2) throw std::invalid_argument("prior_function_check: T must be >= 2");
    if (repeats < 1) throw std::invalid_argument("prior_function_check: repeats must be >= 1");
    if (!(lengthscale > 0.0)) {
        throw std::invalid_argument("prior_function_check: lengthscale must be positive");
    }

    // Regular grid over [0, 1]^dimension.
    std::vector<Eigen::VectorXd> grid;
    if (dimension == 1) {
        grid.reserve(grid_size);
        for (int i = 0; i < grid_size; ++i) {
            Eigen::VectorXd x(1);
            x[0] = static_cast<double>(i) / (grid_size - 1);
            grid.push_back(x);
        }
    } else {
        const int side = static_cast<int>(std::floor(std::sqrt(static_cast<double>(grid_size))));
        grid.reserve(static_cast<std::size_t>(side) * side);
        for (int i = 0; i < side; ++i) {
            for (int j = 0; j < side; ++j) {
                Eigen::VectorXd x(2);
                x[0] = static_cast<double>(i) / (side - 1);
                x[1] = static_cast<double>(j) / (side - 1);
                grid.push_back(x);
            }
        }
    }
    const int m = static_cast<int>(grid.size());
    Eigen::MatrixXd grid_mat(m, dimension);
    for (int i = 0; i < m; ++i) {
        grid_mat.row(i) = grid[i];
    }

    const KernelParams kp{lengthscale, noise_std};
    const GpModel prior = fit(Dataset::empty(dimension), kp);

    double regret_sum = 0.0;
    double r1_sum = 0.0;
    double bound_sum = 0.0;
    BoundTerms last_terms;
    for (int rep = 0; rep < repeats; ++rep) {
        const std::vector<double> f = joint_posterior_draw(prior, grid, rng);
        const double f_star = *std::max_element(f.begin(), f.end());

        Eigen::MatrixXd xs(T, dimension);
        Eigen::VectorXd ys(T);
        std::vector<IterationRecord> records;
        records.reserve(T);
        double best = -std::numeric_limits<double>::infinity();

        // t indexes the observation being acquired, matching the bound's sum:
        // the surface uses the posterior after t - 1 observations and beta_t.
        for (int t = 1; t <= T; ++t) {
            const GpModel model = fit(
                Dataset::from_rows(xs.topRows(t - 1), ys.head(t - 1)), kp);
            Eigen::VectorXd means, vars;
            posterior_batch(model, grid_mat, means, vars);

            const double k = std::max(kappa(t, theta), kShapeFloor);
            const double beta = gamma_sample({k, theta}, rng);
            const double sqrt_beta = std::sqrt(beta);

            int pick = 0;
            double best_acq = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                const double acq = means[i] + sqrt_beta * std::sqrt(vars[i]);
                if (acq > best_acq) {
                    best_acq = acq;
                    pick = i;
                }
            }

            const double y = f[pick] + noise_std * normal_sample(rng);
            best = std::max(best, y);

            IterationRecord rec;
            rec.t = t;
            rec.x = grid[pick];
            rec.y = y;
            rec.noiseless_f = f[pick];
            rec.best_so_far = best;
            rec.beta = beta;
            rec.kappa = k;
            rec.sigma_at_choice = std::sqrt(vars[pick]);
            records.push_back(rec);

            xs.row(t - 1) = grid[pick];
            ys[t - 1] = y;
        }

        regret_sum += cumulative_regret(records, f_star).cumulative.back();
        last_terms = bound_terms(records, theta);
        r1_sum += last_terms.r1;
        bound_sum += last_terms.total;
    }

    BoundReport report;
    report.T = T;
    report.theta = theta;
    report.kappa_used = last_terms.kappa_used;
    report.expected_max_beta_approx = last_terms.emax;
    report.empirical_bayes_regret = regret_sum / repeats;
    report.r1_term = r1_sum / repeats;
    report.r2_term = last_terms.r2;
    report.r34_term = last_terms.r34;
    report.bound_value = bound_sum / repeats;
    fill_mgf_audit(report);
    return report;
}

AggregateSummary aggregate(const std::vector<std::vector<double>>& best_so_far_traces) {
    if (best_so_far_traces.empty()) {
        throw std::invalid_argument("aggregate: need at least one trace");
    }
    const std::size_t len = best_so_far_traces.front().size();
    if (len == 0) {
        throw std::invalid_argument("aggregate: traces must be non-empty");
    }
    for (const auto& t : best_so_far_traces) {
        if (t.size() != len) {
            throw std::invalid_argument("aggregate: traces have unequal lengths");
        }
    }
    const double n = static_cast<double>(best_so_far_traces.size());
    AggregateSummary summary;
    summary.mean.assign(len, 0.0);
    summary.std.assign(len, 0.0);
    for (std::size_t i = 0; i < len; ++i) {
        double mean = 0.0;
        for (const auto& t : best_so_far_traces) {
            mean += t[i];
        }
        mean /= n;
        double var = 0.0;
        for (const auto& t : best_so_far_traces) {
            const double d = t[i] - mean;
            var += d * d;
        }
        var /= n;  // population std, matching the reported "mean +- std"
        summary.mean[i] = mean;
        summary.std[i] = std::sqrt(var);
    }
    summary.final_mean = summary.mean.back();
    summary.final_std = summary.std.back();
    return summary;
}

}  // namespace rgpucb
