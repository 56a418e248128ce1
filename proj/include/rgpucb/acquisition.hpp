#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "rgpucb/box.hpp"
#include "rgpucb/gp.hpp"
#include "rgpucb/sampling.hpp"

namespace rgpucb {

/// Per-iteration beta drawn from Gamma(kappa_t, theta).
struct GammaBetaSchedule {
    double theta = 1.0;
    /// Shape clamp for iterations where kappa_t <= 0 (only t = 1).
    double shape_floor = 1e-3;
};

/// Parameters of the deterministic beta_t schedule for standard GP-UCB.
struct SrinivasBetaParams {
    double delta = 0.1;
    double a = 1.0;
    double b = 1.0;
    double r = 1.0;  // search-box side length
    int d = 1;       // input dimension
};

/// Result of an acquisition decision.
struct AcquisitionChoice {
    Eigen::VectorXd point;
    double acquisition_value = 0.0;
    std::optional<double> beta_used;
    double sigma_at_choice = 0.0;  // posterior sigma_{t-1} at the chosen point
};

/// Multi-start budget for maximize_acquisition.
struct MaximizerBudget {
    int probes_per_dim = 1000;   // N_probe = probes_per_dim * d
    int starts = 10;             // N_start seeds refined by coordinate descent
    double tol_fraction = 1e-4;  // tol_x = tol_fraction * box diagonal
    int max_passes = 100;        // hard cap on coordinate-descent passes
};

/// kappa_t = ln((t^2 + 1) / sqrt(2 pi)) / ln(1 + theta / 2), unclamped.
/// Negative for t = 1 (2 < sqrt(2 pi)); clamping is the caller's concern.
double kappa(int t, double theta);

/// beta_t ~ Gamma(max(kappa(t, theta), shape_floor), theta).
double rgp_ucb_beta(int t, const GammaBetaSchedule& schedule, RngStream& rng);

/// beta_t = 2 ln(t^2 pi^2 / (3 delta)) + 2 d ln(t^2 d b r sqrt(ln(4 d a / delta))).
/// Throws std::invalid_argument when a log argument <= 1 drives the total negative.
double srinivas_beta(int t, const SrinivasBetaParams& params);

/// alpha(x) = mean + sqrt(beta) * sigma.
double ucb_value(const PosteriorMoments& moments, double beta);

/// Expected improvement over the incumbent; >= 0, with the sigma = 0 limit
/// max(mean - incumbent, 0).
double ei_value(const PosteriorMoments& moments, double incumbent);

/// Draw one joint posterior sample over the candidates and return the argmax
/// (ties broken by lowest index).
AcquisitionChoice thompson_select(const GpModel& model,
                                  const std::vector<Eigen::VectorXd>& candidates,
                                  RngStream& rng);

/// Acquisition surface evaluated on a batch of points (one per row).
using BatchSurface = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;
/// Single-point acquisition surface.
using PointSurface = std::function<double(const Eigen::VectorXd&)>;

/// Multi-start bounded maximiser: N_probe uniform probes, the best N_start
/// refined by coordinate-descent line search until the step falls below
/// tol_x. The returned value dominates every probe evaluated and is exactly
/// the surface value at the returned (in-bounds) point.
AcquisitionChoice maximize_acquisition(const BatchSurface& surface, const Box& bounds,
                                       RngStream& rng, const MaximizerBudget& budget = {});
AcquisitionChoice maximize_acquisition(const PointSurface& surface, const Box& bounds,
                                       RngStream& rng, const MaximizerBudget& budget = {});

}  // namespace rgpucb
