#include "rgpucb/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace rgpucb {

double kappa(int t, double theta) {
    if (t < 1) {
        throw std::invalid_argument("kappa: t must be >= 1");
    }
    if (!(theta > 0.0)) {
        throw std::invalid_argument("kappa: theta must be positive");
    }
    const double tt = static_cast<double>(t) * static_cast<double>(t) + 1.0;
    return std::log(tt / std::sqrt(2.0 * std::numbers::pi)) / std::log1p(theta / 2.0);
}

double rgp_ucb_beta(int t, const GammaBetaSchedule& schedule, RngStream& rng) {
    const double shape = std::max(kappa(t, schedule.theta), schedule.shape_floor);
    return gamma_sample({shape, schedule.theta}, rng);
}

double srinivas_beta(int t, const SrinivasBetaParams& params) {
    if (t < 1) {
        throw std::invalid_argument("srinivas_beta: t must be >= 1");
    }
    if (!(params.delta > 0.0) || !(params.delta < 1.0)) {
        throw std::invalid_argument("srinivas_beta: delta must lie in (0, 1)");
    }
    if (!(params.a > 0.0) || !(params.b > 0.0) || !(params.r > 0.0) || params.d < 1) {
        throw std::invalid_argument("srinivas_beta: a, b, r must be positive and d >= 1");
    }
    const double td = static_cast<double>(t);
    const double dd = static_cast<double>(params.d);
    const double inner = std::log(4.0 * dd * params.a / params.delta);
    if (!(inner > 0.0)) {
        throw std::invalid_argument("srinivas_beta: log(4da/delta) is not positive");
    }
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double total = 2.0 * std::log(td * td * pi2 / (3.0 * params.delta)) +
                         2.0 * dd * std::log(td * td * dd * params.b * params.r * std::sqrt(inner));
    if (!(total > 0.0)) {
        throw std::invalid_argument("srinivas_beta: parameters drive beta_t negative");
    }
    return total;
}

double ucb_value(const PosteriorMoments& moments, double beta) {
    if (!(beta >= 0.0)) {
        throw std::invalid_argument("ucb_value: beta must be non-negative");
    }
    return moments.mean + std::sqrt(beta) * std::sqrt(moments.variance);
}

namespace {

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

double ei_value(const PosteriorMoments& moments, double incumbent) {
    const double sigma = std::sqrt(moments.variance);
    const double gap = moments.mean - incumbent;
    if (sigma <= 0.0) {
        return std::max(gap, 0.0);
    }
    const double z = gap / sigma;
    return std::max(gap * normal_cdf(z) + sigma * normal_pdf(z), 0.0);
}

AcquisitionChoice thompson_select(const GpModel& model,
                                  const std::vector<Eigen::VectorXd>& candidates,
                                  RngStream& rng) {
    const std::vector<double> sample = joint_posterior_draw(model, candidates, rng);
    std::size_t best = 0;
    for (std::size_t i = 1; i < sample.size(); ++i) {
        if (sample[i] > sample[best]) {
            best = i;
        }
    }
    AcquisitionChoice choice;
    choice.point = candidates[best];
    choice.acquisition_value = sample[best];
    choice.sigma_at_choice = std::sqrt(posterior(model, candidates[best]).variance);
    return choice;
}

namespace {

struct Incumbent {
    Eigen::VectorXd point;
    double value = -std::numeric_limits<double>::infinity();

    void offer(const Eigen::VectorXd& x, double v) {
        if (v > value) {
            value = v;
            point = x;
        }
    }
};

}  // namespace

AcquisitionChoice maximize_acquisition(const BatchSurface& surface, const Box& bounds,
                                       RngStream& rng, const MaximizerBudget& budget) {
    bounds.validate();
    const int d = bounds.dimension();
    const int n_probe = std::max(budget.probes_per_dim * d, 1);
    const double tol_x = budget.tol_fraction * bounds.diagonal();
    const double max_side = bounds.max_side();

    Eigen::MatrixXd probes(n_probe, d);
    for (int i = 0; i < n_probe; ++i) {
        for (int j = 0; j < d; ++j) {
            probes(i, j) = rng.uniform(bounds.lower[j], bounds.upper[j]);
        }
    }
    const Eigen::VectorXd probe_values = surface(probes);

    Incumbent best;
    for (int i = 0; i < n_probe; ++i) {
        best.offer(probes.row(i), probe_values[i]);
    }

    // Seed the refinement with the best probes (stable order on ties).
    const int n_start = std::min(budget.starts, n_probe);
    std::vector<int> order(n_probe);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return probe_values[a] > probe_values[b]; });

    struct Start {
        Eigen::VectorXd x;
        double value;
        double step_fraction = 0.1;
        bool improved = false;
        bool active = true;
    };
    std::vector<Start> starts(n_start);
    for (int s = 0; s < n_start; ++s) {
        starts[s].x = probes.row(order[s]);
        starts[s].value = probe_values[order[s]];
    }

    Eigen::MatrixXd batch(2 * n_start, d);
    for (int pass = 0; pass < budget.max_passes; ++pass) {
        std::vector<int> active;
        for (int s = 0; s < n_start; ++s) {
            if (starts[s].active) {
                starts[s].improved = false;
                active.push_back(s);
            }
        }
        if (active.empty()) {
            break;
        }
        for (int j = 0; j < d; ++j) {
            const int na = static_cast<int>(active.size());
            for (int k = 0; k < na; ++k) {
                const Start& st = starts[active[k]];
                const double step = st.step_fraction * (bounds.upper[j] - bounds.lower[j]);
                Eigen::VectorXd up = st.x;
                up[j] = std::min(up[j] + step, bounds.upper[j]);
                Eigen::VectorXd down = st.x;
                down[j] = std::max(down[j] - step, bounds.lower[j]);
                batch.row(2 * k) = up;
                batch.row(2 * k + 1) = down;
            }
            const Eigen::VectorXd values = surface(batch.topRows(2 * na));
            for (int k = 0; k < na; ++k) {
                Start& st = starts[active[k]];
                const double v_up = values[2 * k];
                const double v_down = values[2 * k + 1];
                if (v_up > st.value && v_up >= v_down) {
                    st.x = batch.row(2 * k);
                    st.value = v_up;
                    st.improved = true;
                } else if (v_down > st.value) {
                    st.x = batch.row(2 * k + 1);
                    st.value = v_down;
                    st.improved = true;
                }
                best.offer(batch.row(2 * k), v_up);
                best.offer(batch.row(2 * k + 1), v_down);
            }
        }
        for (int s : active) {
            if (!starts[s].improved) {
                starts[s].step_fraction *= 0.5;
                if (starts[s].step_fraction * max_side < tol_x) {
                    starts[s].active = false;
                }
            }
        }
    }

    AcquisitionChoice choice;
    choice.point = best.point;
    choice.acquisition_value = best.value;
    return choice;
}

AcquisitionChoice maximize_acquisition(const PointSurface& surface, const Box& bounds,
                                       RngStream& rng, const MaximizerBudget& budget) {
    BatchSurface batched = [&surface](const Eigen::MatrixXd& points) {
        Eigen::VectorXd values(points.rows());
        for (int i = 0; i < points.rows(); ++i) {
            values[i] = surface(points.row(i).transpose());
        }
        return values;
    };
    return maximize_acquisition(batched, bounds, rng, budget);
}

}  // namespace rgpucb
