#pragma once

#include <vector>

#include <Eigen/Core>

#include "rgpucb/errors.hpp"
#include "rgpucb/sampling.hpp"

namespace rgpucb {

/// Squared-exponential kernel hyperparameters. Signal variance is fixed at 1,
/// so k(x, x) = 1; callers standardise their observations instead.
struct KernelParams {
    double lengthscale = 1.0;
    double noise_std = 0.0;

    void validate() const;
};

/// Input/output pairs; one point per row of `points`.
struct Dataset {
    Eigen::MatrixXd points;  // n x d
    Eigen::VectorXd values;  // n
    int dimension = 0;       // d, kept explicit so empty datasets know it

    static Dataset empty(int dimension);
    static Dataset from_rows(Eigen::MatrixXd points, Eigen::VectorXd values);

    int size() const { return static_cast<int>(values.size()); }
    void validate() const;
};

struct PosteriorMoments {
    double mean = 0.0;
    double variance = 1.0;
};

/// k_SE(xi, xj) = exp(-|xi - xj|^2 / (2 l^2)).
double se_kernel(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                 const KernelParams& params);

/// Immutable fitted GP: kernel parameters, training data, and the lower
/// Cholesky factor of K + noise_std^2 I. Concurrent posterior queries
/// against one model are safe.
class GpModel {
public:
    const KernelParams& params() const { return params_; }
    const Dataset& data() const { return data_; }
    const Eigen::MatrixXd& chol() const { return chol_; }
    int size() const { return data_.size(); }

private:
    friend GpModel fit(Dataset data, KernelParams params);
    friend PosteriorMoments posterior(const GpModel& model, const Eigen::VectorXd& x);
    friend void posterior_batch(const GpModel& model, const Eigen::MatrixXd& queries,
                                Eigen::VectorXd& means, Eigen::VectorXd& variances);
    friend std::vector<double> joint_posterior_draw(const GpModel& model,
                                                    const std::vector<Eigen::VectorXd>& candidates,
                                                    RngStream& rng);

    KernelParams params_;
    Dataset data_;
    Eigen::MatrixXd chol_;   // lower triangular, n x n
    Eigen::VectorXd alpha_;  // (K + noise^2 I)^-1 y
};

/// Condition the GP on `data`. An empty dataset yields the prior model.
/// Throws IllConditionedKernelError when a Cholesky pivot is non-positive.
GpModel fit(Dataset data, KernelParams params);

/// Posterior mean and variance at x; variance clamped to [0, k(x,x)].
/// A negative variance of magnitude > 1e-6 raises std::logic_error instead
/// of being clamped.
PosteriorMoments posterior(const GpModel& model, const Eigen::VectorXd& x);

/// Batched posterior moments for the m rows of `queries`. Each column is
/// processed exactly like a posterior() call, so values are bitwise equal.
void posterior_batch(const GpModel& model, const Eigen::MatrixXd& queries,
                     Eigen::VectorXd& means, Eigen::VectorXd& variances);

/// One sample from the joint posterior over the candidate set, via the
/// Cholesky factor of the posterior covariance. The covariance diagonal is
/// jittered starting at 1e-10, escalating x10 up to 1e-4, before failing.
std::vector<double> joint_posterior_draw(const GpModel& model,
                                         const std::vector<Eigen::VectorXd>& candidates,
                                         RngStream& rng);

}  // namespace rgpucb
