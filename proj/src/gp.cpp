#include "rgpucb/gp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace rgpucb {

void KernelParams::validate() const {
    if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
        throw std::invalid_argument("KernelParams: lengthscale must be positive");
    }
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
        throw std::invalid_argument("KernelParams: noise_std must be non-negative");
    }
}

Dataset Dataset::empty(int dimension) {
    Dataset data;
    data.dimension = dimension;
    data.points.resize(0, dimension);
    data.values.resize(0);
    return data;
}

Dataset Dataset::from_rows(Eigen::MatrixXd points, Eigen::VectorXd values) {
    Dataset data;
    data.dimension = static_cast<int>(points.cols());
    data.points = std::move(points);
    data.values = std::move(values);
    data.validate();
    return data;
}

void Dataset::validate() const {
    if (points.rows() != values.size()) {
        throw std::invalid_argument("Dataset: points and values must have equal length");
    }
    if (points.cols() != dimension) {
        throw std::invalid_argument("Dataset: points must have `dimension` coordinates");
    }
    if (dimension < 1) {
        throw std::invalid_argument("Dataset: dimension must be positive");
    }
}

double se_kernel(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                 const KernelParams& params) {
    params.validate();
    if (xi.size() != xj.size()) {
        throw std::invalid_argument("se_kernel: dimension mismatch");
    }
    const double sq = (xi - xj).squaredNorm();
    return std::exp(-sq / (2.0 * params.lengthscale * params.lengthscale));
}

namespace {

// Left-looking in-place Cholesky; throws with the first non-positive pivot.
void cholesky_lower_inplace(Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < j; ++k) {
            const double ajk = a(j, k);
            for (int i = j; i < n; ++i) {
                a(i, j) -= a(i, k) * ajk;
            }
        }
        const double pivot = a(j, j);
        if (!(pivot > 0.0)) {
            std::ostringstream msg;
            msg << "ill-conditioned kernel matrix: non-positive Cholesky pivot at index " << j;
            throw IllConditionedKernelError(msg.str(), j);
        }
        const double root = std::sqrt(pivot);
        a(j, j) = root;
        for (int i = j + 1; i < n; ++i) {
            a(i, j) /= root;
        }
    }
    a.triangularView<Eigen::StrictlyUpper>().setZero();
}

// K_*(i, j) = k(train_i, query_j). Each column is computed independently so
// results do not depend on how queries are batched.
Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& train, const Eigen::MatrixXd& queries,
                             double lengthscale) {
    const int n = static_cast<int>(train.rows());
    const int m = static_cast<int>(queries.rows());
    const int d = static_cast<int>(train.cols());
    const double denom = 2.0 * lengthscale * lengthscale;
    Eigen::MatrixXd k(n, m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) {
            double sq = 0.0;
            for (int c = 0; c < d; ++c) {
                const double diff = train(i, c) - queries(j, c);
                sq += diff * diff;
            }
            k(i, j) = std::exp(-sq / denom);
        }
    }
    return k;
}

}  // namespace

GpModel fit(Dataset data, KernelParams params) {
    params.validate();
    data.validate();
    const int n = data.size();

    GpModel model;
    model.params_ = params;
    model.data_ = std::move(data);
    model.chol_.resize(n, n);
    model.alpha_.resize(n);
    if (n == 0) {
        return model;
    }

    Eigen::MatrixXd k(n, n);
    for (int i = 0; i < n; ++i) {
        k(i, i) = 1.0 + params.noise_std * params.noise_std;
        for (int j = 0; j < i; ++j) {
            const double v = se_kernel(model.data_.points.row(i), model.data_.points.row(j), params);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    cholesky_lower_inplace(k);
    model.chol_ = std::move(k);

    model.alpha_ = model.data_.values;
    model.chol_.triangularView<Eigen::Lower>().solveInPlace(model.alpha_);
    model.chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(model.alpha_);
    return model;
}

void posterior_batch(const GpModel& model, const Eigen::MatrixXd& queries,
                     Eigen::VectorXd& means, Eigen::VectorXd& variances) {
    if (queries.cols() != model.data_.dimension) {
        throw std::invalid_argument("posterior: query dimension mismatch");
    }
    const int m = static_cast<int>(queries.rows());
    means.resize(m);
    variances.resize(m);
    if (model.size() == 0) {
        means.setZero();
        variances.setOnes();
        return;
    }
    const Eigen::MatrixXd kstar = cross_kernel(model.data_.points, queries, model.params_.lengthscale);
    Eigen::VectorXd v(model.size());
    for (int j = 0; j < m; ++j) {
        means[j] = kstar.col(j).dot(model.alpha_);
        v = kstar.col(j);
        model.chol_.triangularView<Eigen::Lower>().solveInPlace(v);
        double variance = 1.0 - v.squaredNorm();
        if (variance < -1e-6) {
            throw std::logic_error("posterior: variance fell below -1e-6, inconsistent factorisation");
        }
        variances[j] = std::clamp(variance, 0.0, 1.0);
    }
}

PosteriorMoments posterior(const GpModel& model, const Eigen::VectorXd& x) {
    Eigen::VectorXd means;
    Eigen::VectorXd variances;
    posterior_batch(model, x.transpose(), means, variances);
    return {means[0], variances[0]};
}

std::vector<double> joint_posterior_draw(const GpModel& model,
                                         const std::vector<Eigen::VectorXd>& candidates,
                                         RngStream& rng) {
    if (candidates.empty()) {
        throw std::invalid_argument("joint_posterior_draw: candidates must be non-empty");
    }
    const int m = static_cast<int>(candidates.size());
    const int d = model.data_.dimension;
    Eigen::MatrixXd q(m, d);
    for (int i = 0; i < m; ++i) {
        if (candidates[i].size() != d) {
            throw std::invalid_argument("joint_posterior_draw: candidate dimension mismatch");
        }
        q.row(i) = candidates[i];
    }

    Eigen::MatrixXd cov(m, m);
    for (int i = 0; i < m; ++i) {
        cov(i, i) = 1.0;
        for (int j = 0; j < i; ++j) {
            const double v = se_kernel(candidates[i], candidates[j], model.params_);
            cov(i, j) = v;
            cov(j, i) = v;
        }
    }

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
    if (model.size() > 0) {
        const Eigen::MatrixXd kstar = cross_kernel(model.data_.points, q, model.params_.lengthscale);
        mean = kstar.transpose() * model.alpha_;
        Eigen::MatrixXd v = kstar;
        model.chol_.triangularView<Eigen::Lower>().solveInPlace(v);
        cov.noalias() -= v.transpose() * v;
    }

    Eigen::LLT<Eigen::MatrixXd> llt;
    bool ok = false;
    for (double jitter = 1e-10; jitter <= 1.0000001e-4; jitter *= 10.0) {
        Eigen::MatrixXd jittered = cov;
        jittered.diagonal().array() += jitter;
        llt.compute(jittered);
        if (llt.info() == Eigen::Success) {
            ok = true;
            break;
        }
    }
    if (!ok) {
        throw IllConditionedKernelError(
            "joint_posterior_draw: covariance not factorisable even with 1e-4 jitter", -1);
    }

    Eigen::VectorXd z(m);
    for (int i = 0; i < m; ++i) {
        z[i] = normal_sample(rng);
    }
    const Eigen::VectorXd sample = mean + llt.matrixL() * z;
    return {sample.data(), sample.data() + m};
}

}  // namespace rgpucb
