#pragma once

#include <Eigen/Core>

namespace rgpucb {

/// Axis-aligned search box with finite lower < upper bounds per dimension.
struct Box {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    static Box cube(int dimension, double lo, double hi);

    int dimension() const { return static_cast<int>(lower.size()); }
    double diagonal() const { return (upper - lower).norm(); }
    double max_side() const { return (upper - lower).maxCoeff(); }
    bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;

    /// Throws std::invalid_argument on non-finite or degenerate bounds.
    void validate() const;
};

}  // namespace rgpucb
