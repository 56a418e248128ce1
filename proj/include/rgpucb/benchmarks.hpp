#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rgpucb/box.hpp"
#include "rgpucb/sampling.hpp"

namespace rgpucb {

/// A bounded maximisation problem with a known optimum. Traditionally
/// minimised functions are stored negated, so higher is always better.
struct BenchmarkProblem {
    std::string name;
    int dimension = 0;
    Box bounds;
    std::function<double(const Eigen::VectorXd&)> objective;
    double optimum_value = 0.0;
    std::optional<Eigen::VectorXd> optimum_point;
    double noise_std = 0.0;
};

struct NoisyObservation {
    Eigen::VectorXd x;
    double y = 0.0;
};

/// Known problem names, in the order make_problem accepts them.
const std::vector<std::string>& benchmark_names();

/// dropwave (2D), sphere (4D), alpine2 (5D), ackley (5D).
/// Throws std::invalid_argument listing the valid names otherwise.
BenchmarkProblem make_problem(const std::string& name);

/// Noiseless objective value; throws std::invalid_argument out of bounds.
double evaluate(const BenchmarkProblem& problem, const Eigen::VectorXd& x);

/// y = evaluate(x) + noise_std * N(0, 1).
NoisyObservation noisy_evaluate(const BenchmarkProblem& problem,
                                const Eigen::VectorXd& x, RngStream& rng);

}  // namespace rgpucb
