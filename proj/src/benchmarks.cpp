#include "rgpucb/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rgpucb {

namespace {

// Alpine 2 per-dimension maximiser of sqrt(x) sin(x) on [0, 10].
constexpr double kAlpine2ArgMax = 7.917052684666207;
constexpr double kAlpine2Max = 2.8081311800070049;

double dropwave(const Eigen::VectorXd& x) {
    const double r2 = x.squaredNorm();
    return (1.0 + std::cos(12.0 * std::sqrt(r2))) / (0.5 * r2 + 2.0);
}

double neg_sphere(const Eigen::VectorXd& x) {
    return -x.squaredNorm();
}

double alpine2(const Eigen::VectorXd& x) {
    double prod = 1.0;
    for (int i = 0; i < x.size(); ++i) {
        prod *= std::sqrt(x[i]) * std::sin(x[i]);
    }
    return prod;
}

double ackley_negated(const Eigen::VectorXd& x) {
    const double n = static_cast<double>(x.size());
    const double a = 20.0;
    const double b = 0.2;
    const double c = 2.0 * std::numbers::pi;
    const double rms = std::sqrt(x.squaredNorm() / n);
    double cos_sum = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        cos_sum += std::cos(c * x[i]);
    }
    return a * std::exp(-b * rms) + std::exp(cos_sum / n) - a - std::numbers::e;
}

// Default observation noise: 1% of the gap between the optimum and the
// median objective value over 10^4 uniform points (fixed internal seed, so
// problems are identical across runs).
double default_noise_std(const BenchmarkProblem& problem) {
    RngStream rng(0x6E015EEDull);
    const int n = 10000;
    std::vector<double> values(n);
    Eigen::VectorXd x(problem.dimension);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < problem.dimension; ++j) {
            x[j] = rng.uniform(problem.bounds.lower[j], problem.bounds.upper[j]);
        }
        values[i] = problem.objective(x);
    }
    auto mid = values.begin() + n / 2;
    std::nth_element(values.begin(), mid, values.end());
    return 0.01 * std::abs(problem.optimum_value - *mid);
}

}  // namespace

const std::vector<std::string>& benchmark_names() {
    static const std::vector<std::string> names = {"dropwave", "sphere", "alpine2", "ackley"};
    return names;
}

BenchmarkProblem make_problem(const std::string& name) {
    BenchmarkProblem p;
    p.name = name;
    if (name == "dropwave") {
        p.dimension = 2;
        p.bounds = Box::cube(2, -5.12, 5.12);
        p.objective = dropwave;
        p.optimum_value = 1.0;
        p.optimum_point = Eigen::VectorXd::Zero(2);
    } else if (name == "sphere") {
        p.dimension = 4;
        p.bounds = Box::cube(4, -5.12, 5.12);
        p.objective = neg_sphere;
        p.optimum_value = 0.0;
        p.optimum_point = Eigen::VectorXd::Zero(4);
    } else if (name == "alpine2") {
        p.dimension = 5;
        p.bounds = Box::cube(5, 0.0, 10.0);
        p.objective = alpine2;
        p.optimum_value = std::pow(kAlpine2Max, 5);
        p.optimum_point = Eigen::VectorXd::Constant(5, kAlpine2ArgMax);
    } else if (name == "ackley") {
        p.dimension = 5;
        p.bounds = Box::cube(5, -32.768, 32.768);
        p.objective = ackley_negated;
        p.optimum_value = 0.0;
        p.optimum_point = Eigen::VectorXd::Zero(5);
    } else {
        std::ostringstream msg;
        msg << "unknown benchmark '" << name << "'; valid names:";
        for (const auto& n : benchmark_names()) {
            msg << ' ' << n;
        }
        throw std::invalid_argument(msg.str());
    }
    p.noise_std = default_noise_std(p);
    return p;
}

double evaluate(const BenchmarkProblem& problem, const Eigen::VectorXd& x) {
    if (x.size() != problem.dimension) {
        throw std::invalid_argument("evaluate: point dimension mismatch");
    }
    if (!problem.bounds.contains(x)) {
        throw std::invalid_argument("evaluate: point outside the search bounds");
    }
    return problem.objective(x);
}

NoisyObservation noisy_evaluate(const BenchmarkProblem& problem,
                                const Eigen::VectorXd& x, RngStream& rng) {
    const double f = evaluate(problem, x);
    return {x, f + problem.noise_std * normal_sample(rng)};
}

}  // namespace rgpucb
