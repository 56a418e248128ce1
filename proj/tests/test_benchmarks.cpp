#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rgpucb/benchmarks.hpp"
#include "rgpucb/sampling.hpp"

using namespace rgpucb;

TEST_CASE("problem catalogue carries the right shapes") {
    const auto dropwave = make_problem("dropwave");
    CHECK(dropwave.dimension == 2);
    CHECK(dropwave.bounds.lower[0] == -5.12);
    CHECK(dropwave.bounds.upper[1] == 5.12);

    const auto sphere = make_problem("sphere");
    CHECK(sphere.dimension == 4);

    const auto alpine2 = make_problem("alpine2");
    CHECK(alpine2.dimension == 5);
    CHECK(alpine2.bounds.lower[0] == 0.0);
    CHECK(alpine2.bounds.upper[0] == 10.0);

    const auto ackley = make_problem("ackley");
    CHECK(ackley.dimension == 5);
    CHECK(ackley.bounds.upper[0] == 32.768);

    CHECK_THROWS_WITH_AS(make_problem("rastrigin"),
                         doctest::Contains("dropwave"), std::invalid_argument);
}

TEST_CASE("sphere is the negated quadratic") {
    const auto p = make_problem("sphere");
    Eigen::VectorXd x(4);
    x << 1.0, 1.0, 1.0, 1.0;
    CHECK(evaluate(p, x) == -4.0);
    CHECK(evaluate(p, Eigen::VectorXd::Zero(4)) == p.optimum_value);
}

TEST_CASE("dropwave values at the centre and the corner") {
    const auto p = make_problem("dropwave");
    CHECK(evaluate(p, Eigen::VectorXd::Zero(2)) == 1.0);
    CHECK(p.optimum_value == 1.0);

    Eigen::VectorXd corner(2);
    corner << 5.12, 5.12;
    // independent evaluation of the reference formula
    const double r = std::hypot(5.12, 5.12);
    const double want = (1.0 + std::cos(12.0 * r)) / (0.5 * r * r + 2.0);
    CHECK(want > 0.0);
    CHECK(evaluate(p, corner) == doctest::Approx(want).epsilon(1e-12));
    CHECK(evaluate(p, corner) == doctest::Approx(0.052294462519818971).epsilon(1e-9));
}

TEST_CASE("ackley is zero at the origin after negation") {
    const auto p = make_problem("ackley");
    CHECK(std::abs(evaluate(p, Eigen::VectorXd::Zero(5))) < 1e-12);
}

TEST_CASE("alpine2 peak location and value") {
    const auto p = make_problem("alpine2");

    // 1-D oracle: ternary search of sqrt(x) sin(x) on [0, 10]
    auto f1 = [](double x) { return std::sqrt(x) * std::sin(x); };
    double lo = 6.0;
    double hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (f1(m1) < f1(m2)) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    const double arg = 0.5 * (lo + hi);
    const double per_dim_max = f1(arg);
    CHECK(p.optimum_value == doctest::Approx(std::pow(per_dim_max, 5)).epsilon(1e-9));
    CHECK(evaluate(p, *p.optimum_point) == doctest::Approx(p.optimum_value).epsilon(1e-6));

    const Eigen::VectorXd x = Eigen::VectorXd::Constant(5, 7.917);
    CHECK(evaluate(p, x) == doctest::Approx(174.61717407591743).epsilon(1e-9));
    CHECK(std::abs(evaluate(p, x) - 174.62) < 0.01);
}

TEST_CASE("alpine2 separates into per-coordinate factors") {
    const auto p5 = make_problem("alpine2");
    RngStream rng(3);
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::VectorXd x(5);
        double prod = 1.0;
        for (int j = 0; j < 5; ++j) {
            x[j] = rng.uniform(0.0, 10.0);
            prod *= std::sqrt(x[j]) * std::sin(x[j]);
        }
        const double got = evaluate(p5, x);
        CHECK(got == doctest::Approx(prod).epsilon(1e-10));
    }
}

TEST_CASE("no sampled point beats the stored optimum") {
    RngStream rng(4);
    for (const auto& name : benchmark_names()) {
        const auto p = make_problem(name);
        const auto pts = latin_hypercube(100000, p.bounds, rng);
        double best = -1e300;
        for (const auto& x : pts) {
            best = std::max(best, evaluate(p, x));
        }
        CHECK(best <= p.optimum_value + 1e-9);
    }
}

TEST_CASE("noisy_evaluate adds calibrated gaussian noise") {
    auto p = make_problem("sphere");
    Eigen::VectorXd x(4);
    x << 0.5, -0.5, 1.0, 0.0;

    p.noise_std = 0.0;
    RngStream rng(5);
    CHECK(noisy_evaluate(p, x, rng).y == evaluate(p, x));

    p.noise_std = 0.1;
    const int n = 100000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y = noisy_evaluate(p, x, rng).y - evaluate(p, x);
        sum += y;
        sum_sq += y * y;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum_sq / n - mean * mean);
    CHECK(sd == doctest::Approx(0.1).epsilon(0.02));

    RngStream r1(6);
    RngStream r2(6);
    CHECK(noisy_evaluate(p, x, r1).y == noisy_evaluate(p, x, r2).y);
}

TEST_CASE("out-of-bounds evaluation is rejected") {
    const auto p = make_problem("dropwave");
    Eigen::VectorXd x(2);
    x << 5.13, 0.0;
    CHECK_THROWS_AS(evaluate(p, x), std::invalid_argument);
    Eigen::VectorXd bad_dim(3);
    bad_dim.setZero();
    CHECK_THROWS_AS(evaluate(p, bad_dim), std::invalid_argument);
}

TEST_CASE("default noise levels are small and positive") {
    for (const auto& name : benchmark_names()) {
        const auto p = make_problem(name);
        CHECK(p.noise_std > 0.0);
        // repeatable: the calibration uses a fixed internal stream
        CHECK(make_problem(name).noise_std == p.noise_std);
    }
}
