#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "rgpucb/box.hpp"

namespace rgpucb {

/// Deterministic seeded random stream (xoshiro256++, seeded via splitmix64).
/// Identical seeds yield identical sequences. A stream is owned by exactly
/// one logical task; hand each concurrent task its own stream.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    /// Stream for repeat r of an experiment:
    /// seed = base_seed XOR (r * 0x9E3779B97F4A7C15).
    static RngStream for_repeat(std::uint64_t base_seed, std::uint64_t repeat_index);

    std::uint64_t next_u64();
    double uniform();                       // [0, 1)
    double uniform_open();                  // (0, 1)
    double uniform(double lo, double hi);   // [lo, hi)

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_;
};

/// Gamma distribution parameters: shape kappa, scale theta (mean = kappa*theta).
struct GammaParams {
    double shape = 1.0;
    double scale = 1.0;
};

/// One standard-normal variate (Box-Muller; consumes exactly two uniforms).
double normal_sample(RngStream& rng);

/// One Gamma(shape, scale) variate, strictly positive.
/// Marsaglia-Tsang squeeze for shape >= 1; for shape < 1 the boost
/// Gamma(shape + 1) * U^(1/shape). Throws std::invalid_argument when
/// shape <= 0 or scale <= 0.
double gamma_sample(const GammaParams& params, RngStream& rng);

/// Regularised lower incomplete gamma P(shape, x / scale), i.e. the CDF.
double gamma_cdf(double x, const GammaParams& params);

/// x such that gamma_cdf(x) = p, to ~1e-10 relative accuracy.
/// Requires 0 <= p < 1.
double gamma_inverse_cdf(double p, const GammaParams& params);

/// n-point Latin hypercube design: per dimension exactly one point per
/// equal-width stratum, jittered uniformly within its stratum.
std::vector<Eigen::VectorXd> latin_hypercube(int n, const Box& bounds, RngStream& rng);

}  // namespace rgpucb
