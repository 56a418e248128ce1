#include "rgpucb/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rgpucb {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix64(std::uint64_t& x) {
    x += kGoldenGamma;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
        word = splitmix64(s);
    }
}

RngStream RngStream::for_repeat(std::uint64_t base_seed, std::uint64_t repeat_index) {
    return RngStream(base_seed ^ (repeat_index * kGoldenGamma));
}

std::uint64_t RngStream::next_u64() {
    // xoshiro256++
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double normal_sample(RngStream& rng) {
    const double u1 = rng.uniform_open();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double gamma_sample(const GammaParams& params, RngStream& rng) {
    if (!(params.shape > 0.0) || !(params.scale > 0.0)) {
        throw std::invalid_argument("gamma_sample: shape and scale must be positive");
    }
    const double a = params.shape;
    if (a < 1.0) {
        // Boost to shape a+1, then multiply by U^(1/a).
        const double boosted = gamma_sample({a + 1.0, params.scale}, rng);
        const double u = rng.uniform_open();
        const double value = boosted * std::pow(u, 1.0 / a);
        // U^(1/a) underflows for tiny shapes; keep the positivity contract.
        return std::max(value, std::numeric_limits<double>::min());
    }
    // Marsaglia-Tsang squeeze.
    const double d = a - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal_sample(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform_open();
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) {
            return d * v * params.scale;
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v * params.scale;
        }
    }
}

namespace {

// Regularised lower incomplete gamma P(a, x): series expansion for
// x < a + 1, Lentz continued fraction for the complement otherwise.
double incomplete_gamma_p(double a, double x) {
    if (x <= 0.0) {
        return 0.0;
    }
    const double lgam = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int n = 0; n < 1000; ++n) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16) {
                break;
            }
        }
        return sum * std::exp(-x + a * std::log(x) - lgam);
    }
    // Continued fraction for Q(a, x), modified Lentz.
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            break;
        }
    }
    const double q = std::exp(-x + a * std::log(x) - lgam) * h;
    return 1.0 - q;
}

}  // namespace

double gamma_cdf(double x, const GammaParams& params) {
    if (!(params.shape > 0.0) || !(params.scale > 0.0)) {
        throw std::invalid_argument("gamma_cdf: shape and scale must be positive");
    }
    if (x <= 0.0) {
        return 0.0;
    }
    return std::clamp(incomplete_gamma_p(params.shape, x / params.scale), 0.0, 1.0);
}

double gamma_inverse_cdf(double p, const GammaParams& params) {
    if (!(params.shape > 0.0) || !(params.scale > 0.0)) {
        throw std::invalid_argument("gamma_inverse_cdf: shape and scale must be positive");
    }
    if (!(p >= 0.0) || p >= 1.0) {
        throw std::invalid_argument("gamma_inverse_cdf: p must lie in [0, 1)");
    }
    if (p == 0.0) {
        return 0.0;
    }
    const double a = params.shape;
    // Bracket in the scale-free variable, then bisect; Newton polish at the end.
    double lo = 0.0;
    double hi = std::max(a, 1.0);
    while (incomplete_gamma_p(a, hi) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) {
            break;
        }
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (incomplete_gamma_p(a, mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-13 * std::max(hi, 1e-300)) {
            break;
        }
    }
    double x = 0.5 * (lo + hi);
    // Newton steps on P(a, x) - p; the density is exp((a-1) ln x - x - lgam).
    const double lgam = std::lgamma(a);
    for (int i = 0; i < 4; ++i) {
        if (x <= 0.0) {
            break;
        }
        const double f = incomplete_gamma_p(a, x) - p;
        const double pdf = std::exp((a - 1.0) * std::log(x) - x - lgam);
        if (pdf <= 0.0 || !std::isfinite(pdf)) {
            break;
        }
        const double step = f / pdf;
        const double next = x - step;
        if (next <= lo || next >= hi) {
            break;
        }
        x = next;
        if (std::abs(step) <= 1e-12 * x) {
            break;
        }
    }
    return x * params.scale;
}

std::vector<Eigen::VectorXd> latin_hypercube(int n, const Box& bounds, RngStream& rng) {
    if (n < 1) {
        throw std::invalid_argument("latin_hypercube: n must be >= 1");
    }
    bounds.validate();
    const int d = bounds.dimension();
    std::vector<Eigen::VectorXd> points(n, Eigen::VectorXd(d));
    std::vector<int> perm(n);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < n; ++i) {
            perm[i] = i;
        }
        // Fisher-Yates
        for (int i = n - 1; i > 0; --i) {
            const int k = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
            std::swap(perm[i], perm[k]);
        }
        const double lo = bounds.lower[j];
        const double width = bounds.upper[j] - bounds.lower[j];
        for (int i = 0; i < n; ++i) {
            const double u = (static_cast<double>(perm[i]) + rng.uniform()) / static_cast<double>(n);
            points[i][j] = lo + width * u;
        }
    }
    return points;
}

Box Box::cube(int dimension, double lo, double hi) {
    Box box;
    box.lower = Eigen::VectorXd::Constant(dimension, lo);
    box.upper = Eigen::VectorXd::Constant(dimension, hi);
    return box;
}

bool Box::contains(const Eigen::VectorXd& x, double tol) const {
    if (x.size() != lower.size()) {
        return false;
    }
    return (x.array() >= lower.array() - tol).all() && (x.array() <= upper.array() + tol).all();
}

void Box::validate() const {
    if (lower.size() == 0 || lower.size() != upper.size()) {
        throw std::invalid_argument("Box: lower/upper dimension mismatch");
    }
    for (int j = 0; j < lower.size(); ++j) {
        if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]) || !(lower[j] < upper[j])) {
            throw std::invalid_argument("Box: bounds must be finite with lower < upper");
        }
    }
}

}  // namespace rgpucb
