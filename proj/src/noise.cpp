#include "lichi/noise.hpp"

#include <cmath>

namespace lichi {

namespace rng {

std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) {
    // splitmix64 finalizer applied to the keyed counter
    std::uint64_t z = seed + counter * 0x9E3779B97F4A7C15ULL +
                      0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform(std::uint64_t seed, std::uint64_t counter) {
    // 53-bit mantissa, shifted into (0, 1)
    const std::uint64_t bits = mix(seed, counter) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double normal(std::uint64_t seed, std::uint64_t counter) {
    // Box-Muller on two independent uniforms per counter
    const double u1 = uniform(seed, 2 * counter);
    const double u2 = uniform(seed, 2 * counter + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * M_PI * u2);
}

}  // namespace rng

Image add_awgn(const Image& x, double sigma, std::uint64_t seed) {
    if (sigma <= 0.0) throw ConfigError("add_awgn: sigma must be positive");
    Image y = x;
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += sigma * rng::normal(seed, i);
    return y;
}

Image add_poisson_gaussian(const Image& x, double a, double b,
                           std::uint64_t seed) {
    if (a < 0.0 || b < 0.0 || (a == 0.0 && b == 0.0))
        throw ConfigError("add_poisson_gaussian: need a > 0 or b > 0");
    Image y = x;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double var = std::max(0.0, a * x[i] + b);
        y[i] += std::sqrt(var) * rng::normal(seed, i);
    }
    return y;
}

Image gat_forward(const Image& y, double a, double b) {
    if (a <= 0.0)
        throw ConfigError(
            "gat_forward: a must be positive (pure Gaussian noise needs no "
            "variance stabilization)");
    Image u = y;
    const double offset = 0.375 * a * a + b;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double radicand = a * u[i] + offset;
        u[i] = radicand > 0.0 ? (2.0 / a) * std::sqrt(radicand) : 0.0;
    }
    return u;
}

Image gat_inverse(const Image& u, double a, double b) {
    if (a <= 0.0) throw ConfigError("gat_inverse: a must be positive");
    Image v = u;
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = 0.25 * a * v[i] * v[i] - 0.375 * a - b / a;
    return v;
}

}  // namespace lichi
