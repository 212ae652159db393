#ifndef LICHI_NOISE_HPP
#define LICHI_NOISE_HPP

#include <cstdint>

#include "lichi/image.hpp"

namespace lichi {

/// Noise description: homoscedastic Gaussian or heteroscedastic
/// Poisson-Gaussian approximated as N(x, diag(a*x + b)).
struct NoiseModel {
    enum class Kind { Gaussian, PoissonGaussian };
    Kind kind = Kind::Gaussian;
    double sigma = 0.0;  // Gaussian
    double a = 0.0;      // PoissonGaussian
    double b = 0.0;
};

/// Counter-based generator "sm64box-v1": each draw is derived from
/// (seed, counter) through a splitmix64 finalizer, then mapped to a normal
/// variate with Box-Muller. Stateless, so seeds reproduce across platforms
/// and the sampling is trivially parallel.
namespace rng {

inline constexpr const char* kName = "sm64box-v1";

std::uint64_t mix(std::uint64_t seed, std::uint64_t counter);

/// Uniform in (0, 1).
double uniform(std::uint64_t seed, std::uint64_t counter);

/// Standard normal variate indexed by counter.
double normal(std::uint64_t seed, std::uint64_t counter);

}  // namespace rng

/// y = x + w with w iid N(0, sigma^2); no clamping.
Image add_awgn(const Image& x, double sigma, std::uint64_t seed);

/// Heteroscedastic Gaussian noise of variance a*x + b per pixel.
Image add_poisson_gaussian(const Image& x, double a, double b,
                           std::uint64_t seed);

/// Generalized Anscombe transform f(v) = (2/a) sqrt(a*v + 3/8 a^2 + b);
/// entries with negative radicand map to 0. Requires a > 0.
Image gat_forward(const Image& y, double a, double b);

/// Algebraic inverse of gat_forward: v = (a/4) u^2 - 3/8 a - b/a.
Image gat_inverse(const Image& u, double a, double b);

}  // namespace lichi

#endif
