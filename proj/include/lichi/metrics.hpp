#ifndef LICHI_METRICS_HPP
#define LICHI_METRICS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lichi/image.hpp"

namespace lichi {

/// 10 log10(peak^2 d / ||xhat - x||^2); +infinity for identical images.
double psnr(const Image& x, const Image& xhat, double peak = 255.0);

double mse(const Image& x, const Image& xhat);

/// Monte Carlo bias-variance decomposition over noise realizations.
struct BiasVarianceResult {
    double mse = 0.0;           // mean over trials of ||xhat - x||^2 / d
    double squared_bias = 0.0;  // ||mean(xhat) - x||^2 / d
    double variance = 0.0;      // unbiased (divisor trials - 1)
    /// mse - (squared_bias + variance) up to this estimator-bias correction
    /// term (= variance / trials exactly).
    double mc_correction = 0.0;
    int trials = 0;
};

using Denoiser = std::function<Image(const Image& noisy)>;

BiasVarianceResult bias_variance(const Denoiser& denoiser, const Image& x,
                                 double sigma, int trials,
                                 std::uint64_t seed);

/// One benchmark row; the CSV schema is
/// dataset,image,sigma,method,pilot,iterations,psnr_db,wall_s,config_hash.
struct BenchRow {
    std::string dataset;
    std::string image;
    double sigma = 0.0;
    std::string method;
    std::string pilot;
    int iterations = 0;
    double psnr_db = 0.0;
    double wall_s = 0.0;
    std::string config_hash;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<std::string> warnings;  // unreadable images, etc.

    void write_csv(const std::string& path) const;
    static std::string csv_header();
};

/// A method to run in a sweep: name + procedure (clean, noisy, sigma) ->
/// (psnr contribution rows). Kept generic so figure presets can emit several
/// evaluation levels per image.
struct SweepMethod {
    std::string method;  // CSV "method" column
    std::string pilot;   // CSV "pilot" column
    int iterations = 0;
    std::function<double(const Image& clean, const Image& noisy,
                         double sigma)>
        run;  // returns PSNR in dB
};

/// Runs every method on every (image, sigma) pair. The noise seed is derived
/// from `seed` and the image filename so all methods see identical noisy
/// inputs. Rows come out in deterministic (image, sigma, method) order.
BenchReport sweep(const std::string& dataset_dir,
                  const std::vector<double>& sigmas,
                  const std::vector<SweepMethod>& methods, std::uint64_t seed,
                  const std::string& config_hash);

/// Sorted list of the .png/.pgm files in a directory.
std::vector<std::string> list_images(const std::string& dir);

/// FNV-1a, used for per-image seed derivation and config hashing.
std::uint64_t fnv1a(const std::string& s);

}  // namespace lichi

#endif
