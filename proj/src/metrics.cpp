#include "lichi/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "lichi/noise.hpp"

namespace lichi {

double mse(const Image& x, const Image& xhat) {
    if (!x.same_shape(xhat)) throw ConfigError("mse: image shapes differ");
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = xhat[i] - x[i];
        total += d * d;
    }
    return total / static_cast<double>(x.size());
}

double psnr(const Image& x, const Image& xhat, double peak) {
    const double m = mse(x, xhat);
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / m);
}

BiasVarianceResult bias_variance(const Denoiser& denoiser, const Image& x,
                                 double sigma, int trials,
                                 std::uint64_t seed) {
    if (trials < 2) throw ConfigError("bias_variance: trials must be >= 2");
    const std::size_t d = x.size();
    Image mean(x.height(), x.width(), 0.0);
    std::vector<Image> estimates;
    estimates.reserve(trials);
    double mse_sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Image noisy = add_awgn(x, sigma, rng::mix(seed, t));
        Image est = denoiser(noisy);
        if (!est.same_shape(x))
            throw ConfigError("bias_variance: denoiser changed image shape");
        mse_sum += mse(x, est);
        for (std::size_t i = 0; i < d; ++i) mean[i] += est[i];
        estimates.push_back(std::move(est));
    }
    for (std::size_t i = 0; i < d; ++i) mean[i] /= trials;

    BiasVarianceResult result;
    result.trials = trials;
    result.mse = mse_sum / trials;
    result.squared_bias = mse(x, mean);
    double var_sum = 0.0;
    for (const auto& est : estimates) var_sum += mse(mean, est);
    result.variance = var_sum / (trials - 1);
    // Exactly: mse = squared_bias + variance * (trials-1)/trials, so the
    // decomposition identity holds up to variance/trials.
    result.mc_correction = result.variance / trials;
    return result;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<std::string> list_images(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw IoError(dir + ": not a directory");
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
        if (ext == ".png" || ext == ".pgm")
            files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::string BenchReport::csv_header() {
    return "dataset,image,sigma,method,pilot,iterations,psnr_db,wall_s,"
           "config_hash";
}

void BenchReport::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << csv_header() << "\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.6g", r.sigma);
        out << r.dataset << ',' << r.image << ',' << buf << ',' << r.method
            << ',' << r.pilot << ',' << r.iterations << ',';
        std::snprintf(buf, sizeof(buf), "%.4f", r.psnr_db);
        out << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.3f", r.wall_s);
        out << buf << ',' << r.config_hash << "\n";
    }
}

BenchReport sweep(const std::string& dataset_dir,
                  const std::vector<double>& sigmas,
                  const std::vector<SweepMethod>& methods, std::uint64_t seed,
                  const std::string& config_hash) {
    namespace fs = std::filesystem;
    BenchReport report;
    const std::string dataset = fs::path(dataset_dir).filename().string();
    for (const auto& file : list_images(dataset_dir)) {
        const std::string name = fs::path(file).filename().string();
        Image clean;
        try {
            clean = load_gray(file);
        } catch (const Error& e) {
            report.warnings.push_back(std::string("skipped ") + file + ": " +
                                      e.what());
            std::fprintf(stderr, "lichi: warning: %s\n",
                         report.warnings.back().c_str());
            continue;
        }
        for (double sigma : sigmas) {
            // one fixed noisy input per (image, sigma), shared by all methods
            const std::uint64_t noise_seed =
                rng::mix(seed ^ fnv1a(name),
                         static_cast<std::uint64_t>(sigma * 1000.0));
            const Image noisy = add_awgn(clean, sigma, noise_seed);
            for (const auto& method : methods) {
                const auto start = std::chrono::steady_clock::now();
                const double value = method.run(clean, noisy, sigma);
                const std::chrono::duration<double> wall =
                    std::chrono::steady_clock::now() - start;
                report.rows.push_back({dataset, name, sigma, method.method,
                                       method.pilot, method.iterations, value,
                                       wall.count(), config_hash});
            }
        }
    }
    return report;
}

}  // namespace lichi
