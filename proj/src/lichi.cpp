#include "lichi/lichi.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "lichi/parallel.hpp"

namespace lichi {

LichiConfig default_lichi_config(double sigma) {
    LichiConfig cfg;
    cfg.pilot = default_pilot_config(sigma);
    if (sigma <= 10.0)
        cfg.iterations = 6;
    else if (sigma <= 30.0)
        cfg.iterations = 9;
    else
        cfg.iterations = 11;
    return cfg;
}

double estimate_t(const Matrix& yg, const Matrix& zg, double sigma,
                  double t_min) {
    if (sigma <= 0.0) throw ConfigError("estimate_t: sigma must be positive");
    if (yg.rows() != zg.rows() || yg.cols() != zg.cols())
        throw ConfigError("estimate_t: shape mismatch");
    const Matrix diff = yg - zg;
    const double nk = static_cast<double>(diff.size());
    const double mean = diff.sum() / nk;
    const double var =
        (diff.array() - mean).square().sum() / nk;  // population sd
    const double t = 1.0 - std::sqrt(var) / sigma;
    return std::clamp(t, t_min, 1.0);
}

std::pair<WeightMatrix, WeightMatrix> step_weights(const Matrix& gx, double t,
                                                   double sigma, double tau,
                                                   int n) {
    const double lambda = n * (t * sigma) * (t * sigma);
    WeightMatrix xi = solve_spd(gx, lambda, gx);
    const double shrink = tau / t;
    WeightMatrix theta = (1.0 - shrink) * xi;
    theta.diagonal().array() += shrink;
    return {std::move(xi), std::move(theta)};
}

namespace {

constexpr std::size_t kBlock = 256;

}  // namespace

Image lichi_denoise(const Image& y, double sigma, const LichiConfig& cfg,
                    int threads, LichiDiagnostics* diag) {
    if (sigma <= 0.0)
        throw ConfigError("lichi_denoise: sigma must be positive");
    if (cfg.iterations < 1)
        throw ConfigError("lichi_denoise: iterations must be >= 1");
    if (cfg.rematch_period < 1)
        throw ConfigError("lichi_denoise: rematch period must be >= 1");

    const int side = cfg.patch_side;
    const int n = side * side;

    Image z = y;                                                 // z_0 = y
    Image pilot = pilot_denoise(y, sigma, cfg.pilot, Reprojection::Average,
                                0, threads);                     // x~_1
    GroupSet gs;
    std::atomic<long> tau_exceeds{0};
    long groups_processed = 0;

    for (int m = 1; m <= cfg.iterations; ++m) {
        // Patch locations follow the current estimate; re-matching is only
        // performed every rematch_period iterations.
        if ((m - 1) % cfg.rematch_period == 0)
            gs = match_geometry(z, side, cfg.group_size, cfg.window,
                                cfg.step, threads);
        const double tau = cfg.tau(m);

        Aggregator z_acc(y.height(), y.width());
        Aggregator pilot_acc(y.height(), y.width());
        const std::size_t n_groups = gs.groups.size();
        std::vector<Matrix> z_block(kBlock), pilot_block(kBlock);
        for (std::size_t begin = 0; begin < n_groups; begin += kBlock) {
            const std::size_t end = std::min(n_groups, begin + kBlock);
            parallel_for(end - begin, threads, [&](std::size_t j) {
                const PatchGroup& g = gs.groups[begin + j];
                Matrix yg, zg, xg;
                gather_group(y, g, side, yg);
                gather_group(z, g, side, zg);
                gather_group(pilot, g, side, xg);
                const double t = estimate_t(yg, zg, sigma, cfg.t_min);
                if (tau > t) tau_exceeds.fetch_add(1);
                auto [xi, theta] = step_weights(gram(xg), t, sigma, tau, n);
                pilot_block[j] = zg * xi;  // X~^{m+1}_i
                z_block[j] = zg * theta;   // Z^m_i
            });
            for (std::size_t j = 0; j < end - begin; ++j) {
                z_acc.add(gs.groups[begin + j], side, z_block[j]);
                pilot_acc.add(gs.groups[begin + j], side, pilot_block[j]);
            }
        }
        groups_processed += static_cast<long>(n_groups);
        z = z_acc.finish();
        pilot = pilot_acc.finish();
    }
    if (diag) {
        diag->groups_processed = groups_processed;
        diag->tau_exceeds_t = tau_exceeds.load();
    }
    return z;
}

std::vector<Image> repeat_internal_adaptation(const Image& y, double sigma,
                                              int steps,
                                              const LichiConfig& cfg,
                                              int threads) {
    if (steps < 1)
        throw ConfigError("repeat_internal_adaptation: steps must be >= 1");
    const int side = cfg.patch_side;
    const int n = side * side;

    std::vector<Image> out;
    out.reserve(steps + 1);
    out.push_back(pilot_denoise(y, sigma, cfg.pilot, Reprojection::Average,
                                0, threads));
    for (int s = 1; s <= steps; ++s) {
        const Image& pilot = out.back();
        // tau = 0 and the noisy image re-denoised from scratch each step:
        // Z = Y, t = 1, so Theta = (X'X + n sigma^2 I)^-1 X'X.
        const GroupSet gs = match_geometry(pilot, side, cfg.group_size,
                                           cfg.window, cfg.step, threads);
        Aggregator acc(y.height(), y.width());
        const std::size_t n_groups = gs.groups.size();
        std::vector<Matrix> block(kBlock);
        for (std::size_t begin = 0; begin < n_groups; begin += kBlock) {
            const std::size_t end = std::min(n_groups, begin + kBlock);
            parallel_for(end - begin, threads, [&](std::size_t j) {
                const PatchGroup& g = gs.groups[begin + j];
                Matrix yg, xg;
                gather_group(y, g, side, yg);
                gather_group(pilot, g, side, xg);
                auto [xi, theta] =
                    step_weights(gram(xg), 1.0, sigma, 0.0, n);
                block[j] = yg * theta;
            });
            for (std::size_t j = 0; j < end - begin; ++j)
                acc.add(gs.groups[begin + j], side, block[j]);
        }
        out.push_back(acc.finish());
    }
    return out;
}

}  // namespace lichi
