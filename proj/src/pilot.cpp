#include "lichi/pilot.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "lichi/parallel.hpp"

namespace lichi {

PilotConfig default_pilot_config(double sigma) {
    if (sigma <= 0.0)
        throw ConfigError("default_pilot_config: sigma must be positive");
    PilotConfig cfg;
    if (sigma > 50.0)
        std::fprintf(stderr,
                     "lichi: warning: sigma %.2f outside the tuned range "
                     "(0, 50]; using the nearest band\n",
                     sigma);
    if (sigma <= 10.0)
        cfg.patch_side = 9;
    else if (sigma <= 30.0)
        cfg.patch_side = 11;
    else
        cfg.patch_side = 13;
    cfg.group_size = 16;
    cfg.method = PilotMethod::nr2n(0.5);
    return cfg;
}

// Groups are processed in fixed-size blocks: estimates are computed in
// parallel into per-group slots, then reduced serially in group order, so
// the result is identical for any thread count.
static constexpr std::size_t kBlock = 256;

Image pilot_denoise(const Image& y, double sigma, const PilotConfig& cfg,
                    Reprojection repro, std::uint64_t seed, int threads) {
    const GroupSet gs = match_geometry(y, cfg.patch_side, cfg.group_size,
                                       cfg.window, cfg.step, threads);
    const std::size_t n_groups = gs.groups.size();

    if (repro == Reprojection::SingleEstimate) {
        std::vector<Matrix> estimates(n_groups);
        parallel_for(n_groups, threads, [&](std::size_t i) {
            Matrix yi;
            gather_group(y, gs.groups[i], cfg.patch_side, yi);
            estimates[i] = yi * pilot_weights(yi, sigma, cfg.method);
        });
        return select_single(gs, estimates, seed);
    }

    Aggregator acc(y.height(), y.width());
    std::vector<Matrix> block(kBlock);
    for (std::size_t begin = 0; begin < n_groups; begin += kBlock) {
        const std::size_t end = std::min(n_groups, begin + kBlock);
        parallel_for(end - begin, threads, [&](std::size_t j) {
            Matrix yi;
            gather_group(y, gs.groups[begin + j], cfg.patch_side, yi);
            block[j] = yi * pilot_weights(yi, sigma, cfg.method);
        });
        for (std::size_t j = 0; j < end - begin; ++j)
            acc.add(gs.groups[begin + j], cfg.patch_side, block[j]);
    }
    return acc.finish();
}

double pilot_group_psnr(const Image& clean, const Image& y, double sigma,
                        const PilotConfig& cfg, int threads) {
    if (!clean.same_shape(y))
        throw ConfigError("pilot_group_psnr: image shapes differ");
    const GroupSet gs = match_geometry(y, cfg.patch_side, cfg.group_size,
                                       cfg.window, cfg.step, threads);
    std::vector<double> sq_err(gs.groups.size(), 0.0);
    parallel_for(gs.groups.size(), threads, [&](std::size_t i) {
        Matrix yi, xi;
        gather_group(y, gs.groups[i], cfg.patch_side, yi);
        gather_group(clean, gs.groups[i], cfg.patch_side, xi);
        const Matrix est = yi * pilot_weights(yi, sigma, cfg.method);
        sq_err[i] = (est - xi).squaredNorm();
    });
    double total = 0.0;
    for (double e : sq_err) total += e;
    const double entries = static_cast<double>(gs.groups.size()) *
                           cfg.patch_side * cfg.patch_side * cfg.group_size;
    const double group_mse = total / entries;
    if (group_mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / group_mse);
}

}  // namespace lichi
