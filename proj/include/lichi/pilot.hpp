#ifndef LICHI_PILOT_HPP
#define LICHI_PILOT_HPP

#include <cstdint>

#include "lichi/image.hpp"
#include "lichi/patch.hpp"
#include "lichi/weights.hpp"

namespace lichi {

/// Configuration for the one-pass pilot stage.
struct PilotConfig {
    int patch_side = 11;
    int group_size = 16;
    PilotMethod method = PilotMethod::nr2n();
    int window = 65;
    int step = 3;
};

/// Recommended patch/group sizes per noise band, with Noisier2Noise(0.5)
/// weights. Outside (0, 50] the nearest band is used.
/// sigma in (0,10] -> 9x9, (10,30] -> 11x11, (30,50] -> 13x13; k = 16.
PilotConfig default_pilot_config(double sigma);

/// How the per-pixel estimates are reduced to an image.
enum class Reprojection { Average, SingleEstimate };

/// One pass of grouped linear combination: per group Theta from the chosen
/// family, X = Y Theta, then aggregation. `seed` only matters for
/// Reprojection::SingleEstimate tie-breaking.
Image pilot_denoise(const Image& y, double sigma, const PilotConfig& cfg,
                    Reprojection repro = Reprojection::Average,
                    std::uint64_t seed = 0, int threads = 1);

/// Pilot evaluated at the patch-group level against a clean image gathered
/// at the same positions: PSNR of the pooled group MSE. Used for the pilot
/// comparison curves.
double pilot_group_psnr(const Image& clean, const Image& y, double sigma,
                        const PilotConfig& cfg, int threads = 1);

}  // namespace lichi

#endif
