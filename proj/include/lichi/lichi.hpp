#ifndef LICHI_LICHI_HPP
#define LICHI_LICHI_HPP

#include <utility>
#include <vector>

#include "lichi/pilot.hpp"

namespace lichi {

/// Hyperparameters of the iterative scheme.
struct LichiConfig {
    int patch_side = 6;  // n = 36
    int group_size = 64;
    int iterations = 9;  // M
    double tau_scale = 0.75;  // tau_m = tau_scale * (1 - m/M)
    int window = 65;
    int step = 3;
    int rematch_period = 3;
    double t_min = 0.05;
    PilotConfig pilot;

    double tau(int m) const {
        return tau_scale * (1.0 - static_cast<double>(m) / iterations);
    }
};

/// Table-driven defaults: M = 6 for sigma in (0,10], 9 for (10,30],
/// 11 for (30,50]; pilot from default_pilot_config.
LichiConfig default_lichi_config(double sigma);

/// Noise fraction t = 1 - sd(Y - Z)/sigma, clamped to [t_min, 1].
/// sd is the population standard deviation over all nk entries.
double estimate_t(const Matrix& yg, const Matrix& zg, double sigma,
                  double t_min = 0.05);

/// Closed-form pilot-update and step weights:
///   Xi    = (Gx + n (t sigma)^2 I)^-1 Gx
///   Theta = (1 - tau/t) Xi + (tau/t) I
/// where Gx is the Gram matrix of the pilot group.
std::pair<WeightMatrix, WeightMatrix> step_weights(const Matrix& gx, double t,
                                                   double sigma, double tau,
                                                   int n);

/// Per-run diagnostics.
struct LichiDiagnostics {
    long groups_processed = 0;
    long tau_exceeds_t = 0;  // groups where tau_m > t (coefficient flips sign)
};

/// The full M-step progressive scheme. Re-matches patch locations on the
/// current estimate every `rematch_period` iterations, updates both the
/// running estimate and the pilot each step, and returns z_M.
Image lichi_denoise(const Image& y, double sigma, const LichiConfig& cfg,
                    int threads = 1, LichiDiagnostics* diag = nullptr);

/// Naive repeated internal adaptation: tau = 0 at every step, pilot = the
/// previous output. Returns [pilot, step1, ..., stepS] for curve plotting.
std::vector<Image> repeat_internal_adaptation(const Image& y, double sigma,
                                              int steps,
                                              const LichiConfig& cfg,
                                              int threads = 1);

}  // namespace lichi

#endif
