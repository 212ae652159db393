// lichi: command-line front end for the iterative patch-combination denoiser.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lichi/lichi.hpp"
#include "lichi/metrics.hpp"
#include "lichi/noise.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;

struct Overrides {
    std::optional<double> sigma;
    std::optional<std::string> pilot;
    std::optional<double> alpha;
    std::optional<int> iters;
    std::optional<int> patch;
    std::optional<int> group;
    std::optional<int> pilot_patch;
    std::optional<int> pilot_group;
    std::optional<int> window;
    std::optional<int> step;
    std::optional<int> rematch;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
};

// precedence: built-in defaults < config file < CLI flags
void merge_json(Overrides& o, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lichi::IoError(path + ": cannot open config file");
    json j = json::parse(in);
    auto get = [&](const char* key, auto& slot) {
        using T = typename std::decay_t<decltype(slot)>::value_type;
        if (j.contains(key) && !slot.has_value()) slot = j.at(key).get<T>();
    };
    get("sigma", o.sigma);
    get("pilot", o.pilot);
    get("alpha", o.alpha);
    get("iters", o.iters);
    get("patch", o.patch);
    get("group", o.group);
    get("pilot_patch", o.pilot_patch);
    get("pilot_group", o.pilot_group);
    get("window", o.window);
    get("step", o.step);
    get("rematch", o.rematch);
    get("threads", o.threads);
    get("seed", o.seed);
}

int resolve_threads(const Overrides& o) {
    if (o.threads) return *o.threads;
    if (const char* env = std::getenv("LICHI_THREADS"))
        return std::max(1, std::atoi(env));
    return 1;
}

lichi::LichiConfig resolve_config(const Overrides& o, double sigma) {
    lichi::LichiConfig cfg = lichi::default_lichi_config(sigma);
    if (o.patch) cfg.patch_side = *o.patch;
    if (o.group) cfg.group_size = *o.group;
    if (o.iters) cfg.iterations = *o.iters;
    if (o.window) {
        cfg.window = *o.window;
        cfg.pilot.window = *o.window;
    }
    if (o.step) {
        cfg.step = *o.step;
        cfg.pilot.step = *o.step;
    }
    if (o.rematch) cfg.rematch_period = *o.rematch;
    if (o.pilot_patch) cfg.pilot.patch_side = *o.pilot_patch;
    if (o.pilot_group) cfg.pilot.group_size = *o.pilot_group;
    if (o.pilot || o.alpha)
        cfg.pilot.method = lichi::parse_pilot_method(
            o.pilot.value_or("nr2n"), o.alpha.value_or(0.5));
    return cfg;
}

std::string describe_config(const lichi::LichiConfig& cfg, double sigma,
                            std::uint64_t seed, int threads) {
    std::ostringstream s;
    s << "sigma=" << sigma << " patch=" << cfg.patch_side
      << " group=" << cfg.group_size << " iters=" << cfg.iterations
      << " tau_scale=" << cfg.tau_scale << " window=" << cfg.window
      << " step=" << cfg.step << " rematch=" << cfg.rematch_period
      << " t_min=" << cfg.t_min
      << " pilot=" << lichi::pilot_method_name(cfg.pilot.method)
      << " pilot_alpha=" << cfg.pilot.method.alpha
      << " pilot_patch=" << cfg.pilot.patch_side
      << " pilot_group=" << cfg.pilot.group_size << " seed=" << seed
      << " threads=" << threads << " rng=" << lichi::rng::kName;
    return s.str();
}

std::string config_hash(const std::string& description) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(lichi::fnv1a(description)));
    return buf;
}

void print_resolved(const std::string& description) {
    std::printf("config: %s\n", description.c_str());
    std::printf("config_hash: %s\n", config_hash(description).c_str());
}

double report_psnr(const lichi::Image& gt, const lichi::Image& est,
                   bool clamp, const char* label) {
    lichi::Image shown = est;
    if (clamp)
        for (auto& v : shown.data())
            v = std::min(255.0, std::max(0.0, v));
    const double value = lichi::psnr(gt, shown);
    std::printf("%s PSNR: %.2f dB%s\n", label, value,
                clamp ? " (clamped)" : "");
    return value;
}

int cmd_denoise(const Overrides& o, const std::string& in_path,
                const std::string& out_path, const std::string& gt_path,
                bool add_noise, const std::string& vst_spec,
                const std::string& vst_file, int naive_iterate, bool clamp) {
    // optional variance stabilization for Poisson-Gaussian noise
    double vst_a = 0.0, vst_b = 0.0;
    bool use_vst = false;
    if (!vst_file.empty()) {
        std::ifstream in(vst_file);
        if (!in) throw lichi::IoError(vst_file + ": cannot open");
        json j = json::parse(in);
        vst_a = j.at("a").get<double>();
        vst_b = j.at("b").get<double>();
        use_vst = true;
    }
    if (!vst_spec.empty()) {
        if (std::sscanf(vst_spec.c_str(), "%lf,%lf", &vst_a, &vst_b) != 2)
            throw lichi::ConfigError("--vst expects a,b");
        use_vst = true;
    }

    // in the stabilized domain the noise std is ~1, so sigma is optional
    const double sigma = o.sigma.value_or(use_vst ? 1.0 : 0.0);
    if (sigma <= 0.0) throw lichi::ConfigError("sigma must be positive");
    const int threads = resolve_threads(o);
    const std::uint64_t seed = o.seed.value_or(0);

    lichi::LichiConfig cfg = resolve_config(o, sigma);
    const std::string desc = describe_config(cfg, sigma, seed, threads);
    print_resolved(desc);

    lichi::Image gt;
    bool have_gt = false;
    if (!gt_path.empty()) {
        gt = lichi::load_gray(gt_path);
        have_gt = true;
    }

    lichi::Image noisy;
    if (add_noise) {
        if (!have_gt)
            throw lichi::ConfigError("--add-noise requires --gt");
        noisy = lichi::add_awgn(gt, sigma, seed);
        report_psnr(gt, noisy, clamp, "noisy");
    } else {
        if (in_path.empty()) throw lichi::ConfigError("--in is required");
        noisy = lichi::load_gray(in_path);
    }

    lichi::Image result;
    if (naive_iterate > 0) {
        const auto chain = lichi::repeat_internal_adaptation(
            noisy, sigma, naive_iterate, cfg, threads);
        if (have_gt)
            for (std::size_t s = 0; s < chain.size(); ++s) {
                char label[32];
                std::snprintf(label, sizeof(label), "step %zu", s);
                report_psnr(gt, chain[s], clamp, label);
            }
        result = chain.back();
    } else if (use_vst) {
        // stabilized domain: noise std is ~1 unless overridden
        const lichi::Image u = lichi::gat_forward(noisy, vst_a, vst_b);
        const lichi::Image du = lichi::lichi_denoise(u, sigma, cfg, threads);
        result = lichi::gat_inverse(du, vst_a, vst_b);
    } else {
        result = lichi::lichi_denoise(noisy, sigma, cfg, threads);
    }

    if (have_gt) report_psnr(gt, result, clamp, "denoised");
    if (!out_path.empty()) lichi::save_gray(result, out_path);
    return kExitOk;
}

int cmd_eval(const Overrides& o, const std::string& dataset,
             const std::string& out_csv, const std::string& reproduce,
             std::vector<double> sigmas, int steps) {
    const int threads = resolve_threads(o);
    const std::uint64_t seed = o.seed.value_or(0);
    if (sigmas.empty()) sigmas = {5.0, 15.0, 25.0, 35.0, 50.0};

    // hash covers the sweep-wide settings; sigma-dependent pieces are
    // resolved per run
    const std::string desc =
        describe_config(resolve_config(o, sigmas.front()), sigmas.front(),
                        seed, threads) +
        " preset=" + (reproduce.empty() ? "none" : reproduce);
    print_resolved(desc);
    const std::string hash = config_hash(desc);

    lichi::BenchReport report;
    if (reproduce == "fig2") {
        for (const auto& file : lichi::list_images(dataset)) {
            const std::string name =
                std::filesystem::path(file).filename().string();
            const lichi::Image clean = lichi::load_gray(file);
            for (double sigma : sigmas) {
                const std::uint64_t noise_seed = lichi::rng::mix(
                    seed ^ lichi::fnv1a(name),
                    static_cast<std::uint64_t>(sigma * 1000.0));
                const lichi::Image noisy =
                    lichi::add_awgn(clean, sigma, noise_seed);
                const lichi::LichiConfig cfg = resolve_config(o, sigma);
                const auto t0 = std::chrono::steady_clock::now();
                const auto chain = lichi::repeat_internal_adaptation(
                    noisy, sigma, steps, cfg, threads);
                const std::chrono::duration<double> wall =
                    std::chrono::steady_clock::now() - t0;
                const std::string dsname =
                    std::filesystem::path(dataset).filename().string();
                for (std::size_t s = 0; s < chain.size(); ++s)
                    report.rows.push_back(
                        {dsname, name, sigma, "naive_adapt",
                         lichi::pilot_method_name(cfg.pilot.method),
                         static_cast<int>(s), lichi::psnr(clean, chain[s]),
                         wall.count() / chain.size(), hash});
            }
        }
    } else if (reproduce == "fig4") {
        // one sweep per noise level so the rows carry the resolved
        // iteration count
        for (double sigma : sigmas) {
            const int iters = resolve_config(o, sigma).iterations;
            std::vector<lichi::SweepMethod> methods;
            for (const char* pilot : {"sure", "nr2n", "avg", "noisy"}) {
                const std::string pname = pilot;
                methods.push_back(
                    {"pilot_group", pname, 0,
                     [pname, o, threads](const lichi::Image& clean,
                                         const lichi::Image& noisy,
                                         double s) {
                         lichi::LichiConfig cfg = resolve_config(o, s);
                         cfg.pilot.method =
                             lichi::parse_pilot_method(pname, 0.5);
                         return lichi::pilot_group_psnr(clean, noisy, s,
                                                        cfg.pilot, threads);
                     }});
                methods.push_back(
                    {"pilot_agg", pname, 0,
                     [pname, o, threads](const lichi::Image& clean,
                                         const lichi::Image& noisy,
                                         double s) {
                         lichi::LichiConfig cfg = resolve_config(o, s);
                         cfg.pilot.method =
                             lichi::parse_pilot_method(pname, 0.5);
                         return lichi::psnr(
                             clean,
                             lichi::pilot_denoise(
                                 noisy, s, cfg.pilot,
                                 lichi::Reprojection::Average, 0, threads));
                     }});
                methods.push_back(
                    {"lichi", pname, iters,
                     [pname, o, threads](const lichi::Image& clean,
                                         const lichi::Image& noisy,
                                         double s) {
                         lichi::LichiConfig cfg = resolve_config(o, s);
                         cfg.pilot.method =
                             lichi::parse_pilot_method(pname, 0.5);
                         return lichi::psnr(
                             clean,
                             lichi::lichi_denoise(noisy, s, cfg, threads));
                     }});
            }
            auto part = lichi::sweep(dataset, {sigma}, methods, seed, hash);
            report.rows.insert(report.rows.end(), part.rows.begin(),
                               part.rows.end());
            report.warnings.insert(report.warnings.end(),
                                   part.warnings.begin(),
                                   part.warnings.end());
        }
    } else {
        // default / "table2": the full method, plus the analytic noisy row
        for (double sigma : sigmas) {
            const lichi::LichiConfig cfg0 = resolve_config(o, sigma);
            std::vector<lichi::SweepMethod> methods;
            methods.push_back(
                {"noisy", "-", 0,
                 [](const lichi::Image& clean, const lichi::Image& noisy,
                    double) { return lichi::psnr(clean, noisy); }});
            methods.push_back(
                {"lichi", lichi::pilot_method_name(cfg0.pilot.method),
                 cfg0.iterations,
                 [o, threads](const lichi::Image& clean,
                              const lichi::Image& noisy, double s) {
                     const lichi::LichiConfig cfg = resolve_config(o, s);
                     return lichi::psnr(
                         clean,
                         lichi::lichi_denoise(noisy, s, cfg, threads));
                 }});
            auto part = lichi::sweep(dataset, {sigma}, methods, seed, hash);
            report.rows.insert(report.rows.end(), part.rows.begin(),
                               part.rows.end());
            report.warnings.insert(report.warnings.end(),
                                   part.warnings.begin(),
                                   part.warnings.end());
        }
    }

    if (!out_csv.empty()) {
        report.write_csv(out_csv);
        std::printf("wrote %zu rows to %s\n", report.rows.size(),
                    out_csv.c_str());
    } else {
        std::printf("%s\n", lichi::BenchReport::csv_header().c_str());
        for (const auto& r : report.rows)
            std::printf("%s,%s,%g,%s,%s,%d,%.4f,%.3f,%s\n", r.dataset.c_str(),
                        r.image.c_str(), r.sigma, r.method.c_str(),
                        r.pilot.c_str(), r.iterations, r.psnr_db, r.wall_s,
                        r.config_hash.c_str());
    }
    return kExitOk;
}

int cmd_bias_variance(const Overrides& o, const std::string& gt_path,
                      int trials, bool single) {
    const double sigma = o.sigma.value_or(0.0);
    if (sigma <= 0.0) throw lichi::ConfigError("sigma must be positive");
    const int threads = resolve_threads(o);
    const std::uint64_t seed = o.seed.value_or(0);
    lichi::LichiConfig cfg = resolve_config(o, sigma);
    const std::string desc = describe_config(cfg, sigma, seed, threads);
    print_resolved(desc);

    const lichi::Image gt = lichi::load_gray(gt_path);
    const auto repro = single ? lichi::Reprojection::SingleEstimate
                              : lichi::Reprojection::Average;
    const auto result = lichi::bias_variance(
        [&](const lichi::Image& noisy) {
            return lichi::pilot_denoise(noisy, sigma, cfg.pilot, repro, seed,
                                        threads);
        },
        gt, sigma, trials, seed);
    std::printf("trials: %d\n", result.trials);
    std::printf("mse: %.4f\n", result.mse);
    std::printf("squared_bias: %.4f\n", result.squared_bias);
    std::printf("variance: %.4f\n", result.variance);
    std::printf("mc_correction: %.4f\n", result.mc_correction);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LIChI image denoiser: iterative linear combinations of "
                 "similar patches"};
    app.require_subcommand(1);

    Overrides o;
    std::string config_file;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--sigma", o.sigma, "noise standard deviation");
        cmd->add_option("--pilot", o.pilot,
                        "pilot weights: sure|nr2n|avg|noisy");
        cmd->add_option("--alpha", o.alpha, "Noisier2Noise extra-noise ratio");
        cmd->add_option("--iters", o.iters, "iteration count M");
        cmd->add_option("--patch", o.patch, "main-loop patch side");
        cmd->add_option("--group", o.group, "main-loop group size k");
        cmd->add_option("--pilot-patch", o.pilot_patch, "pilot patch side");
        cmd->add_option("--pilot-group", o.pilot_group, "pilot group size");
        cmd->add_option("--window", o.window, "search window side");
        cmd->add_option("--step", o.step, "reference patch step");
        cmd->add_option("--rematch", o.rematch, "re-matching period");
        cmd->add_option("--threads", o.threads,
                        "worker threads (env LICHI_THREADS as fallback)");
        cmd->add_option("--seed", o.seed, "RNG seed");
        cmd->add_option("--config", config_file, "JSON config file");
    };

    auto* denoise = app.add_subcommand("denoise", "denoise a single image");
    std::string in_path, out_path, gt_path, vst_spec, vst_file;
    bool add_noise = false, clamp = false;
    int naive_iterate = 0;
    denoise->add_option("--in", in_path, "input noisy image (PGM/PNG)");
    denoise->add_option("--out", out_path, "output image path");
    denoise->add_option("--gt", gt_path, "ground truth (for PSNR)");
    denoise->add_flag("--add-noise", add_noise,
                      "synthesize AWGN on --gt first");
    denoise->add_flag("--clamp", clamp, "clamp to [0,255] before PSNR");
    denoise->add_option("--vst", vst_spec,
                        "Poisson-Gaussian a,b: denoise through the "
                        "generalized Anscombe transform");
    denoise->add_option("--vst-file", vst_file,
                        "JSON sidecar {\"a\":...,\"b\":...}");
    denoise->add_option("--naive-iterate", naive_iterate,
                        "repeat plain internal adaptation K times instead "
                        "of the progressive scheme");
    add_common(denoise);

    auto* eval = app.add_subcommand("eval", "sweep a dataset directory");
    std::string dataset, out_csv, reproduce;
    std::vector<double> sigmas;
    int steps = 6;
    eval->add_option("--dataset", dataset, "directory of grayscale images")
        ->required();
    eval->add_option("--out", out_csv, "output CSV path");
    eval->add_option("--reproduce", reproduce, "preset: table2|fig4|fig2");
    eval->add_option("--sigmas", sigmas, "noise levels");
    eval->add_option("--steps", steps, "steps for the fig2 preset");
    add_common(eval);

    auto* bv = app.add_subcommand("bias-variance",
                                  "Monte Carlo bias-variance decomposition "
                                  "of the pilot estimator");
    std::string bv_gt;
    int trials = 100;
    bool single = false;
    bv->add_option("--gt", bv_gt, "ground truth image")->required();
    bv->add_option("--trials", trials, "noise realizations");
    bv->add_flag("--single", single,
                 "single-estimate reprojection (skip aggregation)");
    add_common(bv);

    try {
        app.parse(argc, argv);
        if (!config_file.empty()) merge_json(o, config_file);
        if (denoise->parsed())
            return cmd_denoise(o, in_path, out_path, gt_path, add_noise,
                               vst_spec, vst_file, naive_iterate, clamp);
        if (eval->parsed())
            return cmd_eval(o, dataset, out_csv, reproduce, sigmas, steps);
        if (bv->parsed()) return cmd_bias_variance(o, bv_gt, trials, single);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    } catch (const lichi::IoError& e) {
        std::fprintf(stderr, "lichi: %s\n", e.what());
        return kExitIo;
    } catch (const lichi::Error& e) {
        std::fprintf(stderr, "lichi: %s\n", e.what());
        return kExitConfig;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "lichi: config: %s\n", e.what());
        return kExitConfig;
    }
    return kExitConfig;
}
