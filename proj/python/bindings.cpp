// Python bindings for the LIChI denoiser. Images cross the boundary as 2-D
// float64 numpy arrays in the [0, 255] intensity convention.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lichi/lichi.hpp"
#include "lichi/metrics.hpp"
#include "lichi/noise.hpp"

namespace py = pybind11;

namespace {

lichi::Image to_image(const py::array_t<double, py::array::c_style |
                                                    py::array::forcecast>& a) {
    if (a.ndim() != 2)
        throw py::value_error("expected a 2-D array");
    const int h = static_cast<int>(a.shape(0));
    const int w = static_cast<int>(a.shape(1));
    std::vector<double> data(a.data(), a.data() + a.size());
    return lichi::Image(h, w, std::move(data));
}

py::array_t<double> to_array(const lichi::Image& img) {
    py::array_t<double> a({img.height(), img.width()});
    std::copy(img.data().begin(), img.data().end(), a.mutable_data());
    return a;
}

lichi::LichiConfig make_config(double sigma, const std::string& pilot,
                               double alpha, int iters, int patch, int group,
                               int window, int step, int rematch) {
    lichi::LichiConfig cfg = lichi::default_lichi_config(sigma);
    if (!pilot.empty())
        cfg.pilot.method = lichi::parse_pilot_method(pilot, alpha);
    if (iters > 0) cfg.iterations = iters;
    if (patch > 0) cfg.patch_side = patch;
    if (group > 0) cfg.group_size = group;
    if (window > 0) {
        cfg.window = window;
        cfg.pilot.window = window;
    }
    if (step > 0) {
        cfg.step = step;
        cfg.pilot.step = step;
    }
    if (rematch > 0) cfg.rematch_period = rematch;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(lichi, m) {
    m.doc() = "Unsupervised image denoising by iterative linear "
              "combinations of similar patches";

    m.def(
        "denoise",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> y,
           double sigma, const std::string& pilot, double alpha, int iters,
           int patch, int group, int window, int step, int rematch,
           int threads) {
            const auto cfg = make_config(sigma, pilot, alpha, iters, patch,
                                         group, window, step, rematch);
            lichi::Image img = to_image(y);
            py::gil_scoped_release release;
            lichi::Image out = lichi::lichi_denoise(img, sigma, cfg, threads);
            py::gil_scoped_acquire acquire;
            return to_array(out);
        },
        py::arg("y"), py::arg("sigma"), py::arg("pilot") = "",
        py::arg("alpha") = 0.5, py::arg("iters") = 0, py::arg("patch") = 0,
        py::arg("group") = 0, py::arg("window") = 0, py::arg("step") = 0,
        py::arg("rematch") = 0, py::arg("threads") = 1,
        "Run the full iterative denoiser on a noisy [0,255] image.");

    m.def(
        "pilot_denoise",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> y,
           double sigma, const std::string& pilot, double alpha,
           int threads) {
            lichi::PilotConfig cfg = lichi::default_pilot_config(sigma);
            if (!pilot.empty())
                cfg.method = lichi::parse_pilot_method(pilot, alpha);
            lichi::Image img = to_image(y);
            py::gil_scoped_release release;
            lichi::Image out = lichi::pilot_denoise(img, sigma, cfg);
            py::gil_scoped_acquire acquire;
            return to_array(out);
        },
        py::arg("y"), py::arg("sigma"), py::arg("pilot") = "",
        py::arg("alpha") = 0.5, py::arg("threads") = 1,
        "One pass of grouped linear combinations (the pilot stage).");

    m.def(
        "add_awgn",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
           double sigma, std::uint64_t seed) {
            return to_array(lichi::add_awgn(to_image(x), sigma, seed));
        },
        py::arg("x"), py::arg("sigma"), py::arg("seed") = 0,
        "Add reproducible white Gaussian noise.");

    m.def(
        "psnr",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
           py::array_t<double, py::array::c_style | py::array::forcecast>
               xhat,
           double peak) {
            return lichi::psnr(to_image(x), to_image(xhat), peak);
        },
        py::arg("x"), py::arg("xhat"), py::arg("peak") = 255.0);

    m.def(
        "gat_forward",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> y,
           double a, double b) {
            return to_array(lichi::gat_forward(to_image(y), a, b));
        },
        py::arg("y"), py::arg("a"), py::arg("b"),
        "Generalized Anscombe transform.");

    m.def(
        "gat_inverse",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> u,
           double a, double b) {
            return to_array(lichi::gat_inverse(to_image(u), a, b));
        },
        py::arg("u"), py::arg("a"), py::arg("b"));

    m.def("load_gray",
          [](const std::string& path) {
              return to_array(lichi::load_gray(path));
          },
          py::arg("path"));
    m.def("save_gray",
          [](py::array_t<double,
                         py::array::c_style | py::array::forcecast> img,
             const std::string& path) {
              lichi::save_gray(to_image(img), path);
          },
          py::arg("img"), py::arg("path"));

    py::register_exception<lichi::Error>(m, "LichiError");
}
