"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import lichi


def textured(h, w):
    r = np.arange(h)[:, None]
    c = np.arange(w)[None, :]
    return (128.0
            + 60.0 * np.sin(0.13 * r) * np.cos(0.11 * c)
            + 30.0 * np.sin(0.03 * r * c))


def test_noise_is_seeded():
    x = textured(32, 32)
    a = lichi.add_awgn(x, 15.0, seed=7)
    b = lichi.add_awgn(x, 15.0, seed=7)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, lichi.add_awgn(x, 15.0, seed=8))


def test_psnr_matches_the_analytic_value():
    x = np.zeros((10, 10))
    y = np.full((10, 10), 25.0)
    assert lichi.psnr(x, y) == pytest.approx(20.0 * math.log10(255.0 / 25.0))
    assert math.isinf(lichi.psnr(x, x))


def test_denoising_improves_psnr():
    x = textured(64, 64)
    sigma = 25.0
    y = lichi.add_awgn(x, sigma, seed=1)
    den = lichi.denoise(y, sigma, window=33, iters=3)
    assert lichi.psnr(x, den) > lichi.psnr(x, y) + 3.0


def test_pilot_runs():
    x = textured(80, 80)
    sigma = 15.0
    y = lichi.add_awgn(x, sigma, seed=2)
    den = lichi.pilot_denoise(y, sigma)
    assert den.shape == y.shape
    assert lichi.psnr(x, den) > lichi.psnr(x, y)


def test_vst_round_trip():
    v = np.linspace(0.5, 255.0, 64).reshape(8, 8)
    u = lichi.gat_forward(v, 0.05, 4.0)
    back = lichi.gat_inverse(u, 0.05, 4.0)
    assert np.allclose(back, v, atol=1e-9)


def test_image_io_round_trip(tmp_path):
    x = np.round(textured(16, 16)).clip(0, 255)
    path = str(tmp_path / "img.png")
    lichi.save_gray(x, path)
    back = lichi.load_gray(path)
    assert np.array_equal(back, x)


def test_errors_surface_as_exceptions():
    with pytest.raises(lichi.LichiError):
        lichi.load_gray("/nonexistent/nowhere.png")
    with pytest.raises(lichi.LichiError):
        lichi.denoise(np.zeros((32, 32)), -1.0)
