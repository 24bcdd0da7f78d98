import math

import numpy as np
import pytest
from skimage.metrics import structural_similarity

from oracles import two_pass_mse
from vardehaze.metrics import evaluate, psnr, ssim


def test_psnr_identical_is_inf(rng):
    a = rng.random((8, 8, 3))
    assert psnr(a, a) == math.inf


def test_psnr_uniform_offset():
    a = np.full((12, 12, 3), 0.3)
    assert abs(psnr(a, a + 0.1) - 20.0) <= 1e-9


def test_psnr_matches_two_pass(rng):
    a, b = rng.random((2, 9, 7, 3))
    assert psnr(a, b) == pytest.approx(10 * math.log10(1 / two_pass_mse(a, b)), rel=1e-12)


def test_psnr_decreases_with_noise(rng):
    a = rng.random((16, 16, 3))
    noise = rng.uniform(-1, 1, a.shape)
    vals = [psnr(a, a + s * noise) for s in (0.01, 0.05, 0.1, 0.2)]
    assert all(x > y for x, y in zip(vals, vals[1:]))


def test_psnr_shape_mismatch():
    with pytest.raises(ValueError):
        psnr(np.zeros((4, 4, 3)), np.zeros((4, 5, 3)))


def test_ssim_identity_and_symmetry(rng):
    a, b = rng.random((2, 20, 20, 3))
    assert abs(ssim(a, a) - 1.0) <= 1e-9
    assert ssim(a, b) == pytest.approx(ssim(b, a), abs=1e-15)
    assert -1 <= ssim(a, b) < 1


def test_ssim_constant_images():
    a = np.full((16, 16, 3), 0.2)
    b = np.full((16, 16, 3), 0.7)
    C1 = 0.01 ** 2
    expected = (2 * 0.2 * 0.7 + C1) / (0.2 ** 2 + 0.7 ** 2 + C1)
    assert ssim(a, b) == pytest.approx(expected, rel=1e-9)


def test_ssim_matches_skimage(rng):
    a, b = rng.random((2, 32, 40, 3))
    luma = np.array([0.299, 0.587, 0.114])
    ref = structural_similarity(a @ luma, b @ luma, data_range=1.0, gaussian_weights=True,
                                sigma=1.5, use_sample_covariance=False)
    assert ssim(a, b) == pytest.approx(ref, abs=1e-10)


def test_ssim_too_small():
    with pytest.raises(ValueError):
        ssim(np.zeros((10, 12, 3)), np.zeros((10, 12, 3)))


def test_evaluate(rng):
    a = rng.random((16, 16, 3))
    r = evaluate(a, a)
    assert r.psnr == math.inf and r.ssim == pytest.approx(1.0)
