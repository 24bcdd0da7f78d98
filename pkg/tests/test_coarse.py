import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_dark_channel
from vardehaze.coarse import (FusionParams, coarse_transmission, corrected_luminance,
                              dark_channel, dcp_transmission, fuse, fusion_weight,
                              luminance, luminance_transmission, nearest_rank)


def test_dark_channel_at_airlight_is_one():
    A = np.array([0.7, 0.8, 0.9])
    img = np.broadcast_to(A, (9, 9, 3)).copy()
    np.testing.assert_allclose(dark_channel(img, A, 3), 1.0)


def test_black_pixel_zeroes_its_windows():
    img = np.full((9, 9, 3), 0.6)
    img[4, 4, 1] = 0.0
    d = dark_channel(img, np.ones(3), 3)
    assert np.all(d[3:6, 3:6] == 0)
    assert np.all(d[0, :] > 0)


def test_dark_channel_brute_force(rng):
    img = rng.random((9, 9, 3))
    A = 0.5 + 0.5 * rng.random(3)
    np.testing.assert_array_equal(dark_channel(img, A, 3), brute_dark_channel(img, A, 3))


def test_dcp_transmission_values():
    np.testing.assert_allclose(dcp_transmission(np.array([1.0, 0.0, 0.5]), 0.95), [0.05, 1.0, 0.525])


def test_luminance():
    img = np.array([[[1, 1, 1], [0, 1, 0], [0.37, 0.37, 0.37]]], dtype=float)
    np.testing.assert_allclose(luminance(img), [[1.0, 0.587, 0.37]])


def test_corrected_luminance_constant():
    np.testing.assert_allclose(corrected_luminance(np.full((5, 5), 0.4), 3.4), 3.4)


def test_corrected_luminance_all_zero():
    assert np.all(corrected_luminance(np.zeros((3, 3))) == 0)


def test_nearest_rank_hundred():
    L = 0.01 * np.arange(1, 101)
    rng = np.random.default_rng(1)
    L = rng.permutation(L).reshape(10, 10)
    # sort-based oracle: 95th smallest of 100 values
    assert sorted(L.ravel())[94] == nearest_rank(L, 0.95)
    assert nearest_rank(L, 0.95) == pytest.approx(0.95)
    np.testing.assert_allclose(corrected_luminance(L, 3.4, 0.95), (3.4 / 0.95) * L)


def test_luminance_transmission():
    assert luminance_transmission(np.array(0.0), 0.3324) == 1.0
    assert luminance_transmission(np.array(math.log(2) / 0.3502), 0.3502) == pytest.approx(0.5)
    v = luminance_transmission(np.array([0.1, 0.2, 0.4]), 0.34)
    assert np.all(np.diff(v) < 0)


def test_fusion_weight_closed_form():
    t_d = np.array([0.2, 0.4, 0.6])
    chi = fusion_weight(t_d)
    assert chi[0] == pytest.approx(1 / (1 + math.exp(10)), rel=1e-12)
    assert chi[0] == pytest.approx(4.54e-5, rel=1e-3)
    assert chi[2] == pytest.approx(1 / (1 + math.exp(-10)), rel=1e-12)
    assert chi[1] == pytest.approx(0.5, abs=1e-12)


def test_fusion_weight_degenerate():
    np.testing.assert_array_equal(fusion_weight(np.full((3, 3), 0.7)), 0.5)


@given(st.integers(0, 2**32 - 1), st.floats(-3, 3), st.floats(0.1, 10))
@settings(max_examples=50, deadline=None)
def test_fusion_weight_affine_invariance(seed, shift, scale):
    t_d = np.random.default_rng(seed).random((6, 6))
    base = fusion_weight(t_d)
    assert np.all((base > 0) & (base < 1))
    np.testing.assert_allclose(fusion_weight(t_d * scale + shift), base, atol=1e-9)
    order = np.argsort(t_d.ravel())
    assert np.all(np.diff(base.ravel()[order]) >= 0)


def test_fuse_boundaries(rng):
    t_d, t_l = rng.random((2, 5, 5))
    np.testing.assert_allclose(fuse(t_d, t_l, np.ones((5, 5))), t_d)
    np.testing.assert_allclose(fuse(t_d, t_l, np.zeros((5, 5))), t_l)
    t = fuse(t_d, t_l, rng.random((5, 5)))
    assert np.all(t >= np.minimum(t_d, t_l) - 1e-15)
    assert np.all(t <= np.maximum(t_d, t_l) + 1e-15)


def test_coarse_channel_ordering(rng):
    img = rng.random((16, 16, 3))
    t_bar, maps = coarse_transmission(img, np.array([0.9, 0.9, 0.9]), FusionParams(window=5),
                                      return_maps=True)
    assert t_bar.shape == (3, 16, 16)
    assert np.all(maps.t_lum[0] >= maps.t_lum[1]) and np.all(maps.t_lum[1] >= maps.t_lum[2])
    assert np.all((t_bar >= 0) & (t_bar <= 1))


def test_coarse_gray_constant_differs_only_by_beta():
    img = np.full((8, 8, 3), 0.5)
    p = FusionParams(window=3)
    t_bar = coarse_transmission(img, np.ones(3), p)
    # flat dark channel -> chi = 0.5; flat luminance -> L_hat = tau
    t_d = 1 - 0.95 * 0.5
    for c, b in enumerate(p.betas):
        np.testing.assert_allclose(t_bar[c], 0.5 * t_d + 0.5 * math.exp(-b * p.tau))


def test_coarse_matches_straight_line_composition(rng):
    img = rng.random((16, 16, 3))
    A = np.array([0.85, 0.9, 0.95])
    p = FusionParams(window=7)
    # straight-line reference with plain loops / sorting
    norm = img / A
    r = 3
    dark = np.empty((16, 16))
    for i in range(16):
        for j in range(16):
            dark[i, j] = norm[max(0, i - r):i + r + 1, max(0, j - r):j + r + 1].min()
    t_d = np.clip(1 - 0.95 * dark, 0, 1)
    th1 = 20 / (t_d.max() - t_d.min())
    th2 = -10 - th1 * t_d.min()
    chi = 1 / (1 + np.exp(-th1 * t_d - th2))
    L = 0.299 * img[..., 0] + 0.587 * img[..., 1] + 0.114 * img[..., 2]
    L_star = np.sort(L.ravel())[math.ceil(0.95 * 256) - 1]
    L_hat = 3.4 / L_star * L
    expected = np.stack([np.clip(chi * t_d + (1 - chi) * np.exp(-b * L_hat), 0, 1) for b in p.betas])
    np.testing.assert_allclose(coarse_transmission(img, A, p), expected, atol=1e-12)


def test_saturation_near_extremes(rng):
    img = rng.random((20, 20, 3))
    t_bar, maps = coarse_transmission(img, np.ones(3), FusionParams(window=3), return_maps=True)
    for c in range(3):
        at_max = maps.t_dcp == maps.t_dcp.max()
        gap = np.abs(maps.t_lum[c] - maps.t_dcp)
        assert np.all(np.abs(t_bar[c] - maps.t_dcp)[at_max] <= 5e-5 * gap[at_max] + 1e-15)
        at_min = maps.t_dcp == maps.t_dcp.min()
        assert np.all(np.abs(t_bar[c] - maps.t_lum[c])[at_min] <= 5e-5 * gap[at_min] + 1e-15)


def test_param_validation():
    with pytest.raises(ValueError):
        FusionParams(window=4)
    with pytest.raises(ValueError):
        FusionParams(omega=0)
