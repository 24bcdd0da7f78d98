"""Coarse transmission: DCP map and luminance map fused by a sigmoid weight.

The DCP-based map is reliable on foreground objects, while the
luminance-based map behaves better in sky regions where the dark channel
prior breaks down.  The sigmoid weight chi goes to 1 where the DCP map is
large (foreground) and to 0 where it is small (sky).
"""
import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .airlight import window_min
from .image_core import check_color, clamp

REC601 = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class FusionParams:
    omega: float = 0.95
    window: int = 21
    tau: float = 3.4
    betas: Tuple[float, float, float] = (0.3324, 0.3433, 0.3502)
    percentile: float = 0.95

    def __post_init__(self):
        if not 0 < self.omega <= 1:
            raise ValueError("omega must lie in (0, 1]")
        if self.window < 1 or self.window % 2 == 0:
            raise ValueError("window must be a positive odd integer")
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if len(self.betas) != 3 or min(self.betas) <= 0:
            raise ValueError("betas must be three positive scattering coefficients")
        if not 0 < self.percentile < 1:
            raise ValueError("percentile must lie in (0, 1)")


@dataclass
class CoarseMaps:
    """Intermediate maps of the coarse stage (all float64)."""
    dark: np.ndarray        # (H, W)
    t_dcp: np.ndarray       # (H, W)
    luminance: np.ndarray   # (H, W), corrected luminance
    chi: np.ndarray         # (H, W)
    t_lum: np.ndarray       # (3, H, W)
    t_bar: np.ndarray       # (3, H, W)
    extras: dict = field(default_factory=dict)


def dark_channel(hazy, airlight, window=21):
    """``min_c min_{y in window(x)} I_c(y) / A_c``."""
    hazy = check_color(hazy)
    A = np.asarray(airlight, dtype=np.float64).reshape(1, 1, 3)
    if np.any(A <= 0):
        raise ValueError("airlight components must be positive")
    return window_min((hazy / A).min(axis=2), window)


def dcp_transmission(dark, omega=0.95):
    return clamp(1.0 - omega * np.asarray(dark, dtype=np.float64), 0.0, 1.0)


def luminance(hazy):
    """Rec. 601 luma."""
    return check_color(hazy) @ REC601


def nearest_rank(values, p):
    """Nearest-rank percentile: the ceil(p*N)-th smallest value."""
    v = np.sort(np.asarray(values, dtype=np.float64).ravel())
    # guard against p*N landing a hair above an integer
    rank = max(1, math.ceil(p * v.size - 1e-9))
    return v[min(rank, v.size) - 1]


def corrected_luminance(L, tau=3.4, percentile=0.95):
    L = np.asarray(L, dtype=np.float64)
    L_star = nearest_rank(L, percentile)
    if L_star <= 0:
        return np.zeros_like(L)
    return (tau / L_star) * L


def luminance_transmission(L_hat, beta):
    return np.exp(-beta * np.asarray(L_hat, dtype=np.float64))


def fusion_weight(t_d):
    """Sigmoid weight mapping the range of ``t_d`` onto exponents [-10, 10].

    A flat ``t_d`` carries no foreground/sky information and yields 0.5.
    """
    t_d = np.asarray(t_d, dtype=np.float64)
    lo, hi = t_d.min(), t_d.max()
    if hi <= lo:
        return np.full_like(t_d, 0.5)
    theta1 = 20.0 / (hi - lo)
    theta2 = -10.0 - theta1 * lo
    z = np.clip(theta1 * t_d + theta2, -10.0, 10.0)
    return 1.0 / (1.0 + np.exp(-z))


def fuse(t_d, t_l, chi):
    chi = np.asarray(chi, dtype=np.float64)
    return clamp(chi * t_d + (1.0 - chi) * t_l, 0.0, 1.0)


def coarse_transmission(hazy, airlight, params=None, return_maps=False):
    """Per-channel coarse transmission, shape (3, H, W).

    The DCP map and the weight are shared by all channels; only the
    luminance map differs, through the per-channel scattering coefficient.
    """
    params = params or FusionParams()
    hazy = check_color(hazy)
    dark = dark_channel(hazy, airlight, params.window)
    t_d = dcp_transmission(dark, params.omega)
    chi = fusion_weight(t_d)
    L_hat = corrected_luminance(luminance(hazy), params.tau, params.percentile)
    t_l = np.stack([luminance_transmission(L_hat, b) for b in params.betas])
    t_bar = np.stack([fuse(t_d, t_l[c], chi) for c in range(3)])
    if return_maps:
        return t_bar, CoarseMaps(dark, t_d, L_hat, chi, t_l, t_bar)
    return t_bar
