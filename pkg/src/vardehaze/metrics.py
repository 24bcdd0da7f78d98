"""Full-reference quality metrics: PSNR and Gaussian-window SSIM."""
import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter

from .coarse import REC601

SSIM_SIGMA = 1.5
SSIM_WIN = 11
K1, K2 = 0.01, 0.03


@dataclass(frozen=True)
class QualityReport:
    psnr: float
    ssim: float


def _pair(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {a.shape} vs {b.shape}")
    return a, b


def psnr(a, b):
    """PSNR in dB for [0, 1] images; ``inf`` for identical inputs."""
    a, b = _pair(a, b)
    mse = np.mean((a - b) ** 2)
    if mse == 0:
        return math.inf
    return 10.0 * math.log10(1.0 / mse)


def _luma(x):
    return x @ REC601 if x.ndim == 3 and x.shape[-1] == 3 else x


def ssim(a, b, data_range=1.0):
    """Mean SSIM over the luminance channel.

    11x11 Gaussian window (sigma 1.5), K1=0.01, K2=0.03; statistics are
    averaged over the positions where the window fits entirely inside the
    image.
    """
    a, b = _pair(a, b)
    x, y = _luma(a), _luma(b)
    if x.shape[0] < SSIM_WIN or x.shape[1] < SSIM_WIN:
        raise ValueError(f"SSIM needs images of at least {SSIM_WIN}x{SSIM_WIN}")
    C1 = (K1 * data_range) ** 2
    C2 = (K2 * data_range) ** 2
    radius = SSIM_WIN // 2
    truncate = radius / SSIM_SIGMA

    def blur(f):
        return gaussian_filter(f, SSIM_SIGMA, truncate=truncate, mode="reflect")

    mx, my = blur(x), blur(y)
    vx = blur(x * x) - mx * mx
    vy = blur(y * y) - my * my
    cxy = blur(x * y) - mx * my
    smap = ((2 * mx * my + C1) * (2 * cxy + C2)) / ((mx ** 2 + my ** 2 + C1) * (vx + vy + C2))
    inner = smap[radius:-radius, radius:-radius]
    return float(inner.mean())


def evaluate(restored, reference):
    return QualityReport(psnr(restored, reference), ssim(restored, reference))
