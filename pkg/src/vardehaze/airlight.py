"""Global atmospheric light estimation."""
import math

import numpy as np
from scipy.ndimage import minimum_filter

from .image_core import check_color

A_MIN = 0.05


def window_min(field, window):
    """Min over a ``window x window`` neighbourhood truncated at the borders."""
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be a positive odd integer, got {window}")
    if window == 1:
        return np.array(field, dtype=np.float64)
    # +inf padding never wins the min, so this is the min over in-image pixels
    return minimum_filter(field, size=window, mode="constant", cval=np.inf)


def estimate_airlight(hazy, patch=15, top_fraction=1e-3, a_min=A_MIN):
    """Estimate A from the brightest pixels of the dark channel.

    The ``top_fraction`` of pixels with the largest dark-channel value (at
    least one) are selected and the hazy image is averaged over them per
    channel.  Each component is clamped to ``[a_min, 1]``.
    """
    hazy = check_color(hazy)
    if not 0 < top_fraction <= 1:
        raise ValueError("top_fraction must lie in (0, 1]")
    dark = window_min(hazy.min(axis=2), patch)
    n = dark.size
    k = max(1, min(n, math.ceil(top_fraction * n)))
    order = np.argsort(-dark.ravel(), kind="stable")[:k]
    A = hazy.reshape(-1, 3)[order].mean(axis=0)
    return np.clip(A, a_min, 1.0)
