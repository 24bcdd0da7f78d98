"""Haze-free image reconstruction from transmission and airlight."""
import numpy as np

from .image_core import check_color


def _per_channel(t, shape):
    t = np.asarray(t, dtype=np.float64)
    if t.ndim == 2:
        t = np.broadcast_to(t, (3,) + t.shape)
    if t.shape != (3,) + shape:
        raise ValueError(f"transmission shape {t.shape} does not match image {shape}")
    return np.moveaxis(t, 0, -1)


def recover(hazy, t, airlight, t_eps=0.1, clip=True):
    """``J = (I - A) / max(t, t_eps) + A``, per channel.

    ``t`` is either one (H, W) map shared by all channels or a (3, H, W)
    stack.  Pass ``clip=False`` to get the unclamped reconstruction.
    """
    hazy = check_color(hazy)
    A = np.asarray(airlight, dtype=np.float64).reshape(1, 1, 3)
    tt = _per_channel(t, hazy.shape[:2])
    J = (hazy - A) / np.maximum(tt, t_eps) + A
    return np.clip(J, 0.0, 1.0) if clip else J
