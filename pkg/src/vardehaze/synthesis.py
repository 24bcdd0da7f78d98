"""Forward haze model and depth-map presets for synthetic test data."""
import numpy as np

from .image_core import check_color

DEFAULT_SCATTER = (0.3324, 0.3433, 0.3502)


def synthesize(clean, t, airlight, clip=True):
    """``I = J t + (1 - t) A`` with per-channel or shared transmission."""
    clean = check_color(clean)
    A = np.asarray(airlight, dtype=np.float64).reshape(1, 1, 3)
    t = np.asarray(t, dtype=np.float64)
    if t.ndim == 2:
        t = np.broadcast_to(t, (3,) + t.shape)
    if t.shape != (3,) + clean.shape[:2]:
        raise ValueError(f"transmission shape {t.shape} does not match image {clean.shape}")
    tt = np.moveaxis(t, 0, -1)
    I = clean * tt + (1.0 - tt) * A
    return np.clip(I, 0.0, 1.0) if clip else I


def depth_to_transmission(depth, beta):
    depth = np.asarray(depth, dtype=np.float64)
    if np.any(depth < 0):
        raise ValueError("depth must be non-negative")
    return np.exp(-beta * depth)


def transmission_stack(depth, betas=DEFAULT_SCATTER):
    return np.stack([depth_to_transmission(depth, b) for b in betas])


def depth_preset(spec, height, width):
    """Build a depth map from a preset string.

    ``flat:D``          constant depth D (``inf`` allowed)
    ``ramp:D0:D1``      vertical ramp from D0 at the bottom row to D1 at the top
    ``hramp:D0:D1``     horizontal ramp, D0 at the left column
    """
    kind, _, rest = spec.partition(":")
    vals = [float(v) for v in rest.split(":")] if rest else []
    if kind == "flat" and len(vals) == 1:
        return np.full((height, width), vals[0])
    if kind == "ramp" and len(vals) == 2:
        col = np.linspace(vals[1], vals[0], height)
        return np.repeat(col[:, None], width, axis=1)
    if kind == "hramp" and len(vals) == 2:
        row = np.linspace(vals[0], vals[1], width)
        return np.repeat(row[None, :], height, axis=0)
    raise ValueError(f"unknown depth preset {spec!r}")
