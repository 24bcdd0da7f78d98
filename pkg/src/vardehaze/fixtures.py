"""Deterministic synthetic scenes used by the tests, demos and CLI checks.

Scenes are generated procedurally so no binary assets need to ship with the
package.  ``outdoor_scene`` mimics the usual dehazing test content: a sky
band on top and saturated, textured foreground objects below (so the dark
channel of the clean image is close to zero outside the sky).
"""
import numpy as np

from .synthesis import DEFAULT_SCATTER, depth_preset, synthesize, transmission_stack

FIXTURE_AIRLIGHT = (0.8, 0.8, 0.8)
FIXTURE_DEPTH = "ramp:0.3:3.5"

_PALETTE = np.array([
    [0.70, 0.18, 0.10],
    [0.12, 0.45, 0.15],
    [0.10, 0.20, 0.55],
    [0.65, 0.55, 0.08],
    [0.35, 0.08, 0.40],
    [0.05, 0.40, 0.45],
    [0.50, 0.30, 0.05],
])


def outdoor_scene(size=256, seed=0, sky_fraction=0.3):
    rng = np.random.default_rng(seed)
    h = w = size
    img = np.empty((h, w, 3))
    horizon = int(round(sky_fraction * h))

    # sky: smooth vertical blend
    s = np.linspace(0.0, 1.0, max(horizon, 1))[:, None]
    top = np.array([0.45, 0.62, 0.88])
    bottom = np.array([0.72, 0.80, 0.90])
    img[:horizon] = (top * (1 - s) + bottom * s)[:, None, :]

    # ground: blocky objects of saturated colors with fine texture
    block = max(size // 8, 2)
    by = -(-(h - horizon) // block)
    bx = -(-w // block)
    labels = rng.integers(0, len(_PALETTE), size=(by, bx))
    colors = _PALETTE[labels]
    ground = np.repeat(np.repeat(colors, block, axis=0), block, axis=1)[: h - horizon, :w]
    shade = 0.85 + 0.3 * rng.random((h - horizon, w, 1))
    img[horizon:] = ground * shade
    # thin dark outlines so every window of the foreground sees a dark pixel
    img[horizon::block, :] *= 0.2
    img[horizon:, ::block] *= 0.2
    return np.clip(img, 0.0, 1.0)


def step_edge(size=64, low=(0.15, 0.25, 0.55), high=(0.65, 0.45, 0.10)):
    img = np.empty((size, size, 3))
    img[:, : size // 2] = low
    img[:, size // 2:] = high
    return img


def hazy_pair(size=256, seed=0, depth=FIXTURE_DEPTH, airlight=FIXTURE_AIRLIGHT,
              betas=DEFAULT_SCATTER):
    """Return ``(clean, hazy, t, airlight)`` for the outdoor scene."""
    clean = outdoor_scene(size, seed)
    t = transmission_stack(depth_preset(depth, size, size), betas)
    A = np.asarray(airlight, dtype=np.float64)
    return clean, synthesize(clean, t, A), t, A


def hazy_step_edge(size=64, depth="ramp:0.5:2.5", airlight=FIXTURE_AIRLIGHT):
    """Step-edge scene under a depth ramp; returns ``(clean, hazy, t, airlight)``."""
    clean = step_edge(size)
    t = transmission_stack(depth_preset(depth, size, size))
    A = np.asarray(airlight, dtype=np.float64)
    return clean, synthesize(clean, t, A), t, A
