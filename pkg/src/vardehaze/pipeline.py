"""End-to-end dehazing: airlight -> coarse transmission -> ADMM -> recovery."""
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Tuple

import numpy as np

from .airlight import estimate_airlight
from .coarse import FusionParams, coarse_transmission
from .image_core import check_color
from .recovery import recover
from .refinement import GOLDEN, NonFiniteError, RefineParams, refine_channels


@dataclass
class PipelineConfig:
    # coarse stage
    omega: float = 0.95
    window: int = 21
    tau: float = 3.4
    betas: Tuple[float, float, float] = (0.3324, 0.3433, 0.3502)
    percentile: float = 0.95
    # refinement
    lambda1: float = 1e-2
    lambda2: float = 5e-1
    lambda3: float = 5.0
    lambda4: float = 1.0
    lambda5: float = 1.0
    beta1: float = 1.0
    beta2: float = 1.0
    beta3: float = 1.0
    gamma: float = 2e2
    upsilon: float = GOLDEN
    t_eps: float = 1e-1
    j_eps: float = 1e-2
    max_iters: int = 30
    rel_tol: float = 1e-3
    # airlight and output handling
    airlight: Optional[Tuple[float, float, float]] = None
    airlight_patch: int = 15
    airlight_top_fraction: float = 1e-3
    mono_t: bool = False
    dump_maps: Optional[str] = None
    trace: Optional[str] = None
    transmission: Optional[str] = None

    def fusion_params(self):
        return FusionParams(self.omega, self.window, self.tau, tuple(self.betas), self.percentile)

    def refine_params(self):
        names = {f.name for f in fields(RefineParams)}
        return RefineParams(**{k: v for k, v in asdict(self).items() if k in names})

    def validate(self):
        self.fusion_params()
        self.refine_params()
        if self.airlight is not None and len(self.airlight) != 3:
            raise ValueError("airlight needs three components")
        return self


@dataclass
class DehazeResult:
    dehazed: np.ndarray
    transmission: np.ndarray            # (3, H, W) map used for recovery
    airlight: np.ndarray
    coarse: Optional[object] = None     # CoarseMaps
    traces: list = field(default_factory=list)


def dehaze(hazy, config=None, transmission=None, with_trace=False):
    """Dehaze a color image.

    ``transmission`` (an (H, W) or (3, H, W) array) bypasses both the
    coarse and refinement stages.
    """
    config = (config or PipelineConfig()).validate()
    hazy = check_color(hazy)
    if config.airlight is not None:
        A = np.asarray(config.airlight, dtype=np.float64)
    else:
        A = estimate_airlight(hazy, config.airlight_patch, config.airlight_top_fraction)

    maps, traces = None, []
    if transmission is not None:
        t = np.asarray(transmission, dtype=np.float64)
        if t.ndim == 2:
            t = np.stack([t] * 3)
        if t.shape != (3,) + hazy.shape[:2]:
            raise ValueError(f"transmission shape {t.shape} does not match image {hazy.shape}")
    else:
        t_bar, maps = coarse_transmission(hazy, A, config.fusion_params(), return_maps=True)
        if not np.all(np.isfinite(t_bar)):
            raise NonFiniteError("coarse transmission")
        res = refine_channels(t_bar, hazy, A, config.refine_params(), return_trace=with_trace)
        t, traces = res if with_trace else (res, [])

    if config.mono_t:
        t = np.broadcast_to(t.mean(axis=0), t.shape).copy()
    J = recover(hazy, t, A, config.t_eps)
    if not np.all(np.isfinite(J)):
        raise NonFiniteError("recovery")
    return DehazeResult(J, t, A, maps, traces)
