"""ADMM refinement of a coarse transmission map, one color channel at a time.

Solves

    min_{Jb, t}  l1/2 |Ib - Jb t|^2 + l2/2 |t - tb|^2
                 + l3 |W o (grad t - grad I)|_1 + l4 |grad Jb|_1 + l5 |grad t|_1

with ``Ib = A - I`` and ``Jb = A - J``.  The splitting X = grad t - grad I,
Y = grad Jb, Z = grad t turns each L1 term into a soft-threshold, and the two
quadratic blocks are solved exactly in the Fourier domain (periodic
boundaries).  Multipliers are updated by dual ascent with step ``upsilon``.
"""
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .image_core import (adjoint_gradient_spectrum, fft2, gradient,
                         gradient_transfer_spectrum, ifft2)

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


class NonFiniteError(FloatingPointError):
    """Raised when a NaN/Inf shows up inside the solver."""

    def __init__(self, stage, iteration=None):
        self.stage = stage
        self.iteration = iteration
        where = stage if iteration is None else f"{stage} at iteration {iteration}"
        super().__init__(f"non-finite values produced by {where}")


@dataclass(frozen=True)
class RefineParams:
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

    def __post_init__(self):
        for name in ("lambda1", "lambda2", "lambda3", "lambda4", "lambda5",
                     "beta1", "beta2", "beta3", "j_eps"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if not 0 < self.t_eps < 1:
            raise ValueError("t_eps must lie in (0, 1)")
        if not 0 < self.upsilon <= GOLDEN + 1e-12:
            raise ValueError("upsilon must lie in (0, (1+sqrt 5)/2]")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class AdmmState:
    t: np.ndarray
    J_bar: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    zeta: np.ndarray
    iteration: int = 0

    @classmethod
    def initial(cls, t_bar, J_bar):
        t = np.array(t_bar, dtype=np.float64)
        zeros = np.zeros((2,) + t.shape)
        return cls(t=t, J_bar=np.array(J_bar, dtype=np.float64),
                   X=zeros.copy(), Y=zeros.copy(), Z=zeros.copy(),
                   xi=zeros.copy(), eta=zeros.copy(), zeta=zeros.copy())


@dataclass
class IterationRecord:
    iter: int
    objective: float
    res_x: float
    res_y: float
    res_z: float
    dt_rel: float


@dataclass
class RefineTrace:
    records: list = field(default_factory=list)
    converged: bool = False

    @property
    def iterations(self):
        return len(self.records)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records])


def edge_weight(I_c, gamma):
    """Per-component weight ``exp(-gamma * (d I)^2)``, shape (2, H, W)."""
    return np.exp(-gamma * gradient(I_c) ** 2)


def init_jbar(hazy_c, a_c, t_bar, t_eps):
    return (a_c - np.asarray(hazy_c, dtype=np.float64)) / np.maximum(t_bar, t_eps)


def shrink(a, b):
    """Soft threshold ``max(|a| - b, 0) * sign(a)``."""
    a = np.asarray(a, dtype=np.float64)
    return np.maximum(np.abs(a) - b, 0.0) * np.sign(a)


def _floor_magnitude(x, eps):
    # sign-preserving; exact zeros go positive
    return np.where(np.abs(x) < eps, np.where(x < 0, -eps, eps), x)


def update_x(state, I_c, params, W=None):
    if W is None:
        W = edge_weight(I_c, params.gamma)
    arg = gradient(state.t) - gradient(I_c) + state.xi / params.beta1
    return shrink(arg, params.lambda3 * W / params.beta1)


def update_y(state, params):
    return shrink(gradient(state.J_bar) + state.eta / params.beta2,
                  params.lambda4 / params.beta2)


def update_z(state, params):
    return shrink(gradient(state.t) + state.zeta / params.beta3,
                  params.lambda5 / params.beta3)


def update_jbar(state, I_bar_c, params, spectrum=None):
    """Closed-form J-bar step: (l1 + b2 grad^T grad) Jb = l1 Ib/t + b2 grad^T(Y - eta/b2)."""
    H, W = state.t.shape
    Dx, Dy = spectrum if spectrum is not None else gradient_transfer_spectrum(H, W)
    energy = np.abs(Dx) ** 2 + np.abs(Dy) ** 2
    ratio = I_bar_c / np.maximum(state.t, params.t_eps)
    num = (params.lambda1 * fft2(ratio)
           + params.beta2 * adjoint_gradient_spectrum(state.Y - state.eta / params.beta2, (Dx, Dy)))
    den = params.lambda1 + params.beta2 * energy
    return ifft2(num / den).real


def psi_field(state, grad_I, params):
    X_hat = state.X + grad_I - state.xi / params.beta1
    Z_hat = state.Z - state.zeta / params.beta3
    return (params.beta1 * X_hat + params.beta3 * Z_hat) / (params.beta1 + params.beta3)


def update_t(state, I_bar_c, t_bar_c, params, spectrum=None):
    """Closed-form t step using the current (already updated) J-bar."""
    H, W = state.t.shape
    Dx, Dy = spectrum if spectrum is not None else gradient_transfer_spectrum(H, W)
    energy = np.abs(Dx) ** 2 + np.abs(Dy) ** 2
    # I = A - Ib, so grad I = -grad Ib
    grad_I = -gradient(I_bar_c)
    psi = psi_field(state, grad_I, params)
    b13 = params.beta1 + params.beta3
    ratio = I_bar_c / _floor_magnitude(state.J_bar, params.j_eps)
    num = (params.lambda1 * fft2(ratio) + params.lambda2 * fft2(t_bar_c)
           + b13 * adjoint_gradient_spectrum(psi, (Dx, Dy)))
    den = params.lambda1 + params.lambda2 + b13 * energy
    return ifft2(num / den).real


def constraint_residuals(state, I_c):
    gt = gradient(state.t)
    return (state.X - (gt - gradient(I_c)),
            state.Y - gradient(state.J_bar),
            state.Z - gt)


def update_multipliers(state, I_c, params, steplength=None):
    ups = params.upsilon if steplength is None else steplength
    rx, ry, rz = constraint_residuals(state, I_c)
    return (state.xi - ups * params.beta1 * rx,
            state.eta - ups * params.beta2 * ry,
            state.zeta - ups * params.beta3 * rz)


def objective(state, I_bar_c, t_bar_c, I_c, params, W=None):
    if W is None:
        W = edge_weight(I_c, params.gamma)
    t, J = state.t, state.J_bar
    gt = gradient(t)
    return (params.lambda1 / 2 * np.sum((I_bar_c - J * t) ** 2)
            + params.lambda2 / 2 * np.sum((t - t_bar_c) ** 2)
            + params.lambda3 * np.sum(np.abs(W * (gt - gradient(I_c))))
            + params.lambda4 * np.sum(np.abs(gradient(J)))
            + params.lambda5 * np.sum(np.abs(gt)))


def _check(arr, stage, k):
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(stage, k)


def refine(t_bar_c, hazy_c, a_c, params=None, return_trace=False):
    """Refine one channel's coarse transmission.

    Returns the refined map clamped to ``[t_eps, 1]``; with
    ``return_trace=True`` a :class:`RefineTrace` is returned alongside.
    Stops when the relative change of t drops below ``rel_tol`` or after
    ``max_iters`` iterations.
    """
    params = params or RefineParams()
    t_bar_c = np.asarray(t_bar_c, dtype=np.float64)
    I_c = np.asarray(hazy_c, dtype=np.float64)
    if t_bar_c.shape != I_c.shape or t_bar_c.ndim != 2:
        raise ValueError("transmission and channel must be matching 2-D fields")
    I_bar = a_c - I_c
    W = edge_weight(I_c, params.gamma)
    spectrum = gradient_transfer_spectrum(*I_c.shape)
    state = AdmmState.initial(t_bar_c, init_jbar(I_c, a_c, t_bar_c, params.t_eps))
    trace = RefineTrace()

    for k in range(1, params.max_iters + 1):
        t_old = state.t
        state.X = update_x(state, I_c, params, W)
        state.Y = update_y(state, params)
        state.Z = update_z(state, params)
        _check(state.X, "X-subproblem", k)
        _check(state.Y, "Y-subproblem", k)
        _check(state.Z, "Z-subproblem", k)
        state.J_bar = update_jbar(state, I_bar, params, spectrum)
        _check(state.J_bar, "J-subproblem", k)
        state.t = update_t(state, I_bar, t_bar_c, params, spectrum)
        _check(state.t, "t-subproblem", k)
        state.xi, state.eta, state.zeta = update_multipliers(state, I_c, params)
        _check(np.stack([state.xi, state.eta, state.zeta]), "multiplier update", k)
        state.iteration = k

        dt_rel = np.linalg.norm(state.t - t_old) / max(np.linalg.norm(t_old), 1e-300)
        if return_trace:
            rx, ry, rz = constraint_residuals(state, I_c)
            trace.records.append(IterationRecord(
                k, float(objective(state, I_bar, t_bar_c, I_c, params, W)),
                float(np.linalg.norm(rx)), float(np.linalg.norm(ry)),
                float(np.linalg.norm(rz)), float(dt_rel)))
        if dt_rel < params.rel_tol:
            trace.converged = True
            break

    t = np.clip(state.t, params.t_eps, 1.0)
    if return_trace:
        return t, trace
    return t


def refine_channels(t_bar, hazy, airlight, params=None, return_trace=False):
    """Run :func:`refine` independently on each of the three channels."""
    out, traces = [], []
    for c in range(3):
        res = refine(t_bar[c], hazy[..., c], float(airlight[c]), params, return_trace)
        if return_trace:
            out.append(res[0])
            traces.append(res[1])
        else:
            out.append(res)
    t = np.stack(out)
    return (t, traces) if return_trace else t


def with_overrides(params, **kwargs):
    return replace(params, **{k: v for k, v in kwargs.items() if v is not None})
