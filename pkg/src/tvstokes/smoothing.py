"""Gradient-field smoothing: the first half of the two-step denoiser.

Given a noisy image ``u0`` with gradient field ``g0 = grad(u0)``, this module
minimizes

    iso_l1(grad_vec(g)) + 1/(2*lam) * ||g - g0||_2^2

over fields ``g`` constrained to stay gradients of some image.  The
constraint is enforced through the orthogonal projector onto gradient fields,
and the minimum is found by a semi-implicit dual projection iteration on a
tensor-valued dual variable ``p`` with pointwise tuple norms at most 1:

    p <- unit_clip(p - tau * grad_vec(project(adjoint_grad_tensor(p)) - g0/lam))

The iteration is nonexpansive for ``tau <= 1/(2d)``.  The smoothed field is
recovered from the final dual as ``g = g0 - lam * project(adjoint_grad_tensor(p))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DivergenceError, ParameterError
from .fields import (
    adjoint_grad_tensor,
    grad,
    grad_vec,
    inner,
    iso_l1_norm,
    max_tuple_norm,
    tuple_norm,
    unit_clip,
    validate_field,
)
from .spectral import PoissonPlan, dual_step_bound, project_gradient_field

__all__ = [
    "SmoothingConfig",
    "SmoothingResult",
    "dual_step",
    "smooth_gradient_field",
    "smoothing_objective",
    "smoothing_kkt_residual",
]


@dataclass(frozen=True)
class SmoothingConfig:
    """Iteration parameters for the gradient-field smoothing solve.

    ``tau=None`` resolves to the guaranteed step ``1/(2d)``.  Larger values
    are accepted but flagged by :meth:`tau_exceeds_bound`.
    """

    lam: float = 0.1
    tau: float | None = None
    max_iters: int = 200
    tol: float = 1e-6

    def resolve_tau(self, ndim: int) -> float:
        return dual_step_bound(ndim) if self.tau is None else float(self.tau)

    def tau_exceeds_bound(self, ndim: int) -> bool:
        return self.resolve_tau(ndim) > dual_step_bound(ndim) + 1e-15

    def validate(self, ndim: int) -> float:
        """Check parameter ranges and return the resolved step size."""
        if self.lam <= 0:
            raise ParameterError(f"lam must be positive, got {self.lam}")
        if self.max_iters < 1:
            raise ParameterError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol < 0:
            raise ParameterError(f"tol must be nonnegative, got {self.tol}")
        tau = self.resolve_tau(ndim)
        if tau <= 0:
            raise ParameterError(f"tau must be positive, got {tau}")
        return tau


@dataclass(frozen=True)
class SmoothingResult:
    """Smoothed gradient field plus the final dual and solve diagnostics."""

    g: np.ndarray
    p: np.ndarray
    iters: int
    final_change: float
    kkt_residual: float
    objective: float


def _update(p, g0_scaled, tau, plan):
    """One dual step; the pre-clip value is evaluated exactly once."""
    w = grad_vec(project_gradient_field(adjoint_grad_tensor(p), plan) - g0_scaled)
    return unit_clip(p - tau * w, channel_ndim=2)


def dual_step(p: np.ndarray, g0: np.ndarray, cfg: SmoothingConfig) -> np.ndarray:
    """Apply one semi-implicit dual update to a feasible tensor dual.

    Inputs must be finite with pointwise tuple norms of ``p`` at most 1;
    the output is feasible again by construction.
    """
    p = np.asarray(p, dtype=np.float64)
    g0 = np.asarray(g0, dtype=np.float64)
    if g0.ndim != g0.shape[0] + 1:
        raise DimensionError(f"not a vector field: shape {g0.shape}")
    d = g0.shape[0]
    if p.shape != (d, d) + g0.shape[1:]:
        raise DimensionError(f"dual shape {p.shape} does not match data shape {g0.shape}")
    tau = cfg.validate(d)
    if max_tuple_norm(p, channel_ndim=2) > 1.0 + 1e-12:
        raise ParameterError("dual field violates the pointwise unit bound")
    plan = PoissonPlan(g0.shape[1:])
    p_next = _update(p, g0 / cfg.lam, tau, plan)
    if not np.isfinite(p_next).all():
        raise DivergenceError("non-finite values in dual update")
    return p_next


def smooth_gradient_field(u_noisy: np.ndarray, cfg: SmoothingConfig) -> SmoothingResult:
    """Smooth the gradient field of a noisy image by dual projection.

    Starts from a zero dual and iterates until the pointwise max norm of the
    dual increment drops to ``cfg.tol`` or ``cfg.max_iters`` is reached.
    """
    u_noisy = validate_field(u_noisy, "u_noisy")
    d = u_noisy.ndim
    tau = cfg.validate(d)
    plan = PoissonPlan(u_noisy.shape)

    g0 = grad(u_noisy)
    g0_scaled = g0 / cfg.lam
    p = np.zeros((d, d) + u_noisy.shape)
    iters = 0
    change = 0.0
    for k in range(1, cfg.max_iters + 1):
        p_next = _update(p, g0_scaled, tau, plan)
        change = max_tuple_norm(p_next - p, channel_ndim=2)
        if not math.isfinite(change):
            raise DivergenceError(f"dual update diverged at iteration {k}")
        p = p_next
        iters = k
        if change <= cfg.tol:
            break

    g = g0 - cfg.lam * project_gradient_field(adjoint_grad_tensor(p), plan)
    return SmoothingResult(
        g=g,
        p=p,
        iters=iters,
        final_change=change,
        kkt_residual=smoothing_kkt_residual(p, g0, cfg.lam, plan),
        objective=smoothing_objective(g, g0, cfg.lam),
    )


def smoothing_objective(g: np.ndarray, g0: np.ndarray, lam: float) -> float:
    """Value of the smoothing functional at a candidate field ``g``."""
    if lam <= 0:
        raise ParameterError(f"lam must be positive, got {lam}")
    g = np.asarray(g, dtype=np.float64)
    g0 = np.asarray(g0, dtype=np.float64)
    diff = g - g0
    return iso_l1_norm(grad_vec(g), channel_ndim=2) + 0.5 / lam * inner(diff, diff)


def smoothing_kkt_residual(
    p: np.ndarray, g0: np.ndarray, lam: float, plan: PoissonPlan | None = None
) -> float:
    """Max-abs residual of the dual stationarity conditions.

    With ``w = grad_vec(project(adjoint_grad_tensor(p)) - g0/lam)`` the
    fixed points satisfy ``w + |w| * p = 0`` entrywise, ``|w|`` being the
    pointwise tuple norm.
    """
    if lam <= 0:
        raise ParameterError(f"lam must be positive, got {lam}")
    p = np.asarray(p, dtype=np.float64)
    g0 = np.asarray(g0, dtype=np.float64)
    w = grad_vec(project_gradient_field(adjoint_grad_tensor(p), plan) - g0 / lam)
    return float(np.max(np.abs(w + tuple_norm(w, channel_ndim=2) * p)))
