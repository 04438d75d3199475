"""Batch orchestration: load, normalize, solve, save, report.

A denoising run is a pure function of the input bytes and the parameters;
reports echo every parameter (including the resolved step size) so a third
party can reproduce the run exactly.  Wall time is the only nondeterministic
report field.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import ParameterError
from .fields import grad, validate_field
from .metrics import staircase_metric
from .reconstruction import ReconstructionConfig, reconstruct
from .rof import RofConfig, rof_denoise
from .smoothing import SmoothingConfig, smooth_gradient_field
from .spectral import PoissonPlan, grad_operator_norm, project_gradient_field
from .volume_io import (
    VolumeHeader,
    default_header_path,
    load_volume,
    read_header,
    save_volume,
)

__all__ = ["StepStats", "RunReport", "run_denoise", "run_project"]

MODELS = ("tvstokes", "rof")


@dataclass
class StepStats:
    """Convergence summary of one dual solve."""

    iters: int
    final_change: float
    kkt_residual: float
    objective: float


@dataclass
class RunReport:
    """Machine-readable record of one denoising run."""

    model: str
    dims: list[int]
    config: dict
    steps: dict[str, StepStats]
    normalization: dict | None
    metrics: dict | None
    wall_time_seconds: float

    def to_dict(self) -> dict:
        data = asdict(self)
        data["steps"] = {name: asdict(stats) for name, stats in self.steps.items()}
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        steps = {name: StepStats(**stats) for name, stats in data["steps"].items()}
        return cls(
            model=data["model"],
            dims=list(data["dims"]),
            config=dict(data["config"]),
            steps=steps,
            normalization=data.get("normalization"),
            metrics=data.get("metrics"),
            wall_time_seconds=float(data["wall_time_seconds"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))


def _normalize(u: np.ndarray, header: VolumeHeader):
    """Rescale to [0, 1] when the header declares a value range."""
    if header.value_range is None:
        return u, None
    lo, hi = header.value_range
    info = {"applied": True, "offset": float(lo), "scale": float(hi - lo)}
    return (u - lo) / (hi - lo), info


def _denormalize(u: np.ndarray, info: dict | None) -> np.ndarray:
    if info is None:
        return u
    return u * info["scale"] + info["offset"]


def _safe_staircase(u: np.ndarray) -> float | None:
    if any(n < 3 for n in u.shape):
        return None
    return staircase_metric(u)


def run_denoise(
    model: str,
    data_path,
    header_path=None,
    output_path=None,
    report_path=None,
    *,
    lam1: float = 0.1,
    lam2: float = 0.1,
    lam: float = 0.1,
    tau: float | None = None,
    max_iters: int = 200,
    tol: float = 1e-6,
    eps: float = 1e-8,
) -> tuple[np.ndarray, RunReport]:
    """Denoise one volume end to end and return the output with its report.

    ``tau=None`` resolves to the guaranteed step bound for the input's
    dimensionality.  When ``output_path``/``report_path`` are given the
    denoised volume and JSON report are written there.
    """
    if model not in MODELS:
        raise ParameterError(f"unknown model {model!r}; expected one of {MODELS}")
    t_start = time.perf_counter()

    header = read_header(default_header_path(data_path) if header_path is None else header_path)
    u_raw = load_volume(data_path, header_path)
    u, norm_info = _normalize(u_raw, header)
    u = validate_field(u, "input volume")
    d = u.ndim

    steps: dict[str, StepStats] = {}
    if model == "tvstokes":
        cfg1 = SmoothingConfig(lam=lam1, tau=tau, max_iters=max_iters, tol=tol)
        cfg2 = ReconstructionConfig(lam=lam2, tau=tau, max_iters=max_iters, tol=tol, eps=eps)
        resolved_tau = cfg1.validate(d)
        cfg2.validate(d)
        overridden = cfg1.tau_exceeds_bound(d)
        r1 = smooth_gradient_field(u, cfg1)
        steps["smoothing"] = StepStats(r1.iters, r1.final_change, r1.kkt_residual, r1.objective)
        r2 = reconstruct(u, r1.g, cfg2)
        steps["reconstruction"] = StepStats(r2.iters, r2.final_change, r2.kkt_residual, r2.objective)
        out = r2.u
        config = {
            "model": model,
            "lambda1": float(lam1),
            "lambda2": float(lam2),
            "eps": float(eps),
        }
    else:
        cfg = RofConfig(lam=lam, tau=tau, max_iters=max_iters, tol=tol)
        resolved_tau = cfg.validate(d)
        overridden = cfg.tau_exceeds_bound(d)
        rr = rof_denoise(u, cfg)
        steps["rof"] = StepStats(rr.iters, rr.final_change, rr.kkt_residual, rr.objective)
        out = rr.u
        config = {"model": model, "lambda": float(lam)}

    config.update(
        {
            "tau": float(resolved_tau),
            "tau_was_auto": tau is None,
            "tau_exceeds_bound": bool(overridden),
            # sharper admissible step estimated from the gradient norm;
            # informational only, the default stays at 1/(2d)
            "tau_limit_estimate": 2.0 / grad_operator_norm(u.shape) ** 2,
            "max_iters": int(max_iters),
            "tol": float(tol),
        }
    )

    out_raw = _denormalize(out, norm_info)
    metrics = {"psnr_db": None, "staircase": _safe_staircase(out_raw)}

    report = RunReport(
        model=model,
        dims=list(header.dims),
        config=config,
        steps=steps,
        normalization=norm_info,
        metrics=metrics,
        wall_time_seconds=time.perf_counter() - t_start,
    )

    if output_path is not None:
        save_volume(out_raw, output_path, dtype=header.dtype, value_range=header.value_range)
    if report_path is not None:
        Path(report_path).write_text(report.to_json() + "\n", encoding="utf-8")
    return out_raw, report


def run_project(data_path, header_path=None, output_path=None) -> list[Path]:
    """Project the input's gradient field and write one raw file per channel.

    Channel ``l`` of ``project_gradient_field(grad(u))`` goes to
    ``<output stem>_c<l>.raw`` with a matching header.  Returns the payload
    paths.
    """
    u = validate_field(load_volume(data_path, header_path), "input volume")
    plan = PoissonPlan(u.shape)
    projected = project_gradient_field(grad(u), plan)
    out = Path(output_path if output_path is not None else data_path)
    written = []
    for channel in range(projected.shape[0]):
        path = out.with_name(f"{out.stem}_c{channel}.raw")
        save_volume(projected[channel], path, dtype="f64")
        written.append(path)
    return written
