"""Generalized Ricci curvature and the extended combinatorial Ricci flow.

The flow dl/dt = K(l) * l (componentwise) is integrated in logarithmic
coordinates u = log l, which linearizes the product and keeps every length
positive by construction.  The stepper is classical RK4 with step-doubling
error control; the residual is the sup norm of the curvature vector.
"""

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import bounds
from .functional import total_H
from .tetra import extended_angles
from .triangulation import Triangulation

# Local-error target for the step-doubling controller.  The flow is
# self-correcting near its attractor (the discrete fixed point is an exact
# curvature zero), so this only shapes the transient.
_LOCAL_ERROR_TOL = 1e-9
_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0

# H is evaluated at trace samples at this quadrature tolerance; the
# monotonicity checks downstream assume noise well below 1e-8 per sample.
_H_QUAD_TOL = 1e-10


def tet_lengths(tri: Triangulation, metric) -> np.ndarray:
    """Pull the per-class metric back to a (tet_count, 6) length array."""
    metric = _validated_metric(tri, metric)
    return metric[np.asarray(tri.labels)]


def _validated_metric(tri: Triangulation, metric) -> np.ndarray:
    metric = np.asarray(metric, dtype=float)
    if metric.shape != (tri.edge_class_count,):
        raise ValueError(
            f"metric has shape {metric.shape}, triangulation has "
            f"{tri.edge_class_count} edge classes"
        )
    if not np.all(np.isfinite(metric)) or not np.all(metric > 0.0):
        raise ValueError("metric lengths must be positive and finite")
    return metric


def curvature(tri: Triangulation, metric) -> np.ndarray:
    """Generalized Ricci curvature: 2 pi minus the cone angle of each class."""
    metric = _validated_metric(tri, metric)
    labels = np.asarray(tri.labels)
    angles = extended_angles(metric[labels])
    K = np.full(tri.edge_class_count, 2.0 * math.pi)
    np.add.at(K, labels.ravel(), -angles.ravel())
    return K


def length_window(valence: int) -> tuple[float, float]:
    """Certified length window [arccosh(1 + mu_v), arccosh(b_v)] for one class.

    Any solution of the flow started inside the window stays in it, and the
    zero-curvature metric lies in it.  Valences below 9 fall back to the
    valence-9 window (the certificate does not cover them).
    """
    v = max(valence, 9)
    lo = math.acosh(1.0 + bounds.mu_n(v))
    hi = math.acosh(bounds.b_n(v))
    if not lo < hi:
        raise ValueError(f"empty length window for valence {valence}")
    return lo, hi


def default_initial_metric(tri: Triangulation) -> np.ndarray:
    """Per-class start point: midpoint of the certified window, with the upper
    endpoint capped at arccosh(1.9) to satisfy the stricter initial-data
    hypothesis of the length-bound certificates.

    Classes of valence < 9 violate the convergence theorem's hypothesis; a
    warning is issued and the valence-9 window is used for them.
    """
    low = [v for v in tri.valences if v < 9]
    if low:
        warnings.warn(
            f"valences {sorted(set(low))} fall below 9; convergence is not guaranteed",
            stacklevel=2,
        )
    cap = math.acosh(1.9)
    out = np.empty(tri.edge_class_count)
    for c, v in enumerate(tri.valences):
        lo, hi = length_window(v)
        out[c] = 0.5 * (lo + min(hi, cap))
    return out


@dataclass(frozen=True)
class FlowConfig:
    residual_tolerance: float = 1e-10
    max_time: float = 200.0
    initial_step: float = 0.05
    min_step: float = 1e-12
    max_step: float = 0.25
    trace_stride: int = 1

    def __post_init__(self):
        if self.residual_tolerance <= 0:
            raise ValueError("residual_tolerance must be positive")
        if self.min_step > self.max_step:
            raise ValueError("min_step must not exceed max_step")
        if self.trace_stride < 1:
            raise ValueError("trace_stride must be >= 1")


@dataclass(frozen=True)
class RateFit:
    slope: float
    r_squared: float
    sample_count: int


@dataclass(frozen=True)
class FlowTrace:
    """Sampled solution of the extended Ricci flow."""

    times: np.ndarray
    metrics: np.ndarray
    residuals: np.ndarray
    h_values: np.ndarray
    converged: bool
    steps_accepted: int
    step_underflow: bool = False
    rate: Optional[float] = field(default=None, compare=False)

    @property
    def final_metric(self) -> np.ndarray:
        return self.metrics[-1]

    @property
    def final_residual(self) -> float:
        return float(self.residuals[-1])


def run_flow(tri: Triangulation, l0, config: Optional[FlowConfig] = None) -> FlowTrace:
    """Integrate the extended Ricci flow from ``l0`` until the curvature
    residual drops to the tolerance or the flow time budget runs out.

    Deterministic: identical inputs and config give bitwise-identical traces.
    A step-size underflow aborts the run and returns the partial trace with
    ``step_underflow`` set.
    """
    cfg = config or FlowConfig()
    l0 = _validated_metric(tri, l0)
    if any(v < 9 for v in tri.valences):
        warnings.warn(
            "some edge valences fall below 9; convergence is not guaranteed", stacklevel=2
        )

    def rhs(u: np.ndarray) -> np.ndarray:
        return curvature(tri, np.exp(u))

    def rk4(u: np.ndarray, h: float) -> np.ndarray:
        k1 = rhs(u)
        k2 = rhs(u + 0.5 * h * k1)
        k3 = rhs(u + 0.5 * h * k2)
        k4 = rhs(u + h * k3)
        return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    u = np.log(l0)
    t = 0.0
    h = min(cfg.initial_step, cfg.max_step)
    steps = 0
    underflow = False

    residual = float(np.max(np.abs(rhs(u))))
    times = [t]
    metrics = [np.exp(u)]
    residuals = [residual]
    pending = 0  # accepted steps since the last recorded sample

    while residual > cfg.residual_tolerance and t < cfg.max_time:
        h = min(h, cfg.max_time - t)
        full = rk4(u, h)
        half = rk4(rk4(u, 0.5 * h), 0.5 * h)
        err = float(np.max(np.abs(full - half))) / 15.0
        accept = err <= _LOCAL_ERROR_TOL
        if not accept and h <= cfg.min_step:
            underflow = True
            break
        if accept:
            u = half
            t += h
            steps += 1
            pending += 1
            residual = float(np.max(np.abs(rhs(u))))
            done = residual <= cfg.residual_tolerance or t >= cfg.max_time
            if pending >= cfg.trace_stride or done:
                times.append(t)
                metrics.append(np.exp(u))
                residuals.append(residual)
                pending = 0
        factor = _SAFETY * (_LOCAL_ERROR_TOL / max(err, 1e-300)) ** 0.2
        h = max(cfg.min_step, min(cfg.max_step, h * min(_MAX_FACTOR, max(_MIN_FACTOR, factor))))

    if pending > 0:  # stride can leave the last accepted state unrecorded
        times.append(t)
        metrics.append(np.exp(u))
        residuals.append(residual)

    h_values = np.array([total_H(tri, m, _H_QUAD_TOL) for m in metrics])
    trace = FlowTrace(
        times=np.array(times),
        metrics=np.array(metrics),
        residuals=np.array(residuals),
        h_values=h_values,
        converged=residual <= cfg.residual_tolerance,
        steps_accepted=steps,
        step_underflow=underflow,
    )
    try:
        return replace(trace, rate=log_residual_fit(trace).slope)
    except ValueError:
        return trace


def log_residual_fit(trace: FlowTrace) -> RateFit:
    """Least-squares line through (t, log residual) over the final half of the
    trace.  Requires at least 10 positive-residual samples overall."""
    mask_pos = trace.residuals > 0.0
    if int(mask_pos.sum()) < 10:
        raise ValueError("need at least 10 samples with positive residuals")
    t0, t1 = float(trace.times[0]), float(trace.times[-1])
    window = (trace.times >= t0 + 0.5 * (t1 - t0)) & mask_pos
    if int(window.sum()) < 2:
        raise ValueError("final half of the trace has fewer than 2 usable samples")
    ts = trace.times[window]
    ys = np.log(trace.residuals[window])
    design = np.stack([np.ones_like(ts), ts], axis=1)
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    fitted = design @ coef
    ss_res = float(np.sum((ys - fitted) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return RateFit(slope=float(coef[1]), r_squared=r2, sample_count=int(window.sum()))


def convergence_rate(trace: FlowTrace) -> float:
    """Slope of the log-residual fit; negative for a converging run."""
    return log_residual_fit(trace).slope
