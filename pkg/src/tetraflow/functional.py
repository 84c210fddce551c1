"""Lobachevsky function, co-volume, total co-volume deficit H, and volume.

The co-volume of a tetrahedron is recovered as a line integral of the closed
1-form sum_i alpha_i dl_i from the origin, plus the origin value 16 L(pi/4)
where L is the Lobachevsky function.  The straight segment is a valid path
because the form is closed; adaptive quadrature handles the clamp kinks that
appear for degenerate length vectors.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta as _zeta

from .tetra import extended_angles, is_hyperideal
from .triangulation import Triangulation

# Coefficients of the log-sine power series: L(t) = t(1 - log 2t)
#   + sum_{n>=1} zeta(2n) / (n (2n+1)) * t^(2n+1) / pi^(2n),
# valid for |t| <= pi/2 after argument reduction.  The tail is bounded by a
# geometric series with ratio (t/pi)^2 <= 1/4, so 56 terms give < 1e-16.
_SERIES_N = np.arange(1, 57)
_SERIES_COEF = _zeta(2.0 * _SERIES_N) / (_SERIES_N * (2 * _SERIES_N + 1) * math.pi ** (2.0 * _SERIES_N))


def lobachevsky(theta):
    """Lobachevsky function, accurate to <= 1e-12 absolute error.

    Odd and pi-periodic; the argument is reduced to [0, pi/2] before the
    series is summed.  Accepts scalars or arrays.
    """
    theta = np.asarray(theta, dtype=float)
    scalar = theta.ndim == 0
    t = np.mod(theta, math.pi)
    sign = np.where(t > math.pi / 2, -1.0, 1.0)
    t = np.where(t > math.pi / 2, math.pi - t, t)
    powers = t[..., None] ** (2 * _SERIES_N + 1)
    series = powers @ _SERIES_COEF
    with np.errstate(divide="ignore", invalid="ignore"):
        main = t * (1.0 - np.log(2.0 * t))
    out = sign * np.where(t == 0.0, 0.0, main + series)
    return float(out) if scalar else out


COVOLUME_AT_ZERO = float(16.0 * lobachevsky(math.pi / 4.0))


class QuadratureError(RuntimeError):
    """Requested tolerance was not reached within the subdivision budget."""


@dataclass(frozen=True)
class CovolumeResult:
    value: float
    quadrature_error_estimate: float


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)
_MAX_DEPTH = 48


def angle_form_integral(start, end, tolerance: float = 1e-9) -> tuple[float, float]:
    """Integral of sum_i alpha_i dl_i along the straight segment start -> end.

    Returns (value, error_estimate).  Adaptive composite 15-point
    Gauss-Legendre with recursive bisection; each panel must meet the
    tolerance prorated by its width, so the accumulated estimate stays below
    ``tolerance``.
    """
    a = np.asarray(start, dtype=float)
    b = np.asarray(end, dtype=float)
    if a.shape != (6,) or b.shape != (6,):
        raise ValueError("segment endpoints must be 6-vectors")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    direction = b - a

    def integrand(ts: np.ndarray) -> np.ndarray:
        points = a[None, :] + ts[:, None] * direction[None, :]
        return extended_angles(points) @ direction

    def panel(lo: float, hi: float) -> float:
        ts = 0.5 * (hi - lo) * _GL_NODES + 0.5 * (lo + hi)
        return 0.5 * (hi - lo) * float(_GL_WEIGHTS @ integrand(ts))

    def adapt(lo: float, hi: float, whole: float, depth: int) -> tuple[float, float]:
        mid = 0.5 * (lo + hi)
        left = panel(lo, mid)
        right = panel(mid, hi)
        err = abs(left + right - whole)
        if err <= tolerance * (hi - lo):
            return left + right, err
        if depth >= _MAX_DEPTH:
            raise QuadratureError(
                f"tolerance {tolerance} not reached on [{lo}, {hi}] at depth {depth}"
            )
        lv, le = adapt(lo, mid, left, depth + 1)
        rv, re = adapt(mid, hi, right, depth + 1)
        return lv + rv, le + re

    value, err = adapt(0.0, 1.0, panel(0.0, 1.0), 0)
    return value, err


def covolume_tet(l, tolerance: float = 1e-9) -> CovolumeResult:
    """Co-volume of one generalized tetrahedron with the given edge lengths."""
    l = np.asarray(l, dtype=float)
    if not np.all(np.isfinite(l)):
        raise ValueError("edge lengths must be finite")
    value, err = angle_form_integral(np.zeros(6), l, tolerance)
    return CovolumeResult(COVOLUME_AT_ZERO + value, err)


def volume_tet(l, tolerance: float = 1e-9) -> float:
    """Hyperbolic volume (cov minus the angle-length pairing, halved).

    Only defined for genuinely hyper-ideal length vectors.
    """
    l = np.asarray(l, dtype=float)
    if not is_hyperideal(l):
        raise ValueError("length vector is not hyper-ideal")
    cov = covolume_tet(l, tolerance).value
    pairing = float(extended_angles(l) @ l)
    return 0.5 * (cov - pairing)


def total_H(tri: Triangulation, metric, tolerance: float = 1e-9) -> float:
    """Total co-volume minus 2 pi times the total class length.

    The negative gradient of this functional with respect to the class
    lengths is the generalized Ricci curvature vector; it is non-increasing
    along the extended Ricci flow.
    """
    metric = np.asarray(metric, dtype=float)
    if metric.shape != (tri.edge_class_count,):
        raise ValueError(
            f"metric has {metric.shape} entries, triangulation has {tri.edge_class_count} classes"
        )
    if not np.all(metric > 0.0):
        raise ValueError("metric lengths must be positive")
    total = 0.0
    for row in tri.labels:
        total += covolume_tet(metric[list(row)], tolerance).value
    return total - 2.0 * math.pi * float(metric.sum())
