"""Scalar bound functions, the embedded constant table, and verification suites.

Everything here is about the certified window for zero-curvature metrics on
complexes whose edge valences are all >= 9: the per-valence cosh-length upper
bound b_n, the lower-bound parameter mu_n obtained from a fixed-point
iteration, the angle-sum certificates h1..h4, and grid checks of the
monotonicity statements the certificates rest on.

The constant table is embedded verbatim with a checksum; verify_table1
re-derives every inequality instead of trusting the table.
"""

import hashlib
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .tetra import angle_cosine

COS_2PI_9 = math.cos(2.0 * math.pi / 9.0)
COS_2PI_10 = math.cos(2.0 * math.pi / 10.0)
TWO_PI = 2.0 * math.pi

# Fixed parameters consumed by h3/h4 (set once the global cosh-length bound
# 1.98 is available; see the two-round bootstrap in tests).
B_REFERENCE = 1.98
D_18 = 1.9454
DELTA_17 = 0.0314
DELTA_9 = 0.125


def b_n(n: int) -> float:
    """Per-valence cosh-length upper bound; b_9 = 2, decreasing to 1."""
    if n < 9:
        raise ValueError(f"valence must be >= 9, got {n}")
    if n == 9:
        return 2.0
    return 16.0 / (1.0 + math.cos(2.0 * math.pi / n)) - 7.0


def f_xi(xi: float, delta: float) -> float:
    """Lower bound for the angle cosine when one edge has cosh length 1 + delta
    and the others are at least 1 + xi (and at most 2)."""
    if xi < 0 or delta < 0:
        raise ValueError("xi and delta must be non-negative")
    s = (1.0 + xi) ** 2
    return (-2.0 * delta**2 + 2.0 * delta * (s - 2.0) + 4.0 * s) / (
        delta**2 + 10.0 * delta + 4.0 * s
    )


def eta(xi: float, y: float) -> float:
    """Inverse of f_xi in its second argument: the unique delta >= 0 with
    f_xi(delta) = y, written via the quadratic formula."""
    if not 0.0 < y < 1.0:
        raise ValueError(f"y must lie in (0, 1), got {y}")
    if xi < 0:
        raise ValueError("xi must be non-negative")
    s = (1.0 + xi) ** 2
    t = 2.0 + 5.0 * y - s
    return (-t + math.sqrt(t * t + 4.0 * (2.0 + y) * (1.0 - y) * s)) / (2.0 + y)


def xi_sequence(tolerance: float, max_iter: int = 10**6) -> list[float]:
    """Iterates of xi_{k+1} = eta_{xi_k}(cos(2 pi / 9)) from 0, until the
    increment is at most ``tolerance``.  The sequence is non-decreasing."""
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    seq = [0.0]
    for _ in range(max_iter):
        nxt = eta(seq[-1], COS_2PI_9)
        seq.append(nxt)
        if abs(nxt - seq[-2]) <= tolerance:
            return seq
    raise RuntimeError(f"fixed point not reached within {max_iter} iterations")


def _cubic_residual(x: float) -> float:
    # Limit equation of the fixed-point iteration.
    c = COS_2PI_9
    return -2.0 * x**3 + (5.0 * c - 6.0) * x**2 + (18.0 * c - 6.0) * x + 4.0 * c - 4.0


@lru_cache(maxsize=None)
def xi_infinity(tolerance: float = 1e-12) -> float:
    """Limit of the fixed-point iteration; lies in [0.125, 0.13]."""
    value = xi_sequence(tolerance)[-1]
    if not 0.125 <= value <= 0.13:
        raise RuntimeError(f"fixed point {value} escaped [0.125, 0.13]")
    if abs(_cubic_residual(value)) > 10.0 * tolerance:
        raise RuntimeError(f"fixed point {value} fails the limit equation")
    return value


def mu_n(n: int) -> float:
    """Per-valence lower-bound parameter; mu_9 is the fixed point itself."""
    if n < 9:
        raise ValueError(f"valence must be >= 9, got {n}")
    if n == 9:
        return xi_infinity()
    return eta(xi_infinity(), math.cos(2.0 * math.pi / n))


def _b_of(y: float) -> float:
    return 16.0 / (y + 1.0) - 7.0


def beta(y: float) -> float:
    """Cosh-length bound as a function of y = cos(2 pi / n), linearly adjusted
    on [cos(2 pi / 9), cos(2 pi / 10)] so that beta(cos(2 pi / 9)) = 2."""
    if not COS_2PI_9 - 1e-9 <= y <= 1.0:
        raise ValueError(f"y must lie in [cos(2 pi / 9), 1], got {y}")
    if y >= COS_2PI_10:
        return _b_of(y)
    b9 = _b_of(COS_2PI_9)
    b10 = _b_of(COS_2PI_10)
    return ((2.0 - b10) * _b_of(y) - (2.0 - b9) * b10) / (b9 - b10)


def _G(dl, e2, e3, e5, e6, b2, b3, b5, b6):
    num = 1.0 + (
        dl * ((1.0 + e2) * (1.0 + e5) + (1.0 + e3) * (1.0 + e6)) - 2.0 * dl * (dl + 2.0)
    ) / ((2.0 + e2 + e6) * (2.0 + e3 + e5))
    r1 = np.sqrt(1.0 + (dl * dl + 2.0 * (1.0 + b2 * b6) * dl) / (2.0 + e2 + e6) ** 2)
    r2 = np.sqrt(1.0 + (dl * dl + 2.0 * (1.0 + b3 * b5) * dl) / (2.0 + e3 + e5) ** 2)
    return num / (r1 * r2)


def psi(xi: float, delta: float, y2: float, y3: float, y5: float, y6: float) -> float:
    """Angle-cosine lower bound in terms of the neighbour valence cosines.

    Reduces to f at the all-nine corner: psi(xi, d, c, c, c, c) with
    c = cos(2 pi / 9) equals f_{eta(xi, c)}(d).
    """
    if not 0.0 <= xi <= 0.13:
        raise ValueError(f"xi must lie in [0, 0.13], got {xi}")
    if not 0.0 <= delta <= 0.13:
        raise ValueError(f"delta must lie in [0, 0.13], got {delta}")
    ys = (y2, y3, y5, y6)
    for y in ys:
        if not COS_2PI_9 - 1e-9 <= y < 1.0:
            raise ValueError(f"y must lie in [cos(2 pi / 9), 1), got {y}")
    e = [eta(xi, y) for y in ys]
    b = [beta(y) for y in ys]
    return float(_G(delta, e[0], e[1], e[2], e[3], b[0], b[1], b[2], b[3]))


def _check_unit_range(**kwargs: float) -> None:
    for name, v in kwargs.items():
        if not 1.0 <= v <= 2.0:
            raise ValueError(f"{name} must lie in [1, 2], got {v}")


def _acos(v: float) -> float:
    return math.acos(max(-1.0, min(1.0, v)))


def cos_bound(x: float, d: float, delta: float, c: float) -> float:
    """Four-way max upper bound on the angle cosine at an edge of cosh length x,
    under opposite-pair bound d (generic case) or lower bound 1 + delta on the
    opposite edge with neighbour bound c (small-valence case)."""
    _check_unit_range(x=x, d=d, c=c)
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"delta must lie in [0, 1), got {delta}")
    return max(
        angle_cosine(x, d, d, 1, 2, 2),
        angle_cosine(x, d, 2, 1, 2, d),
        angle_cosine(x, c, c, 1 + delta, 2, 2),
        angle_cosine(x, c, 2, 1 + delta, 2, c),
    )


def h1(x: float, gamma_n: float, b: float) -> float:
    """Angle-sum certificate for the opposite-pair bound d_n: if
    h1(d_n, gamma_n, b) >= 2 pi, cosh lengths of opposite pairs next to a
    valence-n edge stay below d_n."""
    _check_unit_range(x=x, gamma_n=gamma_n, b=b)
    return (
        _acos(max(angle_cosine(x, gamma_n, x, x, 2, 2), angle_cosine(x, gamma_n, 2, x, 2, x)))
        + _acos(max(angle_cosine(x, gamma_n, x, 1, 2, 2), angle_cosine(x, gamma_n, 2, 1, 2, x)))
        + 7.0 * _acos(max(angle_cosine(x, b, b, 1, 2, 2), angle_cosine(x, b, 2, 1, 2, b)))
    )


def h2(x: float, d_m: float, delta_m1: float) -> float:
    """Angle-sum certificate for the global opposite-pair bound q."""
    _check_unit_range(x=x, d_m=d_m)
    return _acos(
        max(angle_cosine(x, x, x, x, 2, 2), angle_cosine(x, x, 2, x, 2, x))
    ) + 8.0 * _acos(cos_bound(x, d_m, delta_m1, x))


def h3(x: float, gamma_n: float) -> float:
    """Angle-sum certificate for the per-valence opposite-pair bound q_n."""
    _check_unit_range(x=x, gamma_n=gamma_n)
    return (
        _acos(max(angle_cosine(x, gamma_n, x, x, 2, 2), angle_cosine(x, gamma_n, 2, x, 2, x)))
        + _acos(max(angle_cosine(x, gamma_n, x, 1, 2, 2), angle_cosine(x, gamma_n, 2, 1, 2, x)))
        + 7.0 * _acos(cos_bound(x, D_18, DELTA_17, B_REFERENCE))
    )


def h4(x: float, gamma_n: float, d_n: float) -> float:
    """Angle-sum certificate for the all-neighbour bound p_n in the all-nines case."""
    _check_unit_range(x=x, gamma_n=gamma_n, d_n=d_n)
    return (
        _acos(
            max(
                angle_cosine(x, gamma_n, d_n, 1 + DELTA_9, 2, x),
                angle_cosine(x, gamma_n, x, 1 + DELTA_9, 2, d_n),
            )
        )
        + _acos(max(angle_cosine(x, gamma_n, d_n, 1, 2, 2), angle_cosine(x, gamma_n, 2, 1, 2, d_n)))
        + 7.0 * _acos(cos_bound(x, D_18, DELTA_17, B_REFERENCE))
    )


def h_function(kind: int, *args: float) -> float:
    """Dispatch to h1..h4 by number."""
    table: dict[int, Callable[..., float]] = {1: h1, 2: h2, 3: h3, 4: h4}
    if kind not in table:
        raise ValueError(f"kind must be 1..4, got {kind}")
    return table[kind](*args)


@dataclass(frozen=True)
class BoundRow:
    """One row of the embedded constant table, valid for valences
    n_min <= n <= n_max (n_max None = unbounded above)."""

    n_min: int
    n_max: Optional[int]
    gamma: float
    delta: float
    d: float
    q: float
    p: float


TABLE1: tuple[BoundRow, ...] = (
    BoundRow(40, None, 1.05, 0.0, 1.9316, 1.9194, 1.9658),
    BoundRow(30, 39, 1.09, 0.0057, 1.9344, 1.9222, 1.9687),
    BoundRow(25, 29, 1.128, 0.0105, 1.9370, 1.9248, 1.9715),
    BoundRow(22, 24, 1.166, 0.0154, 1.9397, 1.9274, 1.9742),
    BoundRow(20, 21, 1.201, 0.0202, 1.9421, 1.9298, 1.9767),
    BoundRow(19, 19, 1.2228, 0.0249, 1.9436, 1.9313, 1.9782),
    BoundRow(18, 18, 1.2488, 0.0278, 1.9454, 1.9330, 1.9801),
    BoundRow(17, 17, 1.2796, 0.0314, 1.9475, 1.9351, 1.9823),
    BoundRow(16, 16, 1.3166, 0.0356, 1.9500, 1.9376, 1.9848),
    BoundRow(15, 15, 1.3615, 0.0408, 1.9531, 1.9405, 1.9880),
    BoundRow(14, 14, 1.4168, 0.0472, 1.9568, 1.9442, 1.9918),
    BoundRow(13, 13, 1.4861, 0.0553, 1.9614, 1.9487, 1.9965),
    BoundRow(12, 12, 1.5744, 0.0657, 1.9672, 1.9544, 2.0),
    BoundRow(11, 11, 1.6898, 0.0795, 1.9746, 1.9617, 2.0),
    BoundRow(9, 10, 2.0, 0.0983, 1.9941, 1.9808, 2.0),
)


def _table_digest(table: Sequence[BoundRow]) -> str:
    canon = ";".join(
        f"{r.n_min},{r.n_max},{r.gamma!r},{r.delta!r},{r.d!r},{r.q!r},{r.p!r}" for r in table
    )
    return hashlib.sha256(canon.encode()).hexdigest()


TABLE1_SHA256 = "ca2ba0ad6f59c128af8581d2fb8473dac8ae0365a569fa04c4c9a24a2dffa25a"


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    margin: float
    resolution: Optional[int] = None
    wall_time_s: float = 0.0
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "margin": float(self.margin),
            "resolution": self.resolution,
            "wall_time_s": self.wall_time_s,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]
    wall_time_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def worst_margin(self) -> float:
        return min(c.margin for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "passed": bool(self.passed),
            "worst_margin": float(self.worst_margin),
            "wall_time_s": self.wall_time_s,
            "checks": [c.to_dict() for c in self.checks],
        }


def _row_valences(row: BoundRow, cap: int = 400) -> range:
    return range(row.n_min, (row.n_max if row.n_max is not None else cap) + 1)


def verify_table1(table: Optional[Sequence[BoundRow]] = None) -> VerificationReport:
    """Re-derive every inequality behind the constant table.

    Per row: (a) gamma >= b_n on the row's valence range, (b) delta <= mu_n,
    (c) h1(d, gamma, 1.98) >= 2 pi, (d) h3(q, gamma) >= 2 pi, (e) p = 2 or
    h4(p, gamma, d) >= 2 pi, (f) the final angle-cosine comparison at the
    arccosh-2 boundary stays below cos(2 pi / 9).  Margins are exact
    inequality slacks; any negative margin is a failure.
    """
    start = time.perf_counter()
    checks: list[CheckResult] = []
    rows = tuple(table) if table is not None else TABLE1
    digest_ok = _table_digest(rows) == TABLE1_SHA256
    checks.append(
        CheckResult(
            "table_checksum",
            digest_ok,
            0.0 if digest_ok else -1.0,
            detail="embedded table digest" if digest_ok else "table does not match embedded digest",
        )
    )
    for row in rows:
        tag = f"n_{row.n_min}_{row.n_max if row.n_max is not None else 'inf'}"
        t0 = time.perf_counter()

        # (a): b_n is decreasing, so the first valence of the range is binding.
        margin_a = min(row.gamma - b_n(n) for n in _row_valences(row, cap=row.n_min + 8))
        checks.append(CheckResult(f"{tag}_gamma_ge_b", margin_a >= 0.0, margin_a))

        # (b): mu_n decreases to 0 as n grows, so open-ended rows only admit
        # delta = 0; bounded rows are checked at every valence.
        if row.n_max is None:
            margin_b = 0.0 - row.delta
        else:
            margin_b = min(mu_n(n) - row.delta for n in _row_valences(row))
        checks.append(CheckResult(f"{tag}_delta_le_mu", margin_b >= 0.0, margin_b))

        margin_c = h1(row.d, row.gamma, B_REFERENCE) - TWO_PI
        checks.append(CheckResult(f"{tag}_h1_ge_2pi", margin_c >= 0.0, margin_c))

        margin_d = h3(row.q, row.gamma) - TWO_PI
        checks.append(CheckResult(f"{tag}_h3_ge_2pi", margin_d >= 0.0, margin_d))

        if row.p == 2.0:
            # h4 is not required when p = 2; its value is informational only.
            info = h4(2.0, row.gamma, row.d) - TWO_PI
            checks.append(
                CheckResult(
                    f"{tag}_h4_ge_2pi",
                    True,
                    0.0,
                    detail=f"p=2 short-circuit; informational h4 margin {info:+.3e}",
                )
            )
        else:
            margin_e = h4(row.p, row.gamma, row.d) - TWO_PI
            checks.append(CheckResult(f"{tag}_h4_ge_2pi", margin_e >= 0.0, margin_e))

        worst_phi = max(
            angle_cosine(2, row.q, row.q, 1 + row.delta, row.p, row.p),
            angle_cosine(2, row.q, row.p, 1 + row.delta, row.p, row.q),
        )
        margin_f = COS_2PI_9 - worst_phi
        checks.append(
            CheckResult(
                f"{tag}_final_phi_lt_cos9",
                margin_f > 0.0,
                margin_f,
                wall_time_s=time.perf_counter() - t0,
            )
        )
    return VerificationReport(tuple(checks), wall_time_s=time.perf_counter() - start)


# --- grid monotonicity suite ---------------------------------------------

_FD_STEP = 1e-6
_SLACK = 1e-9


def _lattice(axes: list[np.ndarray], max_points: int) -> list[np.ndarray]:
    # Full product lattice, deterministically strided down to <= max_points.
    sizes = [len(a) for a in axes]
    total = int(np.prod(sizes))
    stride = max(1, -(-total // max_points))
    flat = np.arange(0, total, stride)
    coords = []
    for size, axis in zip(reversed(sizes), reversed(axes)):
        coords.append(axis[flat % size])
        flat = flat // size
    return list(reversed(coords))


def _j_family(resolution: int, max_points: int) -> list[tuple[str, float, str]]:
    # The ten one-variable sections of the angle cosine, each strictly
    # decreasing in x on [1, 2] for parameters a, c, d in [1, 2].
    u = np.linspace(1.0, 2.0, resolution)
    x = np.linspace(1.0 + _FD_STEP, 2.0 - _FD_STEP, resolution)

    def sections(xv, a, c, d):
        two = np.full_like(xv, 2.0)
        one = np.ones_like(xv)
        return {
            "j1": (xv, a, d, c, two, two),
            "j2": (xv, a, two, c, two, d),
            "j3": (xv, a, xv, c, two, d),
            "j4": (xv, a, d, c, two, xv),
            "j5": (xv, a, xv, xv, two, two),
            "j6": (xv, a, two, xv, two, xv),
            "j7": (xv, xv, xv, c, two, two),
            "j8": (xv, xv, two, c, two, xv),
            "j9": (xv, xv, xv, xv, two, two),
            "j10": (xv, xv, two, xv, two, xv),
        }

    params = {
        "j1": 3, "j2": 3, "j3": 3, "j4": 3,
        "j5": 1, "j6": 1, "j7": 1, "j8": 1, "j9": 0, "j10": 0,
    }
    out = []
    for name, n_par in params.items():
        axes = [x] + [u] * n_par
        grids = _lattice(axes, max_points)
        xv = grids[0]
        a = grids[1] if n_par >= 1 else np.ones_like(xv)
        c = grids[2] if n_par >= 2 else np.ones_like(xv)
        d = grids[3] if n_par >= 3 else np.ones_like(xv)
        hi = angle_cosine(*sections(xv + _FD_STEP, a, c, d)[name])
        lo = angle_cosine(*sections(xv - _FD_STEP, a, c, d)[name])
        deriv = (hi - lo) / (2.0 * _FD_STEP)
        margin = float(-(deriv.max()))
        out.append((f"{name}_decreasing", margin, f"{xv.size} grid points"))
    return out


def _phi_partials(resolution: int, max_points: int) -> list[tuple[str, float, str]]:
    axis = np.linspace(1.0 + _FD_STEP, 2.0 - _FD_STEP, resolution)
    grids = _lattice([axis] * 6, max_points)
    pts = np.stack(grids, axis=-1)
    out = []
    for slot in (1, 2, 4, 5):  # formula slots x2, x3, x5, x6
        hi = pts.copy()
        lo = pts.copy()
        hi[:, slot] += _FD_STEP
        lo[:, slot] -= _FD_STEP
        deriv = (angle_cosine(*hi.T) - angle_cosine(*lo.T)) / (2.0 * _FD_STEP)
        out.append(
            (f"phi_partial_x{slot + 1}_nonneg", float(deriv.min()), f"{pts.shape[0]} grid points")
        )
    return out


def _f_monotone(resolution: int, max_points: int) -> list[tuple[str, float, str]]:
    xis = np.linspace(0.0, 0.13, resolution)
    deltas = np.linspace(_FD_STEP, 0.13 - _FD_STEP, resolution)
    worst = math.inf
    for xi in xis:
        hi = np.array([f_xi(xi, d + _FD_STEP) for d in deltas])
        lo = np.array([f_xi(xi, d - _FD_STEP) for d in deltas])
        worst = min(worst, float(-((hi - lo) / (2 * _FD_STEP)).max()))
    return [("f_decreasing_in_delta", worst, f"{resolution}x{resolution} grid")]


def _psi_vec(xi, dl, y2, y3, y5, y6):
    # Vectorized psi without the box validation (grids stay inside by
    # construction up to the finite-difference step).
    def eta_v(y):
        s = (1.0 + xi) ** 2
        t = 2.0 + 5.0 * y - s
        return (-t + np.sqrt(t * t + 4.0 * (2.0 + y) * (1.0 - y) * s)) / (2.0 + y)

    def beta_v(y):
        b9 = _b_of(COS_2PI_9)
        b10 = _b_of(COS_2PI_10)
        direct = 16.0 / (y + 1.0) - 7.0
        adjusted = ((2.0 - b10) * direct - (2.0 - b9) * b10) / (b9 - b10)
        return np.where(y >= COS_2PI_10, direct, adjusted)

    return _G(dl, eta_v(y2), eta_v(y3), eta_v(y5), eta_v(y6),
              beta_v(y2), beta_v(y3), beta_v(y5), beta_v(y6))


def _psi_partials(resolution: int, max_points: int) -> list[tuple[str, float, str]]:
    h = _FD_STEP
    xis = np.linspace(0.0, 0.13, min(resolution, 5))
    dls = np.linspace(0.0, 0.13, resolution)
    y_all = np.linspace(COS_2PI_9 + 2 * h, 0.995, resolution)
    y_low = np.linspace(COS_2PI_9 + 2 * h, COS_2PI_10 - 2 * h, resolution)
    y_high = np.linspace(COS_2PI_10 + 2 * h, 0.995, resolution)
    out = []
    # Differentiating in y2; the relabelling symmetries of psi carry the
    # conclusion to the other three arguments.
    for name, y2ax, y6ax in (
        ("psi_partial_y2_dominant", y_high, y_all),
        ("psi_partial_y2_both_small", y_low, y_low),
    ):
        grids = _lattice([xis, dls, y2ax, y_all, y_all, y6ax], max_points)
        xi, dl, y2, y3, y5, y6 = grids
        if name == "psi_partial_y2_dominant":
            y6 = np.minimum(y6, y2)  # hypothesis y2 >= max(y6, cos(2 pi / 10))
        hi = _psi_vec(xi, dl, y2 + h, y3, y5, y6)
        lo = _psi_vec(xi, dl, y2 - h, y3, y5, y6)
        deriv = (hi - lo) / (2 * h)
        out.append((f"{name}_nonneg", float(deriv.min()), f"{xi.size} grid points"))
    return out


def _eta_vec(xi, y):
    s = (1.0 + xi) ** 2
    t = 2.0 + 5.0 * y - s
    return (-t + np.sqrt(t * t + 4.0 * (2.0 + y) * (1.0 - y) * s)) / (2.0 + y)


def _psi_dominates(resolution: int, max_points: int) -> list[tuple[str, float, str]]:
    xis = np.linspace(0.0, 0.13, min(resolution, 5))
    dls = np.linspace(0.0, 0.13, resolution)
    ns = np.arange(9, 41)
    ys = np.cos(2.0 * np.pi / ns)
    grids = _lattice([xis, dls, ys, ys, ys, ys], max_points)
    xi, dl, y2, y3, y5, y6 = grids
    s = (1.0 + _eta_vec(xi, COS_2PI_9)) ** 2
    ref = (-2.0 * dl**2 + 2.0 * dl * (s - 2.0) + 4.0 * s) / (dl**2 + 10.0 * dl + 4.0 * s)
    margin = _psi_vec(xi, dl, y2, y3, y5, y6) - ref
    return [("psi_dominates_all_nine_reference", float(margin.min()), f"{xi.size} grid points")]


_FAMILIES: tuple[tuple[str, Callable[[int, int], list[tuple[str, float, str]]]], ...] = (
    ("j_sections", _j_family),
    ("phi_partials", _phi_partials),
    ("f_monotone", _f_monotone),
    ("psi_partials", _psi_partials),
    ("psi_dominates", _psi_dominates),
)


def _run_family(args: tuple[str, int, int]) -> list[tuple[str, float, str, float]]:
    name, resolution, max_points = args
    fam = dict(_FAMILIES)[name]
    t0 = time.perf_counter()
    rows = fam(resolution, max_points)
    dt = time.perf_counter() - t0
    return [(n, m, d, dt / max(1, len(rows))) for n, m, d in rows]


def grid_monotonicity_suite(
    resolution: int = 16, jobs: int = 1, max_points: int = 250_000
) -> VerificationReport:
    """Sample the monotonicity statements on uniform grids of their hypothesis
    boxes (central differences, step 1e-6); a check passes when its worst
    margin stays above -1e-9."""
    if resolution < 8:
        raise ValueError("resolution must be at least 8 points per axis")
    start = time.perf_counter()
    tasks = [(name, resolution, max_points) for name, _ in _FAMILIES]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_family, tasks))
    else:
        results = [_run_family(t) for t in tasks]
    checks = [
        CheckResult(name, margin >= -_SLACK, margin, resolution, dt, detail)
        for family in results
        for name, margin, detail, dt in family
    ]
    return VerificationReport(tuple(checks), wall_time_s=time.perf_counter() - start)


@dataclass(frozen=True)
class BoundsTable:
    """Per-valence constants plus the embedded table rows, for reporting."""

    xi_infinity: float
    entries: tuple[dict, ...]

    def to_dict(self) -> dict:
        return {"xi_infinity": self.xi_infinity, "rows": list(self.entries)}


def table1_row_for(n: int) -> Optional[BoundRow]:
    for row in TABLE1:
        if row.n_min <= n and (row.n_max is None or n <= row.n_max):
            return row
    return None


def bounds_table(n_max: int) -> BoundsTable:
    """Rows n = 9..n_max with b_n, mu_n, and the table constants where defined."""
    if n_max < 9:
        raise ValueError(f"n_max must be >= 9, got {n_max}")
    entries = []
    for n in range(9, n_max + 1):
        row = table1_row_for(n)
        entry = {"n": n, "b_n": b_n(n), "mu_n": mu_n(n)}
        if row is not None:
            entry.update(
                {"gamma": row.gamma, "delta": row.delta, "d": row.d, "q": row.q, "p": row.p}
            )
        entries.append(entry)
    return BoundsTable(xi_infinity(), tuple(entries))
