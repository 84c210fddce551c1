"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Criterion 4 re-derives every inequality behind the embedded constant
table; the valence-16 row's p entry misses its angle-sum certificate by
~8.6e-6 in exact arithmetic (the certifying threshold is 1.98480307), so that
criterion reports FAIL by design rather than hiding the finding.  Details in
the working notes; everything else passes.
"""

import math
import time

import numpy as np
import pytest
from scipy.optimize import brentq

from tetraflow.bounds import (
    TABLE1,
    _row_valences,
    b_n,
    grid_monotonicity_suite,
    h1,
    h2,
    mu_n,
    verify_table1,
    xi_infinity,
    xi_sequence,
)
from tetraflow.flow import (
    curvature,
    default_initial_metric,
    log_residual_fit,
    run_flow,
    tet_lengths,
)
from tetraflow.functional import COVOLUME_AT_ZERO, covolume_tet, lobachevsky, total_H
from tetraflow.tetra import angle_cosine, extended_angles, is_hyperideal
from tetraflow.triangulation import build_from_edge_labels

TWO_PI = 2.0 * math.pi
COS_2PI_9 = math.cos(TWO_PI / 9.0)

TRI = build_from_edge_labels([[0] * 6, [0] * 6])


def _report(num: int, ok: bool, detail: str) -> bool:
    print(f"criterion {num:02d} {'PASS' if ok else 'FAIL'}: {detail}")
    return ok


@pytest.fixture(scope="module")
def converged_trace():
    return run_flow(TRI, default_initial_metric(TRI))


def test_criterion_01_constants():
    t0 = time.perf_counter()
    b18 = b_n(18)
    b12 = b_n(12)
    b9 = b_n(9)
    elapsed = time.perf_counter() - t0
    ok = (
        1.2487 <= b18 <= 1.2488
        and b18 <= 1.2488
        and b12 <= 1.5744
        and b9 == 2.0
        and elapsed < 1e-3
    )
    assert _report(
        1, ok, f"b_18={b18:.7f} b_12={b12:.7f} b_9={b9} runtime={elapsed * 1e3:.3f}ms"
    )


def test_criterion_02_fixed_point():
    c = COS_2PI_9
    oracle = brentq(
        lambda x: -2 * x**3 + (5 * c - 6) * x**2 + (18 * c - 6) * x + 4 * c - 4,
        0.0,
        0.2,
        xtol=1e-14,
    )
    t0 = time.perf_counter()
    seq = xi_sequence(1e-10)
    value = seq[-1]
    elapsed = time.perf_counter() - t0
    monotone = all(b >= a for a, b in zip(seq, seq[1:]))
    ok = (
        0.125 <= value <= 0.13
        and abs(value - oracle) <= 1e-8
        and monotone
        and elapsed < 1e-2
    )
    assert _report(
        2,
        ok,
        f"xi_inf={value:.12f} |err vs bisection|={abs(value - oracle):.2e} "
        f"iterates={len(seq)} monotone={monotone} runtime={elapsed * 1e3:.2f}ms",
    )


def test_criterion_03_mu_dominates_table_deltas():
    xi_infinity()  # warm the cached fixed point
    t0 = time.perf_counter()
    margins = []
    for row in TABLE1:
        if row.n_max is None:
            # mu_n decreases to 0, so the open-ended row needs delta = 0
            margins.append((f"n>={row.n_min}", 0.0 - row.delta))
        else:
            worst = min(mu_n(n) - row.delta for n in _row_valences(row))
            margins.append((f"n={row.n_min}..{row.n_max}", worst))
    identical = mu_n(9) == xi_infinity()
    elapsed = time.perf_counter() - t0
    worst_row = min(margins, key=lambda kv: kv[1])
    ok = all(m >= 0 for _, m in margins) and identical and elapsed < 1e-2
    assert _report(
        3,
        ok,
        f"15 rows, worst margin {worst_row[1]:+.3e} at {worst_row[0]}, "
        f"mu_9==xi_inf={identical}, runtime={elapsed * 1e3:.2f}ms",
    )


def test_criterion_04_table1_verification():
    t0 = time.perf_counter()
    report = verify_table1()
    elapsed = time.perf_counter() - t0
    failures = report.failures()
    detail = (
        f"{len(report.checks)} checks, runtime={elapsed * 1e3:.1f}ms"
        if not failures
        else (
            f"{len(failures)} failing: "
            + ", ".join(f"{c.name} ({c.margin:+.2e})" for c in failures)
            + f"; runtime={elapsed * 1e3:.1f}ms"
        )
    )
    ok = report.passed and elapsed < 1.0
    _report(4, ok, detail)
    assert ok, (
        "Table row n=16 misses its p-column angle-sum certificate by ~8.6e-6 "
        "in exact arithmetic (certifying threshold 1.98480307 > embedded "
        "1.9848); faithful verification reports the gap instead of widening "
        "the tolerance."
    )


def test_criterion_05_upper_bound_bootstrap():
    t0 = time.perf_counter()
    values = [
        ("h1(1.9526,1.2488,2)", h1(1.9526, 1.2488, 2.0)),
        ("h2(1.9810,1.9526,0.0314)", h2(1.9810, 1.9526, 0.0314)),
        ("h1(1.9458,1.2488,1.9810)", h1(1.9458, 1.2488, 1.9810)),
        ("h2(1.9800,1.9458,0.0314)", h2(1.9800, 1.9458, 0.0314)),
    ]
    elapsed = time.perf_counter() - t0
    worst = min(v - TWO_PI for _, v in values)
    ok = all(v >= TWO_PI for _, v in values) and elapsed < 0.1
    assert _report(
        5, ok, f"worst margin {worst:+.3e} over 4 certificates, runtime={elapsed * 1e3:.2f}ms"
    )


def test_criterion_06_flow_convergence(converged_trace):
    t0 = time.perf_counter()
    trace = run_flow(TRI, default_initial_metric(TRI))
    elapsed = time.perf_counter() - t0
    root = brentq(
        lambda x: x / (2 * x - 1) - math.cos(math.pi / 6), 1.01, 3.0, xtol=1e-14
    )
    final = trace.final_metric[0]
    in_window = math.acosh(1 + mu_n(12)) <= final <= math.acosh(b_n(12))
    hyper = is_hyperideal(tet_lengths(TRI, trace.final_metric)[0])
    ok = (
        trace.converged
        and trace.final_residual <= 1e-10
        and trace.times[-1] <= 200.0
        and abs(math.cosh(final) - root) <= 1e-5
        and in_window
        and hyper
        and elapsed < 1.0
    )
    assert _report(
        6,
        ok,
        f"residual={trace.final_residual:.2e} cosh={math.cosh(final):.8f} "
        f"(oracle {root:.8f}) window={in_window} hyperideal={hyper} "
        f"runtime={elapsed * 1e3:.0f}ms",
    )


def test_criterion_07_exponential_rate(converged_trace):
    fit = log_residual_fit(converged_trace)
    ok = fit.slope < 0 and fit.r_squared > 0.99
    assert _report(
        7, ok, f"slope={fit.slope:.3f} R2={fit.r_squared:.6f} n={fit.sample_count}"
    )


def test_criterion_08_h_monotonicity(converged_trace):
    diffs = np.diff(converged_trace.h_values)
    max_increase = float(diffs.max())
    rel_errs = []
    for k in (1, 2, 3, 4, 5):
        l = converged_trace.metrics[k]
        K = curvature(TRI, l)
        direction = K * l
        eps = 1e-5
        fd = (
            total_H(TRI, l + eps * direction, 1e-13)
            - total_H(TRI, l - eps * direction, 1e-13)
        ) / (2 * eps)
        expected = -float(np.sum(K * K * l))
        rel_errs.append(abs(fd - expected) / abs(expected))
    ok = max_increase <= 1e-8 and max(rel_errs) <= 1e-6
    assert _report(
        8,
        ok,
        f"max H increase {max_increase:.2e}, worst dH/dt rel err {max(rel_errs):.2e}",
    )


def test_criterion_09_gradient_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(42)
    h = 1e-5
    worst_cov = 0.0
    for _ in range(20):
        l = rng.uniform(0.3, 1.2, size=6)
        alpha = extended_angles(l)
        i = int(rng.integers(0, 6))
        lp = l.copy()
        lm = l.copy()
        lp[i] += h
        lm[i] -= h
        fd = (covolume_tet(lp, 1e-12).value - covolume_tet(lm, 1e-12).value) / (2 * h)
        worst_cov = max(worst_cov, abs(fd - alpha[i]))

    worst_h = 0.0
    hh = 1e-4
    for l0 in (0.45, 0.6, 0.75, 0.9, 1.05):
        fd = (total_H(TRI, [l0 + hh], 1e-12) - total_H(TRI, [l0 - hh], 1e-12)) / (2 * hh)
        K = curvature(TRI, [l0])[0]
        worst_h = max(worst_h, abs(fd + K))
    elapsed = time.perf_counter() - t0
    ok = worst_cov <= 1e-6 and worst_h <= 1e-6 and elapsed < 10.0
    assert _report(
        9,
        ok,
        f"worst |d cov - angle|={worst_cov:.2e}, worst |d H + K|={worst_h:.2e}, "
        f"runtime={elapsed:.2f}s",
    )


def test_criterion_10_cosine_identity_and_symmetry():
    grid = np.linspace(1.0, 4.0, 100)
    worst_identity = max(
        abs(angle_cosine(x, 2, 2, 1, 2, 2) - (9 - x) / (7 + x)) for x in grid
    )
    rng = np.random.default_rng(1234)
    pts = 1.0 + 3.0 * rng.random((1000, 6))
    base = angle_cosine(*pts.T)
    perm1 = angle_cosine(pts[:, 0], pts[:, 2], pts[:, 1], pts[:, 3], pts[:, 5], pts[:, 4])
    perm2 = angle_cosine(pts[:, 0], pts[:, 4], pts[:, 5], pts[:, 3], pts[:, 1], pts[:, 2])
    worst_sym = max(float(np.max(np.abs(base - perm1))), float(np.max(np.abs(base - perm2))))
    ok = worst_identity <= 1e-12 and worst_sym <= 1e-12
    assert _report(
        10, ok, f"identity err {worst_identity:.2e}, symmetry err {worst_sym:.2e}"
    )


def test_criterion_11_monotonicity_suites():
    t0 = time.perf_counter()
    report = grid_monotonicity_suite(resolution=16)
    elapsed = time.perf_counter() - t0
    ok = report.passed and elapsed < 300.0
    worst = min(report.checks, key=lambda c: c.margin)
    assert _report(
        11,
        ok,
        f"{len(report.checks)} checks, worst margin {worst.margin:+.2e} "
        f"({worst.name}), runtime={elapsed:.1f}s",
    )


def test_criterion_12_lobachevsky():
    quarter = lobachevsky(math.pi / 4)
    grid = np.linspace(-6.0, 6.0, 97)
    odd = float(np.max(np.abs(lobachevsky(-grid) + lobachevsky(grid))))
    periodic = float(np.max(np.abs(lobachevsky(grid + math.pi) - lobachevsky(grid))))
    base = covolume_tet(np.zeros(6)).value
    ok = (
        0.4579827 <= quarter <= 0.4579829
        and odd <= 1e-12
        and periodic <= 1e-12
        and base == COVOLUME_AT_ZERO
        and abs(base - 16 * quarter) <= 1e-12
    )
    assert _report(
        12,
        ok,
        f"L(pi/4)={quarter:.9f}, odd={odd:.1e}, periodic={periodic:.1e}, "
        f"cov(0)={base:.9f}",
    )
