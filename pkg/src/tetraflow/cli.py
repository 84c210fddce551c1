"""Command-line interface: check, flow, bounds, verify.

Exit codes: 0 success (flow converged / all checks passed), 1 flow did not
converge or some check failed, 2 invalid input.  JSON is the canonical output
format; traces are also available as CSV.  Floating-point values in text and
CSV output carry 17 significant digits so reports diff cleanly.
"""

import argparse
import hashlib
import json
import math
import sys
import warnings
from pathlib import Path
from typing import Optional

import numpy as np

from . import bounds
from .flow import FlowConfig, FlowTrace, length_window, run_flow, default_initial_metric, curvature
from .tetra import is_hyperideal
from .triangulation import FaceGluing, Triangulation, TriangulationError, build_from_edge_labels, build_from_gluings

_F = "{:.17g}".format


class InputError(ValueError):
    """Malformed triangulation file or flag combination."""


def load_triangulation_file(path: Path) -> tuple[Triangulation, dict[int, float]]:
    """Parse a triangulation JSON file; returns the complex and any inline
    initial-metric overrides (class index -> length)."""
    try:
        payload = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise InputError("top-level JSON value must be an object")

    fmt = payload.get("format")
    tet_count = payload.get("tetrahedra")
    if not isinstance(tet_count, int) or tet_count <= 0:
        raise InputError("'tetrahedra' must be a positive integer")
    try:
        if fmt == "edge_labels":
            labels = payload.get("edge_labels")
            if not isinstance(labels, list) or len(labels) != tet_count:
                raise InputError("'edge_labels' must list one 6-vector per tetrahedron")
            tri = build_from_edge_labels(labels)
        elif fmt == "face_gluings":
            raw = payload.get("gluings")
            if not isinstance(raw, list):
                raise InputError("'gluings' must be a list")
            gluings = [
                FaceGluing(
                    g["tet"], g["face"], g["to_tet"], g["to_face"], tuple(g["vertex_map"])
                )
                for g in raw
            ]
            tri = build_from_gluings(tet_count, gluings)
        else:
            raise InputError(f"unknown format {fmt!r} (expected 'edge_labels' or 'face_gluings')")
    except (TriangulationError, KeyError, TypeError) as exc:
        raise InputError(f"invalid triangulation: {exc}") from exc

    overrides: dict[int, float] = {}
    for key, value in (payload.get("initial_metric") or {}).items():
        try:
            c = int(key)
            overrides[c] = float(value)
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad initial_metric entry {key!r}: {value!r}") from exc
        if not 0 <= c < tri.edge_class_count or overrides[c] <= 0:
            raise InputError(f"initial_metric entry {key!r} out of range")
    return tri, overrides


def _initial_metric(tri: Triangulation, overrides: dict[int, float]) -> np.ndarray:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        metric = default_initial_metric(tri)
    for c, value in overrides.items():
        metric[c] = value
    return metric


def _trace_csv_lines(trace: FlowTrace) -> list[str]:
    n_class = trace.metrics.shape[1]
    header = "time,residual,H," + ",".join(f"l_{c}" for c in range(n_class))
    lines = [header]
    for k in range(len(trace.times)):
        row = [trace.times[k], trace.residuals[k], trace.h_values[k], *trace.metrics[k]]
        lines.append(",".join(_F(v) for v in row))
    return lines


def _run_report(tri: Triangulation, trace: FlowTrace, digest: str) -> dict:
    final = trace.final_metric
    K = curvature(tri, final)
    hypothesis_met = all(v >= 9 for v in tri.valences)
    classes = []
    for c in range(tri.edge_class_count):
        lo, hi = length_window(tri.valences[c])
        classes.append(
            {
                "class": c,
                "valence": tri.valences[c],
                "length": float(final[c]),
                "cosh_length": float(math.cosh(final[c])),
                "curvature": float(K[c]),
                "window_lower": lo,
                "window_upper": hi,
                "in_window": bool(lo <= final[c] <= hi),
            }
        )
    per_tet = [bool(is_hyperideal(final[list(row)])) for row in tri.labels]
    return {
        "input_digest": digest,
        "converged": trace.converged,
        "iterations": trace.steps_accepted,
        "flow_time": float(trace.times[-1]),
        "final_residual": trace.final_residual,
        "hypothesis_met": hypothesis_met,
        "classes": classes,
        "tetrahedra_hyperideal": per_tet,
        "all_hyperideal": all(per_tet),
        "H_initial": float(trace.h_values[0]),
        "H_final": float(trace.h_values[-1]),
        "rate": trace.rate,
        "step_underflow": trace.step_underflow,
    }


def cmd_check(args: argparse.Namespace) -> int:
    tri, overrides = load_triangulation_file(args.input)
    print(f"tetrahedra: {tri.tet_count}")
    plural = "class" if tri.edge_class_count == 1 else "classes"
    print(f"{tri.edge_class_count} {plural}")
    for c, v in enumerate(tri.valences):
        print(f"class {c}: valence {v}")
    if overrides:
        print(f"initial metric overrides: {len(overrides)}")
    for c, v in enumerate(tri.valences):
        if v < 9:
            print(f"warning: hypothesis v(e) >= 9 violated by class {c} (valence {v})")
    return 0


def cmd_flow(args: argparse.Namespace) -> int:
    path = Path(args.input)
    tri, overrides = load_triangulation_file(path)
    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    metric = _initial_metric(tri, overrides)
    if args.init:
        try:
            init_payload = json.loads(Path(args.init).read_text())
            for key, value in init_payload.items():
                metric[int(key)] = float(value)
        except (OSError, ValueError, json.JSONDecodeError, IndexError) as exc:
            raise InputError(f"bad --init file: {exc}") from exc
        if not np.all(metric > 0):
            raise InputError("--init lengths must be positive")
    cfg = FlowConfig(residual_tolerance=args.tol, max_time=args.t_max)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        trace = run_flow(tri, metric, cfg)
    report = _run_report(tri, trace, digest)

    if args.trace:
        Path(args.trace).write_text("\n".join(_trace_csv_lines(trace)) + "\n")
    if args.figures:
        from .report import save_flow_figures

        windows = [length_window(v) for v in tri.valences]
        for p in save_flow_figures(trace, Path(args.figures), windows):
            print(f"wrote {p}", file=sys.stderr)
    if args.output == "csv":
        print("\n".join(_trace_csv_lines(trace)))
    else:
        print(json.dumps(report, indent=2))
    return 0 if trace.converged else 1


def cmd_bounds(args: argparse.Namespace) -> int:
    if args.n_max < 9:
        raise InputError(f"--n-max must be >= 9, got {args.n_max}")
    table = bounds.bounds_table(args.n_max)
    if args.figures:
        from .report import save_bounds_figure

        for p in save_bounds_figure(table, Path(args.figures)):
            print(f"wrote {p}", file=sys.stderr)
    if args.output == "json":
        print(json.dumps(table.to_dict(), indent=2))
        return 0
    print(f"xi_infinity = {_F(table.xi_infinity)}")
    header = f"{'n':>4} {'b_n':>22} {'mu_n':>22}  gamma   delta   d       q       p"
    print(header)
    for e in table.entries:
        row = f"{e['n']:>4} {_F(e['b_n']):>22} {_F(e['mu_n']):>22}"
        if "gamma" in e:
            row += f"  {e['gamma']:<7} {e['delta']:<7} {e['d']:<7} {e['q']:<7} {e['p']:<7}"
        print(row)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    reports: dict[str, bounds.VerificationReport] = {}
    if args.suite in ("table1", "all"):
        reports["table1"] = bounds.verify_table1()
    if args.suite in ("monotonicity", "all"):
        reports["monotonicity"] = bounds.grid_monotonicity_suite(
            resolution=args.resolution, jobs=args.jobs
        )
    payload = {name: rep.to_dict() for name, rep in reports.items()}
    ok = all(rep.passed for rep in reports.values())
    payload["passed"] = ok
    out = json.dumps(payload, indent=2)
    if args.report:
        Path(args.report).write_text(out + "\n")
    print(out)
    if args.figures:
        from .report import save_verification_figure

        merged = bounds.VerificationReport(
            tuple(c for rep in reports.values() for c in rep.checks)
        )
        for p in save_verification_figure(merged, Path(args.figures)):
            print(f"wrote {p}", file=sys.stderr)
    for name, rep in reports.items():
        for c in rep.failures():
            print(f"FAILED {name}:{c.name} margin {c.margin:+.3e}", file=sys.stderr)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tetraflow",
        description=(
            "Zero-curvature hyper-ideal metrics on triangulated pseudo 3-manifolds "
            "via the extended combinatorial Ricci flow."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a triangulation file")
    p.add_argument("input", type=Path)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("flow", help="run the Ricci flow and report the final metric")
    p.add_argument("input", type=Path)
    p.add_argument("--tol", type=float, default=1e-10, help="curvature residual tolerance")
    p.add_argument("--t-max", type=float, default=200.0, help="flow time budget")
    p.add_argument("--trace", type=Path, default=None, help="write the trace as CSV here")
    p.add_argument("--output", choices=("json", "csv"), default="json")
    p.add_argument("--init", type=Path, default=None, help="JSON object of length overrides")
    p.add_argument("--figures", type=Path, default=None, help="render figures into this directory")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("bounds", help="print per-valence bound constants")
    p.add_argument("--n-max", type=int, default=40)
    p.add_argument("--output", choices=("text", "json"), default="text")
    p.add_argument("--figures", type=Path, default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="run the verification suites")
    p.add_argument("--suite", choices=("table1", "monotonicity", "all"), default="all")
    p.add_argument("--resolution", type=int, default=16)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report", type=Path, default=None, help="also write the JSON report here")
    p.add_argument("--figures", type=Path, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, TriangulationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
