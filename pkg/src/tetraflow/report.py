"""Figure rendering for flow runs, bound tables, and verification reports.

Figures are written next to the delimited/JSON output when the CLI is given
``--figures DIR``; the data outputs never depend on this module.
"""

from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bounds import BoundsTable, VerificationReport
from .flow import FlowTrace


def save_flow_figures(
    trace: FlowTrace,
    outdir: Path,
    windows: Optional[Sequence[tuple[float, float]]] = None,
) -> list[Path]:
    """Residual decay, H decay, and per-class length evolution as PNGs."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    positive = trace.residuals > 0
    ax.semilogy(trace.times[positive], trace.residuals[positive], marker=".", lw=1.0)
    ax.set_xlabel("flow time")
    ax.set_ylabel("max |curvature|")
    ax.set_title("curvature residual")
    ax.grid(True, ls=":", alpha=0.5)
    path = outdir / "flow_residual.png"
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(trace.times, trace.h_values, marker=".", lw=1.0)
    ax.set_xlabel("flow time")
    ax.set_ylabel("H")
    ax.set_title("co-volume deficit functional")
    ax.grid(True, ls=":", alpha=0.5)
    path = outdir / "flow_h.png"
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for c in range(trace.metrics.shape[1]):
        ax.plot(trace.times, trace.metrics[:, c], lw=1.2, label=f"class {c}")
    if windows is not None:
        for c, (lo, hi) in enumerate(windows):
            ax.axhline(lo, color=f"C{c % 10}", ls="--", lw=0.7, alpha=0.6)
            ax.axhline(hi, color=f"C{c % 10}", ls="--", lw=0.7, alpha=0.6)
    ax.set_xlabel("flow time")
    ax.set_ylabel("edge length")
    ax.set_title("class lengths (dashed: certified window)")
    if trace.metrics.shape[1] <= 12:
        ax.legend(fontsize=7)
    ax.grid(True, ls=":", alpha=0.5)
    path = outdir / "flow_lengths.png"
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)
    return written


def save_bounds_figure(table: BoundsTable, outdir: Path) -> list[Path]:
    """Per-valence window endpoints b_n and 1 + mu_n, with table overlays."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    ns = [e["n"] for e in table.entries]
    fig, ax = plt.subplots(figsize=(6.5, 4.0))
    ax.plot(ns, [e["b_n"] for e in table.entries], marker="o", ms=3, label="b_n (upper)")
    ax.plot(ns, [1.0 + e["mu_n"] for e in table.entries], marker="s", ms=3, label="1 + mu_n (lower)")
    gamma_pts = [(e["n"], e["gamma"]) for e in table.entries if "gamma" in e]
    if gamma_pts:
        ax.plot(*zip(*gamma_pts), ls="none", marker="x", ms=4, label="gamma_n (table)")
    ax.set_xlabel("edge valence n")
    ax.set_ylabel("cosh length")
    ax.set_title("certified cosh-length window per valence")
    ax.legend(fontsize=8)
    ax.grid(True, ls=":", alpha=0.5)
    path = outdir / "bounds_window.png"
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]


def save_verification_figure(report: VerificationReport, outdir: Path) -> list[Path]:
    """Horizontal bar chart of per-check margins, failures highlighted."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    checks = list(report.checks)
    names = [c.name for c in checks]
    margins = [c.margin for c in checks]
    colors = ["#2c7a2c" if c.passed else "#b03030" for c in checks]
    fig_h = max(3.0, 0.17 * len(checks))
    fig, ax = plt.subplots(figsize=(7.5, fig_h))
    ax.barh(range(len(checks)), margins, color=colors)
    ax.set_yticks(range(len(checks)))
    ax.set_yticklabels(names, fontsize=5)
    ax.invert_yaxis()
    ax.set_xscale("symlog", linthresh=1e-9)
    ax.axvline(0.0, color="k", lw=0.8)
    ax.set_xlabel("margin (negative = failed)")
    ax.set_title("verification margins")
    path = outdir / "verify_margins.png"
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]
