"""Dihedral angles of a single generalized hyper-ideal tetrahedron.

All six angles are closed-form functions of the edge lengths.  Lengths may be
zero or even negative: negative entries are clamped to 0 first, and the angle
cosine is clamped into [-1, 1] before arccos.  The clamp is part of the
definition of the extended angles (it makes them continuous on all of R^6),
not a numerical fix.
"""

import math
from dataclasses import dataclass

import numpy as np

from .triangulation import LOCAL_EDGES, OPPOSITE_EDGE, EdgeOrientation, local_edge_index

# Any positive length vector with all entries <= this bound is hyper-ideal.
HYPERIDEAL_LENGTH_BOUND = math.acosh(3.0)


def _formula_args(m: int) -> tuple[int, ...]:
    # Slot order of the 6-argument cosine formula for edge e1 = {i,j}:
    # (e1, the two other edges at i, the opposite edge, then the opposites of
    # slots 2 and 3).  This is the argument order under which the formula
    # reproduces the vertex-pair-indexed cosine of the dihedral angle.
    i, j = LOCAL_EDGES[m]
    k, h = sorted({0, 1, 2, 3} - {i, j})
    return (
        m,
        local_edge_index(i, k),
        local_edge_index(i, h),
        local_edge_index(k, h),
        local_edge_index(j, h),
        local_edge_index(j, k),
    )


# Row m = formula argument indices for the angle at local edge m.
ARG_INDEX = np.array([_formula_args(m) for m in range(6)])

# Edges incident to each vertex, for vertex angle sums.
VERTEX_EDGES = tuple(
    tuple(m for m, pair in enumerate(LOCAL_EDGES) if v in pair) for v in range(4)
)


def angle_cosine(x1, x2, x3, x4, x5, x6):
    """Pre-clamp cosine of the dihedral angle at the first edge.

    Arguments are cosh edge lengths (each >= 1) in the slot order of
    ``ARG_INDEX``.  Broadcasts over array inputs.  The value can fall outside
    [-1, 1] for degenerate tetrahedra; callers clamp.  Terms are evaluated as
    written, with no algebraic rearrangement.
    """
    num = x2 * x3 + x5 * x6 + x1 * x2 * x5 + x1 * x3 * x6 - x1 * x1 * x4 + x4
    d1 = np.sqrt(2 * x1 * x2 * x6 + x1 * x1 + x2 * x2 + x6 * x6 - 1)
    d2 = np.sqrt(2 * x1 * x3 * x5 + x1 * x1 + x3 * x3 + x5 * x5 - 1)
    return num / (d1 * d2)


def cosh_lengths(l) -> np.ndarray:
    """cosh of the clamped lengths max(l, 0); entries are >= 1."""
    l = np.asarray(l, dtype=float)
    if not np.all(np.isfinite(l)):
        raise ValueError("edge lengths must be finite")
    return np.cosh(np.maximum(l, 0.0))


def _phi_matrix(x: np.ndarray) -> np.ndarray:
    # x: (..., 6) cosh lengths -> (..., 6) pre-clamp cosines, one per edge.
    xa = x[..., ARG_INDEX]
    return angle_cosine(*(xa[..., s] for s in range(6)))


def extended_angles(l) -> np.ndarray:
    """The six extended dihedral angles, shape (..., 6), each in [0, pi]."""
    return np.arccos(np.clip(_phi_matrix(cosh_lengths(l)), -1.0, 1.0))


@dataclass(frozen=True)
class AngleSet:
    """Angles of one tetrahedron together with the pre-clamp cosine values."""

    alpha: np.ndarray
    phi: np.ndarray


def dihedral_angles(l) -> AngleSet:
    """AngleSet for a 6-vector of edge lengths (negative entries clamped to 0)."""
    phi = _phi_matrix(cosh_lengths(l))
    return AngleSet(alpha=np.arccos(np.clip(phi, -1.0, 1.0)), phi=phi)


def oriented_angle_cosine(x, orientation: EdgeOrientation) -> float:
    """Pre-clamp angle cosine at the orientation's first edge.

    ``x`` holds the six cosh lengths in local edge order.  The orientation's
    entries are mapped onto the formula slots (its third and sixth entries
    swap); every valid orientation with the same first edge gives the same
    value.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 6:
        raise ValueError("expected 6 cosh lengths")
    if np.any(x < 1.0):
        raise ValueError("cosh lengths must be >= 1")
    o = orientation.order
    return angle_cosine(
        x[..., o[0]], x[..., o[1]], x[..., o[5]], x[..., o[3]], x[..., o[4]], x[..., o[2]]
    )


def is_hyperideal(l) -> bool:
    """True iff the lengths realize a genuine (non-degenerate) hyper-ideal tetrahedron.

    Requires all six pre-clamp cosines strictly inside (-1, 1).  When every
    length is at most arccosh 3 this holds automatically and no cosine is
    evaluated.
    """
    l = np.asarray(l, dtype=float)
    if l.shape != (6,):
        raise ValueError("expected 6 edge lengths")
    if np.any(l <= 0.0) or not np.all(np.isfinite(l)):
        raise ValueError("edge lengths must be positive and finite")
    if np.all(l <= HYPERIDEAL_LENGTH_BOUND):
        return True
    phi = _phi_matrix(np.cosh(l))
    return bool(np.all(phi > -1.0) and np.all(phi < 1.0))


def vertex_angle_sums(alpha) -> np.ndarray:
    """Sum of the three dihedral angles meeting each vertex triangle."""
    alpha = np.asarray(alpha, dtype=float)
    return np.stack([alpha[..., list(es)].sum(axis=-1) for es in VERTEX_EDGES], axis=-1)
