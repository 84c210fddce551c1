import itertools
import math

import numpy as np
import pytest

from tetraflow.tetra import (
    HYPERIDEAL_LENGTH_BOUND,
    AngleSet,
    angle_cosine,
    cosh_lengths,
    dihedral_angles,
    extended_angles,
    is_hyperideal,
    oriented_angle_cosine,
    vertex_angle_sums,
)
from tetraflow.triangulation import LOCAL_EDGES, orientation_at


def _cosine_by_vertex_pairs(x_by_pair, i, j):
    """Independent oracle: the angle cosine written directly over vertex pairs."""
    k, h = sorted({0, 1, 2, 3} - {i, j})
    xij = x_by_pair[frozenset((i, j))]
    xik = x_by_pair[frozenset((i, k))]
    xih = x_by_pair[frozenset((i, h))]
    xjk = x_by_pair[frozenset((j, k))]
    xjh = x_by_pair[frozenset((j, h))]
    xkh = x_by_pair[frozenset((k, h))]
    num = xik * xih + xjk * xjh + xij * xik * xjh + xij * xih * xjk - xij**2 * xkh + xkh
    d1 = math.sqrt(2 * xij * xik * xjk + xij**2 + xik**2 + xjk**2 - 1)
    d2 = math.sqrt(2 * xij * xih * xjh + xij**2 + xih**2 + xjh**2 - 1)
    return num / (d1 * d2)


class TestAngleCosine:
    def test_one_parameter_section_identity(self):
        # angle_cosine(x, 2, 2, 1, 2, 2) == (9 - x) / (7 + x)
        for x in np.linspace(1.0, 4.0, 100):
            assert abs(angle_cosine(x, 2, 2, 1, 2, 2) - (9.0 - x) / (7.0 + x)) <= 1e-12

    def test_known_point(self):
        assert abs(angle_cosine(2, 2, 2, 1, 2, 2) - 7.0 / 9.0) <= 1e-15

    def test_fully_degenerate(self):
        assert angle_cosine(1, 1, 1, 1, 1, 1) == pytest.approx(1.0, abs=1e-15)

    def test_equilateral(self):
        assert angle_cosine(2, 2, 2, 2, 2, 2) == pytest.approx(2.0 / 3.0, abs=1e-15)

    def test_symmetries(self):
        rng = np.random.default_rng(3)
        x = 1.0 + 3.0 * rng.random((1000, 6))
        base = angle_cosine(x[:, 0], x[:, 1], x[:, 2], x[:, 3], x[:, 4], x[:, 5])
        swap23_56 = angle_cosine(x[:, 0], x[:, 2], x[:, 1], x[:, 3], x[:, 5], x[:, 4])
        rotate = angle_cosine(x[:, 0], x[:, 4], x[:, 5], x[:, 3], x[:, 1], x[:, 2])
        assert np.max(np.abs(base - swap23_56)) <= 1e-12
        assert np.max(np.abs(base - rotate)) <= 1e-12

    def test_matches_vertex_pair_formula(self):
        # The per-edge slot tables must reproduce the vertex-pair-indexed
        # cosine for every edge of a generic tetrahedron.
        rng = np.random.default_rng(11)
        for _ in range(50):
            l = 0.2 + 1.2 * rng.random(6)
            x = np.cosh(l)
            by_pair = {frozenset(pair): x[m] for m, pair in enumerate(LOCAL_EDGES)}
            phis = dihedral_angles(l).phi
            for m, (i, j) in enumerate(LOCAL_EDGES):
                assert phis[m] == pytest.approx(
                    _cosine_by_vertex_pairs(by_pair, i, j), abs=1e-13
                )

    def test_oriented_value_is_orientation_independent(self):
        rng = np.random.default_rng(5)
        x = 1.0 + rng.random(6)
        for m in range(6):
            expected = oriented_angle_cosine(x, orientation_at(m))
            # every valid orientation starting at m gives the same value
            from tetraflow.triangulation import EdgeOrientation, OPPOSITE_EDGE

            for e2 in range(6):
                if e2 == m or OPPOSITE_EDGE[e2] == m:
                    continue
                for e3 in range(6):
                    if e3 in (m, e2, OPPOSITE_EDGE[m], OPPOSITE_EDGE[e2]):
                        continue
                    try:
                        o = EdgeOrientation(
                            (m, e2, e3, OPPOSITE_EDGE[m], OPPOSITE_EDGE[e2], OPPOSITE_EDGE[e3])
                        )
                    except Exception:
                        continue
                    assert oriented_angle_cosine(x, o) == pytest.approx(expected, abs=1e-13)

    def test_oriented_rejects_bad_domain(self):
        with pytest.raises(ValueError):
            oriented_angle_cosine([0.5, 2, 2, 2, 2, 2], orientation_at(0))


class TestDihedralAngles:
    def test_equilateral_arccosh2(self):
        l = np.full(6, math.acosh(2.0))
        result = dihedral_angles(l)
        assert isinstance(result, AngleSet)
        assert np.allclose(result.alpha, math.acos(2.0 / 3.0), atol=1e-12)

    def test_angle_set_consistency(self):
        rng = np.random.default_rng(9)
        l = 0.3 + rng.random(6)
        res = dihedral_angles(l)
        assert np.allclose(res.alpha, np.arccos(np.clip(res.phi, -1, 1)))

    def test_clamp_engaged_gives_zero_angle(self):
        # one long edge against tiny edges pushes some cosine above 1
        l = np.array([7.5, 0.1, 0.1, 0.1, 0.1, 0.1])
        res = dihedral_angles(l)
        assert np.any(res.phi > 1.0)
        assert np.any(res.alpha == 0.0)

    def test_negative_entry_equals_zero_entry(self):
        l_neg = np.array([0.5, -0.3, 0.8, 0.4, 0.9, 0.7])
        l_zero = l_neg.copy()
        l_zero[1] = 0.0
        assert np.array_equal(dihedral_angles(l_neg).alpha, dihedral_angles(l_zero).alpha)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            dihedral_angles([np.inf, 1, 1, 1, 1, 1])

    def test_continuity(self):
        rng = np.random.default_rng(21)
        l = 0.4 + 0.8 * rng.random(6)
        base = dihedral_angles(l).alpha
        for delta in (1e-4, 1e-6):
            bumped = dihedral_angles(l + delta).alpha
            assert np.max(np.abs(bumped - base)) <= 50 * delta

    def test_vectorized_batch(self):
        rng = np.random.default_rng(2)
        batch = 0.3 + rng.random((10, 6))
        stacked = extended_angles(batch)
        rows = np.stack([extended_angles(row) for row in batch])
        assert np.array_equal(stacked, rows)

    def test_jacobian_symmetry(self):
        # d alpha_a / d l_b must be symmetric (the angle form is closed)
        rng = np.random.default_rng(17)
        l = 0.4 + 0.8 * rng.random(6)
        h = 1e-3
        jac = np.zeros((6, 6))
        for b in range(6):
            stencil = []
            for d in (-2, -1, 1, 2):
                bumped = l.copy()
                bumped[b] += d * h
                stencil.append(extended_angles(bumped))
            jac[:, b] = (stencil[0] - 8 * stencil[1] + 8 * stencil[2] - stencil[3]) / (12 * h)
        assert np.max(np.abs(jac - jac.T)) <= 1e-9

    def test_partial_derivative_signs_at_corner(self):
        # increasing any of slots 2,3,5,6 does not decrease the cosine
        x = np.array([1.5, 2, 2, 2, 2, 2])
        h = 1e-6
        for slot in (1, 2, 4, 5):
            hi = x.copy()
            lo = x.copy()
            hi[slot] += h
            lo[slot] -= h
            deriv = (angle_cosine(*hi) - angle_cosine(*lo)) / (2 * h)
            assert deriv >= -1e-9


class TestHyperideal:
    def test_equilateral_arccosh2(self):
        assert is_hyperideal(np.full(6, math.acosh(2.0))) is True

    def test_inside_shortcut_region(self):
        assert is_hyperideal(np.full(6, math.acosh(1.183))) is True

    def test_long_edge_fails(self):
        # scanned l = (L, 0.1, ..., 0.1): the first cosine leaves (-1, 1)
        # at L = 7.389 (step 0.001); see the scan below.
        assert is_hyperideal([7.389, 0.1, 0.1, 0.1, 0.1, 0.1]) is False
        assert is_hyperideal([7.0, 0.1, 0.1, 0.1, 0.1, 0.1]) is True

    def test_scan_matches_cosine_oracle(self):
        eps = 0.1
        first_fail = None
        for L in np.arange(6.5, 8.0, 0.01):
            phi = dihedral_angles([L] + [eps] * 5).phi
            inside = np.all(phi > -1.0) and np.all(phi < 1.0)
            assert is_hyperideal([L] + [eps] * 5) == bool(inside)
            if not inside and first_fail is None:
                first_fail = L
        assert first_fail == pytest.approx(7.389, abs=0.01)

    def test_shortcut_agrees_with_full_check(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            l = rng.uniform(1e-3, HYPERIDEAL_LENGTH_BOUND, size=6)
            assert is_hyperideal(l) is True
            phi = dihedral_angles(l).phi
            assert np.all(phi > -1.0) and np.all(phi < 1.0)

    def test_non_positive_rejected(self):
        with pytest.raises(ValueError):
            is_hyperideal([0.0, 1, 1, 1, 1, 1])
        with pytest.raises(ValueError):
            is_hyperideal([-0.2, 1, 1, 1, 1, 1])


class TestVertexAngleSums:
    def test_below_pi_for_hyperideal(self):
        rng = np.random.default_rng(31)
        for _ in range(100):
            l = rng.uniform(0.3, 1.2, size=6)
            assert is_hyperideal(l)
            sums = vertex_angle_sums(dihedral_angles(l).alpha)
            assert sums.shape == (4,)
            assert np.all(sums < math.pi)

    def test_counts_each_vertex_three_edges(self):
        alpha = np.arange(6.0)
        sums = vertex_angle_sums(alpha)
        # vertex 0 meets edges {0,1},{0,2},{0,3} = indices 0,1,2
        assert sums[0] == pytest.approx(0 + 1 + 2)
        assert sums[3] == pytest.approx(2 + 4 + 5)


def test_cosh_lengths_clamps():
    out = cosh_lengths([-1.0, 0.0, 0.5, 1.0, 2.0, 0.3])
    assert out[0] == 1.0 and out[1] == 1.0
    assert np.all(out >= 1.0)
