"""Combinatorial structure of a closed pseudo 3-manifold.

A complex is a disjoint union of tetrahedra whose triangular faces are glued
in pairs.  Only the induced identification of edges matters downstream: each
edge class carries a valence (how many tetrahedron edge instances map to it)
and each tetrahedron carries a 6-vector of edge-class labels.

Vertices of a tetrahedron are numbered 0..3.  The six local edges are ordered

    0: {0,1}   1: {0,2}   2: {0,3}   3: {1,2}   4: {1,3}   5: {2,3}

and a face is identified by its opposite vertex (face f = the triangle on the
three vertices other than f).
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

LOCAL_EDGES: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

_EDGE_INDEX = {frozenset(pair): m for m, pair in enumerate(LOCAL_EDGES)}

# Opposite edge = the one on the complementary vertex pair.
OPPOSITE_EDGE: tuple[int, ...] = tuple(
    _EDGE_INDEX[frozenset({0, 1, 2, 3} - set(pair))] for pair in LOCAL_EDGES
)


def local_edge_index(u: int, v: int) -> int:
    """Index of the local edge joining vertices ``u`` and ``v``."""
    return _EDGE_INDEX[frozenset((u, v))]


def face_vertices(face: int) -> tuple[int, int, int]:
    """Vertices of the face opposite vertex ``face``, in increasing order."""
    if face not in (0, 1, 2, 3):
        raise TriangulationError(f"face index must be 0..3, got {face}")
    return tuple(v for v in range(4) if v != face)


class TriangulationError(ValueError):
    """Invalid combinatorial input (labels, gluings, or indices)."""


@dataclass(frozen=True)
class EdgeOrientation:
    """An ordering (e1..e6) of the six local edges of one tetrahedron.

    Pairs (e1,e4), (e2,e5), (e3,e6) are opposite edges, and e1, e2, e3 bound
    a common face.
    """

    order: tuple[int, int, int, int, int, int]

    def __post_init__(self):
        o = self.order
        if sorted(o) != [0, 1, 2, 3, 4, 5]:
            raise TriangulationError(f"orientation must permute 0..5, got {o}")
        for i in range(3):
            if OPPOSITE_EDGE[o[i]] != o[i + 3]:
                raise TriangulationError(
                    f"entries {i + 1} and {i + 4} of {o} are not opposite edges"
                )
        verts = set(LOCAL_EDGES[o[0]]) | set(LOCAL_EDGES[o[1]]) | set(LOCAL_EDGES[o[2]])
        if len(verts) != 3:
            raise TriangulationError(f"first three edges of {o} do not bound a face")

    def __iter__(self):
        return iter(self.order)

    def __getitem__(self, i: int) -> int:
        return self.order[i]


def orientation_at(local_edge: int) -> EdgeOrientation:
    """Canonical orientation with e1 = ``local_edge``.

    For e1 = {i,j} the face {i,j,k} with the smallest k not in {i,j} is used;
    e2 = {i,k}, e3 = {j,k}, and e4..e6 are the respective opposites.  The
    choice is deterministic, and any valid alternative yields the same
    dihedral-angle cosine (see tetra.oriented_angle_cosine).
    """
    if local_edge not in range(6):
        raise TriangulationError(f"local edge index must be 0..5, got {local_edge}")
    i, j = LOCAL_EDGES[local_edge]
    k = min({0, 1, 2, 3} - {i, j})
    e2 = local_edge_index(i, k)
    e3 = local_edge_index(j, k)
    return EdgeOrientation(
        (local_edge, e2, e3, OPPOSITE_EDGE[local_edge], OPPOSITE_EDGE[e2], OPPOSITE_EDGE[e3])
    )


@dataclass(frozen=True)
class FaceGluing:
    """One identified face pair, with the vertex bijection between the faces.

    ``vertex_map`` lists the images in the target face of the source face's
    vertices taken in increasing order.
    """

    tet: int
    face: int
    to_tet: int
    to_face: int
    vertex_map: tuple[int, int, int]

    def __post_init__(self):
        if self.face not in range(4) or self.to_face not in range(4):
            raise TriangulationError(f"face indices must be 0..3 in {self}")
        if self.tet < 0 or self.to_tet < 0:
            raise TriangulationError(f"negative tetrahedron index in {self}")
        target = set(face_vertices(self.to_face))
        if set(self.vertex_map) != target or len(self.vertex_map) != 3:
            raise TriangulationError(
                f"inconsistent vertex map {self.vertex_map}: must be a bijection "
                f"onto the vertices {sorted(target)} of face {self.to_face}"
            )


@dataclass(frozen=True)
class Triangulation:
    """Edge-class structure of a glued tetrahedral complex.

    ``labels[t][m]`` is the edge class of local edge ``m`` in tetrahedron
    ``t``; ``valences[c]`` counts the instances labelled ``c``.  Immutable
    after construction.
    """

    tet_count: int
    edge_class_count: int
    labels: tuple[tuple[int, int, int, int, int, int], ...]
    valences: tuple[int, ...]
    gluings: Optional[tuple[FaceGluing, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.tet_count <= 0 or len(self.labels) != self.tet_count:
            raise TriangulationError("labels must contain one 6-vector per tetrahedron")
        counts = [0] * self.edge_class_count
        for row in self.labels:
            if len(row) != 6:
                raise TriangulationError(f"label row {row} does not have 6 entries")
            for c in row:
                if not 0 <= c < self.edge_class_count:
                    raise TriangulationError(f"edge class {c} out of range")
                counts[c] += 1
        if tuple(counts) != self.valences:
            raise TriangulationError("valences do not match label counts")
        if any(v == 0 for v in self.valences):
            raise TriangulationError("every edge class must appear at least once")

    def valence(self, class_index: int) -> int:
        return valence(self, class_index)


def build_from_edge_labels(labels: Sequence[Sequence[int]]) -> Triangulation:
    """Triangulation from per-tetrahedron 6-vectors of edge-class indices.

    Class indices must be contiguous from 0.  No check is made that the
    labelling arises from an actual face pairing.
    """
    rows = [tuple(int(c) for c in row) for row in labels]
    if not rows:
        raise TriangulationError("empty label list")
    for row in rows:
        if len(row) != 6:
            raise TriangulationError(f"label row {row} does not have 6 entries")
    used = {c for row in rows for c in row}
    if min(used) < 0:
        raise TriangulationError("negative edge class index")
    n_class = max(used) + 1
    if used != set(range(n_class)):
        missing = sorted(set(range(n_class)) - used)
        raise TriangulationError(f"class indices not contiguous: missing {missing}")
    counts = [0] * n_class
    for row in rows:
        for c in row:
            counts[c] += 1
    return Triangulation(len(rows), n_class, tuple(rows), tuple(counts))


class _UnionFind:
    """Union-find with path compression and union by rank."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1


def build_from_gluings(tet_count: int, gluings: Iterable[FaceGluing]) -> Triangulation:
    """Triangulation from face gluings; edge classes are the identification orbits.

    The gluings must form a perfect matching: each of the 4 * tet_count faces
    appears in exactly one gluing, counting both sides.
    """
    gluings = tuple(gluings)
    if tet_count <= 0:
        raise TriangulationError("tet_count must be positive")

    seen: set[tuple[int, int]] = set()
    for g in gluings:
        if g.tet >= tet_count or g.to_tet >= tet_count:
            raise TriangulationError(f"tetrahedron index out of range in {g}")
        for key in ((g.tet, g.face), (g.to_tet, g.to_face)):
            if key in seen:
                raise TriangulationError(f"face {key} glued twice")
            seen.add(key)
    unglued = {(t, f) for t in range(tet_count) for f in range(4)} - seen
    if unglued:
        raise TriangulationError(f"unglued faces: {sorted(unglued)}")

    uf = _UnionFind(6 * tet_count)
    for g in gluings:
        vmap = dict(zip(face_vertices(g.face), g.vertex_map))
        for u, v in combinations(face_vertices(g.face), 2):
            src = 6 * g.tet + local_edge_index(u, v)
            dst = 6 * g.to_tet + local_edge_index(vmap[u], vmap[v])
            uf.union(src, dst)

    class_of: dict[int, int] = {}
    labels = []
    for t in range(tet_count):
        row = []
        for m in range(6):
            root = uf.find(6 * t + m)
            if root not in class_of:
                class_of[root] = len(class_of)
            row.append(class_of[root])
        labels.append(tuple(row))
    n_class = len(class_of)
    counts = [0] * n_class
    for row in labels:
        for c in row:
            counts[c] += 1
    return Triangulation(tet_count, n_class, tuple(labels), tuple(counts), gluings)


def valence(tri: Triangulation, class_index: int) -> int:
    """Number of tetrahedron edge instances identified to the given class."""
    if not 0 <= class_index < tri.edge_class_count:
        raise TriangulationError(
            f"edge class {class_index} out of range (have {tri.edge_class_count})"
        )
    return tri.valences[class_index]
