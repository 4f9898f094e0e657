"""Incidence geometries: PG(3,q), the symplectic and Hermitian quadrangles,
affine planes, general nets, and the bilinear forms graph.

All point orderings are lexicographic on canonical coordinates, so every
graph built here is reproducible byte-for-byte.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .field import Field, field_of_order
from .graphcore import Graph


@dataclass(frozen=True)
class GqOrder:
    """Order (s,t) of a (pseudo-)generalized quadrangle, s >= t >= 2."""

    s: int
    t: int

    def __post_init__(self):
        if not (self.s >= self.t >= 2):
            raise ValueError(f"need s >= t >= 2, got ({self.s},{self.t})")

    @property
    def num_vertices(self) -> int:
        return (self.s + 1) * (self.s * self.t + 1)

    def srg_params(self) -> tuple[int, int, int, int]:
        s, t = self.s, self.t
        return ((s + 1) * (s * t + 1), s * (t + 1), s - 1, t + 1)


@dataclass(frozen=True)
class Net:
    """A (t+1)-net of order s: s^2 points, (t+1)s blocks of s points each,
    blocks partitioned into t+1 parallel classes."""

    num_points: int
    blocks: tuple[frozenset[int], ...]
    classes: tuple[tuple[int, ...], ...]

    @property
    def s(self) -> int:
        return len(self.blocks[0])

    @property
    def t(self) -> int:
        return len(self.classes) - 1

    def validate(self) -> None:
        s = self.s
        if self.num_points != s * s:
            raise ValueError(f"net has {self.num_points} points, expected {s * s}")
        if sorted(b for cls in self.classes for b in cls) != list(range(len(self.blocks))):
            raise ValueError("classes do not partition the block list")
        for b in self.blocks:
            if len(b) != s:
                raise ValueError("blocks must all have s points")
        on_point = [0] * self.num_points
        for cls in self.classes:
            seen: set[int] = set()
            for bi in cls:
                if seen & self.blocks[bi]:
                    raise ValueError("blocks of one parallel class must be disjoint")
                seen |= self.blocks[bi]
            if len(seen) != self.num_points:
                raise ValueError("each parallel class must cover all points")
            for bi in cls:
                for pt in self.blocks[bi]:
                    on_point[pt] += 1
        if any(c != len(self.classes) for c in on_point):
            raise ValueError("each point must be on one block per class")
        for i, ci in enumerate(self.classes):
            for cj in self.classes[i + 1 :]:
                for bi in ci:
                    for bj in cj:
                        if len(self.blocks[bi] & self.blocks[bj]) != 1:
                            raise ValueError("cross-class blocks must meet in one point")


def _check_supported(q: int) -> Field:
    if q > 25:
        raise ValueError(f"q={q} not supported (need q <= 25)")
    return field_of_order(q)


def pg3_points(q: int) -> list[tuple[int, int, int, int]]:
    """Points of PG(3,q) as canonical coordinate vectors (field indices),
    first nonzero coordinate 1, in lexicographic order."""
    _check_supported(q)
    pts: list[tuple[int, int, int, int]] = []
    for lead in range(3, -1, -1):
        head = [0] * (3 - lead)
        for tail in product(range(q), repeat=lead):
            pts.append(tuple(head + [1] + list(tail)))  # type: ignore[arg-type]
    pts.sort()
    return pts


def wq_graph(q: int) -> Graph:
    """Collinearity graph of the symplectic quadrangle W(q).

    Vertices are the points of PG(3,q); two distinct points are adjacent
    when the alternating form x0*y1 - x1*y0 + x2*y3 - x3*y2 vanishes,
    i.e. when they span a totally isotropic line.
    """
    f = _check_supported(q)
    pts = pg3_points(q)
    n = len(pts)
    mul = f.mul_i
    sub = f.sub_i
    add = f.add_i
    rows = [0] * n
    for i in range(n):
        x0, x1, x2, x3 = pts[i]
        for j in range(i + 1, n):
            y = pts[j]
            v = add(sub(mul(x0, y[1]), mul(x1, y[0])), sub(mul(x2, y[3]), mul(x3, y[2])))
            if v == 0:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return Graph(n, rows)


def hermitian_gq_graph(q: int) -> Graph:
    """Collinearity graph of the Hermitian quadrangle H(3,q^2), a GQ(q^2,q).

    Points are the points of PG(3,q^2) on the Hermitian variety
    sum_i x_i * x_i^q = 0; two points are adjacent when the line joining
    them lies on the variety, i.e. when sum_i x_i * y_i^q = 0.
    """
    _check_supported(q)
    f = field_of_order(q * q)
    pts = pg3_points(q * q)
    conj = [f.pow_i(a, q) for a in range(f.q)]
    mul = f.mul_i
    add = f.add_i

    def herm(x, y) -> int:
        v = 0
        for xi, yi in zip(x, y):
            v = add(v, mul(xi, conj[yi]))
        return v

    iso = [p for p in pts if herm(p, p) == 0]
    n = len(iso)
    rows = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if herm(iso[i], iso[j]) == 0:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return Graph(n, rows)


def affine_plane(q: int) -> Net:
    """AG(2,q) as a net: q^2 points, q^2+q lines, q+1 parallel classes.

    Point (a,b) has index a*q+b.  Classes are ordered by slope index with
    the vertical class last; lines within a class by intercept.
    """
    f = _check_supported(q)
    blocks: list[frozenset[int]] = []
    classes: list[tuple[int, ...]] = []
    for m in range(q):
        cls = []
        for c in range(q):
            line = frozenset(x * q + f.add_i(f.mul_i(m, x), c) for x in range(q))
            cls.append(len(blocks))
            blocks.append(line)
        classes.append(tuple(cls))
    cls = []
    for c in range(q):
        cls.append(len(blocks))
        blocks.append(frozenset(c * q + y for y in range(q)))
    classes.append(tuple(cls))
    net = Net(q * q, tuple(blocks), tuple(classes))
    net.validate()
    return net


def net_collinearity_graph(net: Net) -> Graph:
    """Graph on the net's points, adjacent iff they share a block."""
    rows = [0] * net.num_points
    for b in net.blocks:
        for p in b:
            for r in b:
                if r != p:
                    rows[p] |= 1 << r
    return Graph(net.num_points, rows)


def net_incidence_graph(net: Net) -> Graph:
    """Bipartite point/block incidence graph (points first)."""
    np_, nb = net.num_points, len(net.blocks)
    rows = [0] * (np_ + nb)
    for bi, b in enumerate(net.blocks):
        for p in b:
            rows[p] |= 1 << (np_ + bi)
            rows[np_ + bi] |= 1 << p
    return Graph(np_ + nb, rows)


def bilinear_forms_graph(q: int) -> Graph:
    """H_q(2,2): vertices are 2x2 matrices over GF(q), adjacent when the
    difference has rank 1."""
    f = _check_supported(q)
    n = q**4
    mats = list(product(range(q), repeat=4))
    sub = f.sub_i
    mul = f.mul_i
    rows = [0] * n
    for i in range(n):
        a, b, c, d = mats[i]
        for j in range(i + 1, n):
            e, g, h, k = mats[j]
            da, db, dc, dd = sub(a, e), sub(b, g), sub(c, h), sub(d, k)
            if (da or db or dc or dd) and sub(mul(da, dd), mul(db, dc)) == 0:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return Graph(n, rows)


def bilinear_forms_clique_types(q: int) -> tuple[list[frozenset[int]], list[frozenset[int]]]:
    """The two families of q^2-vertex maximal cliques of H_q(2,2).

    Family one fixes the column space of differences ({X + u*w^T : w}),
    family two the row space ({X + w*v^T : w}).  Vertex indexing matches
    bilinear_forms_graph.
    """
    f = _check_supported(q)
    mul = f.mul_i
    add = f.add_i

    def idx(m: tuple[int, int, int, int]) -> int:
        return ((m[0] * q + m[1]) * q + m[2]) * q + m[3]

    proj_line = [(1, y) for y in range(q)] + [(0, 1)]
    left: set[frozenset[int]] = set()
    right: set[frozenset[int]] = set()
    all_mats = list(product(range(q), repeat=4))
    for u in proj_line:
        for base in all_mats:
            lc = frozenset(
                idx(
                    (
                        add(base[0], mul(u[0], w0)),
                        add(base[1], mul(u[0], w1)),
                        add(base[2], mul(u[1], w0)),
                        add(base[3], mul(u[1], w1)),
                    )
                )
                for w0 in range(q)
                for w1 in range(q)
            )
            rc = frozenset(
                idx(
                    (
                        add(base[0], mul(w0, u[0])),
                        add(base[1], mul(w0, u[1])),
                        add(base[2], mul(w1, u[0])),
                        add(base[3], mul(w1, u[1])),
                    )
                )
                for w0 in range(q)
                for w1 in range(q)
            )
            left.add(lc)
            right.add(rc)
    return sorted(left, key=sorted), sorted(right, key=sorted)


def lattice_graph_complement(m: int) -> Graph:
    """Complement of the m x m rook's graph; cell (i,j) has index i*m+j."""
    n = m * m
    rows = [0] * n
    for i in range(n):
        r1, c1 = divmod(i, m)
        for j in range(n):
            if i != j:
                r2, c2 = divmod(j, m)
                if r1 != r2 and c1 != c2:
                    rows[i] |= 1 << j
    return Graph(n, rows)
