"""Exact certificates: strong regularity, the 4-class scheme on a second
subconstituent, its eigenmatrix and intersection numbers, subconstituent
matrix identities, spectra via annihilating polynomials, and
distance-regular antipodal covers.

Everything here is integer arithmetic; no numeric eigensolvers, no
tolerances.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .geometry import GqOrder
from .graphcore import Graph, bits, induced_subgraph

__all__ = [
    "SrgParams",
    "check_srg",
    "pseudo_gq_order",
    "eigenmatrix",
    "scheme_intersection_numbers",
    "SchemePartition",
    "scheme_on_second_subconstituent",
    "EquationReport",
    "verify_subconstituent_equations",
    "check_antipodal_cover",
    "check_spectrum_by_annihilation",
    "cover_spectrum",
]


@dataclass(frozen=True)
class SrgParams:
    v: int
    k: int
    a: int
    c: int

    def is_feasible(self) -> bool:
        return self.k * (self.k - self.a - 1) == (self.v - self.k - 1) * self.c

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.v, self.k, self.a, self.c)

    @classmethod
    def of_gq(cls, order: GqOrder) -> "SrgParams":
        return cls(*order.srg_params())


def check_srg(g: Graph) -> SrgParams | None:
    """(v,k,a,c) if g is strongly regular (neither complete nor empty)."""
    n = g.n
    if n < 2:
        return None
    rows = g.rows
    k = rows[0].bit_count()
    if any(r.bit_count() != k for r in rows):
        return None
    if k == 0 or k == n - 1:
        return None
    a = c = -1
    for u in range(n):
        ru = rows[u]
        for v in range(u + 1, n):
            cn = (ru & rows[v]).bit_count()
            if (ru >> v) & 1:
                if a < 0:
                    a = cn
                elif cn != a:
                    return None
            else:
                if c < 0:
                    c = cn
                elif cn != c:
                    return None
    return SrgParams(n, k, a, c)


def pseudo_gq_order(params: SrgParams) -> GqOrder | None:
    """The (s,t) with params == ((s+1)(st+1), s(t+1), s-1, t+1), if any."""
    s = params.a + 1
    t = params.c - 1
    if s < t or t < 2:
        return None
    order = GqOrder(s, t)
    return order if order.srg_params() == params.as_tuple() else None


def eigenmatrix(s: int, t: int) -> np.ndarray:
    """First eigenmatrix of the 4-class scheme living on the second
    subconstituent at a regular point of a pseudo-GQ(s,t) graph.

    Columns index the relations (identity, B, B2, B3, B4); row 0 carries
    the valencies.  For s == t the last valency is 0 and the scheme
    degenerates to 3 classes.
    """
    if s < t:
        raise ValueError("need s >= t")
    return np.array(
        [
            [1, (s - 1) * (t + 1), (s - 1) * (t * t - 1), t - 1, (s - 1) * t * (s - t)],
            [1, s - 1, 1 - s, -1, 0],
            [1, s - t - 1, (t - 1) * (s - t - 1), t - 1, -t * (s - t)],
            [1, -t - 1, t + 1, -1, 0],
            [1, -t - 1, 1 - t * t, t - 1, t * t],
        ],
        dtype=np.int64,
    )


def _solve_exact(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination over the rationals."""
    n = len(mat)
    m = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def scheme_intersection_numbers(s: int, t: int) -> np.ndarray:
    """p[i][j][k] implied by the eigenmatrix: the number of points
    z with (x,z) in relation j and (z,y) in relation k, for (x,y) in
    relation i.  Shape (r,r,r) where r = 5, or 4 when s == t.

    Derived exactly from B_j B_k = sum_i p^i_{jk} B_i on the eigenvalue
    side: each eigenmatrix row must satisfy P_lj P_lk = sum_i p^i_{jk} P_li.
    """
    P = eigenmatrix(s, t)
    r = 4 if s == t else 5
    Pf = [[Fraction(int(P[l, i])) for i in range(r)] for l in range(r)]
    p = np.zeros((r, r, r), dtype=np.int64)
    for j in range(r):
        for k in range(r):
            rhs = [Pf[l][j] * Pf[l][k] for l in range(r)]
            sol = _solve_exact([row[:] for row in Pf], rhs)
            for i, x in enumerate(sol):
                if x.denominator != 1 or x < 0:
                    raise ValueError(f"non-integral intersection number p^{i}_{{{j}{k}}} = {x}")
                p[i, j, k] = int(x)
    return p


def scheme_multiplicities(s: int, t: int) -> list[int]:
    """Eigenspace dimensions of the scheme, in eigenmatrix row order."""
    P = eigenmatrix(s, t)
    r = 4 if s == t else 5
    size = s * s * t
    out = []
    for l in range(r):
        denom = sum(Fraction(int(P[l, j]) ** 2, int(P[0, j])) for j in range(r))
        m = Fraction(size) / denom
        if m.denominator != 1:
            raise ValueError(f"non-integral multiplicity for row {l}")
        out.append(int(m))
    return out


@dataclass
class SchemePartition:
    """The verified association scheme on a second subconstituent.

    `graph` is the induced graph B on Gamma_2(v); `vertex_map` sends its
    local indices back to the host graph.  `relation` is the full matrix
    of relation labels (0 on the diagonal, 1..4 off it); `fibres` lists
    the B3+I classes by local index, ordered by minimum member.
    """

    order: GqOrder
    graph: Graph
    vertex_map: list[int]
    relation: np.ndarray
    fibres: list[list[int]]

    @property
    def num_classes(self) -> int:
        return 3 if self.order.s == self.order.t else 4

    def relation_matrix(self, i: int) -> np.ndarray:
        return (self.relation == i).astype(np.int64)


def _relation_matrices(rel: np.ndarray, classes: int) -> list[np.ndarray]:
    n = rel.shape[0]
    mats = [np.eye(n, dtype=np.int64)]
    for i in range(1, classes + 1):
        mats.append((rel == i).astype(np.int64))
    return mats


def _verify_intersection_numbers(rel: np.ndarray, order: GqOrder) -> str | None:
    """None if all intersection numbers match the eigenmatrix; otherwise
    a message naming the first failing p^i_{jk}."""
    s, t = order.s, order.t
    expected = scheme_intersection_numbers(s, t)
    r = expected.shape[0]
    mats = _relation_matrices(rel, r - 1)
    for j in range(r):
        for k in range(j, r):
            prod = mats[j] @ mats[k]
            target = sum(int(expected[i, j, k]) * mats[i] for i in range(r))
            if not np.array_equal(prod, target):
                diff = prod - target
                i = int(np.argmax(np.any(diff != 0, axis=1)))
                wrong = int(rel[i, int(np.nonzero(diff[i])[0][0])])
                return f"p^{wrong}_{{{j}{k}}}"
    return None


def scheme_on_second_subconstituent(g: Graph, v: int, order: GqOrder) -> SchemePartition | None:
    """Build and certify the (3- or 4-)class scheme on Gamma_2(v).

    Returns None as the negative certificate: wrong global parameters,
    fibre structure absent, a common-neighbour count out of range, or
    any intersection number off the eigenmatrix prediction.
    """
    params = check_srg(g)
    if params is None or pseudo_gq_order(params) != order:
        return None
    return _scheme_unchecked(g, v, order)


def _scheme_unchecked(g: Graph, v: int, order: GqOrder) -> SchemePartition | None:
    s, t = order.s, order.t
    gamma1_mask = g.rows[v]
    gamma2 = [u for u in range(g.n) if u != v and not (gamma1_mask >> u) & 1]
    if len(gamma2) != s * s * t:
        return None
    B, vmap = induced_subgraph(g, gamma2)
    n2 = B.n

    groups: dict[int, list[int]] = {}
    for i, u in enumerate(vmap):
        groups.setdefault(g.rows[u] & gamma1_mask, []).append(i)
    fibres = sorted(groups.values(), key=lambda f: f[0])
    if len(fibres) != s * s or any(len(f) != t for f in fibres):
        return None
    fibre_of = [0] * n2
    for fi, f in enumerate(fibres):
        for i in f:
            fibre_of[i] = fi

    rel = np.zeros((n2, n2), dtype=np.int8)
    rows = B.rows
    for x in range(n2):
        rx = rows[x]
        for y in range(x + 1, n2):
            if (rx >> y) & 1:
                r = 1
            elif fibre_of[x] == fibre_of[y]:
                r = 3
            else:
                cn = (rx & rows[y]).bit_count()
                if cn == t:
                    r = 2
                elif cn == t + 1:
                    r = 4
                else:
                    return None
            if r == 4 and s == t:
                return None
            rel[x, y] = rel[y, x] = r

    if _verify_intersection_numbers(rel, order) is not None:
        return None
    return SchemePartition(order, B, vmap, rel, fibres)


@dataclass
class EquationReport:
    """Line-oriented pass/fail report for the subconstituent identities."""

    results: dict[str, bool]

    @property
    def all_pass(self) -> bool:
        return all(self.results.values())

    def lines(self) -> list[str]:
        return [f"{name} {'PASS' if ok else 'FAIL'}" for name, ok in self.results.items()]

    def __str__(self) -> str:
        return "\n".join(self.lines())


def verify_subconstituent_equations(g: Graph, v: int, order: GqOrder) -> EquationReport:
    """Exact integer check of the nine block identities tying together the
    subconstituent matrices C, N, B, the fibre incidence M and the
    quotient at vertex v.  Diagnostic: every equation is evaluated even
    when earlier ones fail, so a mutated graph shows exactly which
    identities break.
    """
    s, t = order.s, order.t
    results: dict[str, bool] = {}
    gamma1 = g.neighbors(v)
    gamma1_mask = g.rows[v]
    gamma2 = [u for u in range(g.n) if u != v and not (gamma1_mask >> u) & 1]
    n1, n2 = len(gamma1), len(gamma2)

    C = np.zeros((n1, n1), dtype=np.int64)
    for i, u in enumerate(gamma1):
        for j, w in enumerate(gamma1):
            if i != j and g.has_edge(u, w):
                C[i, j] = 1
    Bg, _ = induced_subgraph(g, gamma2)
    B = np.zeros((n2, n2), dtype=np.int64)
    for i in range(n2):
        for j in bits(Bg.rows[i]):
            B[i, j] = 1
    N = np.zeros((n1, n2), dtype=np.int64)
    for i, u in enumerate(gamma1):
        for j, w in enumerate(gamma2):
            if g.has_edge(u, w):
                N[i, j] = 1

    I1 = np.eye(n1, dtype=np.int64)
    I2 = np.eye(n2, dtype=np.int64)
    J1 = np.ones((n1, n1), dtype=np.int64)
    J12 = np.ones((n1, n2), dtype=np.int64)
    J2 = np.ones((n2, n2), dtype=np.int64)

    # fibres from identical Gamma_1(v)-neighbourhoods; always computable
    groups: dict[int, list[int]] = {}
    for j, w in enumerate(gamma2):
        groups.setdefault(g.rows[w] & gamma1_mask, []).append(j)
    fibres = sorted(groups.values(), key=lambda f: f[0])
    fibre_of = [0] * n2
    for fi, f in enumerate(fibres):
        for j in f:
            fibre_of[j] = fi
    nf = len(fibres)
    B3 = np.zeros((n2, n2), dtype=np.int64)
    for f in fibres:
        for x in f:
            for y in f:
                if x != y:
                    B3[x, y] = 1

    # block/fibre incidence; all-or-none is part of what we are testing
    M = np.zeros((n1, nf), dtype=np.int64)
    incidence_ok = True
    for i in range(n1):
        for fi, f in enumerate(fibres):
            adj = int(sum(N[i, j] for j in f))
            if adj == len(f):
                M[i, fi] = 1
            elif adj != 0:
                incidence_ok = False
    results["N-INCIDENCE"] = incidence_ok

    share = M.T @ M
    Bhat = (share - np.diag(np.diag(share)) > 0).astype(np.int64)
    B2 = np.zeros((n2, n2), dtype=np.int64)
    B4 = np.zeros((n2, n2), dtype=np.int64)
    for x in range(n2):
        for y in range(n2):
            if x != y and B[x, y] == 0 and B3[x, y] == 0:
                if Bhat[fibre_of[x], fibre_of[y]]:
                    B2[x, y] = 1
                else:
                    B4[x, y] = 1

    results["EQ2"] = np.array_equal(
        B @ B, (s - 1) * (t + 1) * I2 + (s - 2) * B + t * B2 + (t + 1) * B4
    )
    results["EQ5"] = np.array_equal(C @ C + N @ N.T, (s - t - 2) * C + (t + 1) * (s - 1) * I1 + t * J1)
    results["EQ6"] = np.array_equal(C @ N + N @ B, (s - t - 2) * N + (t + 1) * J12)
    results["EQ7"] = np.array_equal(B @ B + N.T @ N, (s - t - 2) * B + (t + 1) * (s - 1) * I2 + (t + 1) * J2)
    results["EQ8"] = np.array_equal(C @ C, (s - 1) * I1 + (s - 2) * C)
    results["EQ9"] = np.array_equal(N @ N.T, t * s * I1 + t * (J1 - I1 - C))
    results["EQ10"] = np.array_equal(N.T @ N, (t + 1) * (B3 + I2) + B + B2)
    If = np.eye(nf, dtype=np.int64)
    results["EQ11"] = np.array_equal(M @ M.T, s * I1 + (J1 - I1 - C))
    results["EQ12"] = np.array_equal(M.T @ M, (t + 1) * If + Bhat)

    # scheme relation certificate against the eigenmatrix
    rel = (1 * B + 2 * B2 + 3 * B3 + 4 * B4).astype(np.int8)
    msg = None
    if incidence_ok and nf == s * s and all(len(f) == t for f in fibres):
        rel_classes = 3 if s == t else 4
        if s == t and B4.any():
            msg = "B4 nonempty"
        else:
            msg = _verify_intersection_numbers(rel, order)
    else:
        msg = "fibre structure invalid"
    results[f"P-MATRIX{'' if msg is None else ' at ' + msg}"] = msg is None
    return EquationReport(results)


def cover_spectrum(order: GqOrder) -> list[tuple[int, int]]:
    """Spectrum of B on the second subconstituent at a regular point,
    (eigenvalue, multiplicity) pairs, largest first."""
    s, t = order.s, order.t
    m2 = s * s * (t * t - 1) // (s + t)
    m4 = t * (s - 1) * (s * s - t) // (s + t)
    spec = [((t + 1) * (s - 1), 1), (s - 1, m2), (s - t - 1, (t + 1) * (s - 1)), (-t - 1, m4)]
    # merge duplicate eigenvalues (s = t makes s-t-1 = -1 distinct anyway)
    merged: dict[int, int] = {}
    for ev, m in spec:
        merged[ev] = merged.get(ev, 0) + m
    return sorted(merged.items(), key=lambda x: -x[0])


def check_spectrum_by_annihilation(g: Graph, spectrum: list[tuple[int, int]]) -> bool:
    """True iff g has exactly the claimed integer spectrum.

    Certificate: prod_i (A - theta_i I) = 0 pins the eigenvalue set;
    trace(A^j) = sum_i m_i theta_i^j for j = 0..r-1 pins multiplicities
    through a Vandermonde system.  Exact integer arithmetic throughout.
    """
    n = g.n
    if sum(m for _, m in spectrum) != n:
        return False
    evs = [ev for ev, _ in spectrum]
    if len(set(evs)) != len(evs):
        return False
    A = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in bits(g.rows[i]):
            A[i, j] = 1
    prod = np.eye(n, dtype=np.int64)
    for ev in evs:
        prod = prod @ (A - ev * np.eye(n, dtype=np.int64))
        if not prod.any():
            break
    if prod.any():
        return False
    power = np.eye(n, dtype=np.int64)
    for j in range(len(evs)):
        lhs = int(np.trace(power))
        rhs = sum(m * ev**j for ev, m in spectrum)
        if lhs != rhs:
            return False
        if j + 1 < len(evs):
            power = power @ A
    return True


def check_antipodal_cover(g: Graph, q: int) -> bool:
    """True iff g is distance-regular with intersection array
    {q^2-1, q^2-q, 1; 1, q, q^2-1} and its distance-3 relation is a
    disjoint union of q-cliques (the antipodal classes)."""
    n = g.n
    if n != q**3:
        return False
    b = [q * q - 1, q * q - q, 1]
    c = [1, q, q * q - 1]
    rows = g.rows
    class_of: list[int] = [-1] * n
    for v in range(n):
        layers = distance_layers(g, v)
        if len(layers) != 4:
            return False
        if [m.bit_count() for m in layers] != [1, q * q - 1, (q * q - 1) * (q - 1), q - 1]:
            return False
        for d in range(4):
            m = layers[d]
            while m:
                low = m & -m
                u = low.bit_length() - 1
                m ^= low
                ru = rows[u]
                if d < 3 and (ru & layers[d + 1]).bit_count() != b[d]:
                    return False
                if d > 0 and (ru & layers[d - 1]).bit_count() != c[d - 1]:
                    return False
        # antipodal class of v: v plus its distance-3 layer
        cls = layers[3] | (1 << v)
        members = []
        mm = cls
        while mm:
            low = mm & -mm
            members.append(low.bit_length() - 1)
            mm ^= low
        rep = members[0]
        for u in members:
            if class_of[u] not in (-1, rep):
                return False
            class_of[u] = rep
    return True


def distance_layers(g: Graph, v: int) -> list[int]:
    """BFS layers from v as bitmasks (only reachable vertices)."""
    seen = 1 << v
    layers = [1 << v]
    frontier = 1 << v
    while True:
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            nxt |= g.rows[low.bit_length() - 1]
            m ^= low
        nxt &= ~seen
        if not nxt:
            return layers
        layers.append(nxt)
        seen |= nxt
        frontier = nxt
