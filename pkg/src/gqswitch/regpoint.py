"""Regular points: detection by the elementary test (clique first
subconstituent + coclique spans), and decomposition of a graph at a
regular point into the (scheme, net, labeling) triple from which it can
be reassembled exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import GqOrder, Net, net_collinearity_graph
from .graphcore import Graph, bits
from .specalg import SchemePartition, _scheme_unchecked, check_srg, pseudo_gq_order


def span(g: Graph, v: int, x: int) -> list[int]:
    """The double perp of a non-adjacent pair: all vertices whose closed
    neighbourhood contains every common neighbour of v and x."""
    if v == x:
        raise ValueError("span needs two distinct vertices")
    if g.has_edge(v, x):
        raise ValueError("span of a collinear pair is not used; pass a non-adjacent pair")
    return bits(_span_mask(g.rows, g.rows[v] & g.rows[x]))


def _span_mask(rows, cn_mask: int) -> int:
    m = -1
    c = cn_mask
    while c:
        low = c & -c
        w = low.bit_length() - 1
        c ^= low
        m &= rows[w] | low
    return m


def is_regular_point(g: Graph, v: int, order: GqOrder) -> bool:
    """Elementary regular-point test at v: Gamma_1(v) is a disjoint union
    of (t+1) s-cliques and every span through v is a (t+1)-coclique."""
    params = check_srg(g)
    if params is None or pseudo_gq_order(params) != order:
        raise ValueError("graph is not strongly regular with pseudo-GQ parameters for this order")
    return _is_regular_point_unchecked(g, v, order)


def _is_regular_point_unchecked(g: Graph, v: int, order: GqOrder) -> bool:
    s, t = order.s, order.t
    rows = g.rows
    g1 = rows[v]
    # first subconstituent: t+1 disjoint s-cliques
    groups: dict[int, int] = {}
    m = g1
    while m:
        low = m & -m
        u = low.bit_length() - 1
        m ^= low
        inside = rows[u] & g1
        if inside.bit_count() != s - 1:
            return False
        key = inside | low
        groups[key] = groups.get(key, 0) + 1
    if len(groups) != t + 1 or any(k.bit_count() != s or cnt != s for k, cnt in groups.items()):
        return False
    # spans of v with each non-neighbour: (t+1)-cocliques
    full = (1 << g.n) - 1
    rest = full & ~g1 & ~(1 << v)
    while rest:
        low = rest & -rest
        x = low.bit_length() - 1
        rest ^= low
        sp = _span_mask(rows, g1 & rows[x])
        if sp.bit_count() != t + 1:
            return False
        mm = sp
        while mm:
            lo = mm & -mm
            z = lo.bit_length() - 1
            mm ^= lo
            if rows[z] & sp:
                return False
    return True


def regular_points(g: Graph, order: GqOrder) -> list[int]:
    """All regular points of g, ascending."""
    params = check_srg(g)
    if params is None or pseudo_gq_order(params) != order:
        raise ValueError("graph is not strongly regular with pseudo-GQ parameters for this order")
    return [v for v in range(g.n) if _is_regular_point_unchecked(g, v, order)]


@dataclass
class RegularPointData:
    """Everything extracted at a regular point v.

    cliques      the t+1 s-cliques partitioning Gamma_1(v) (vertex ids)
    fibres       the s^2 spans-minus-v partitioning Gamma_2(v) (vertex ids),
                 ordered by minimum member
    block_vertices  Gamma_1(v) ascending; block j of the net is vertex
                 block_vertices[j]
    net          the (t+1)-net: points are fibre indices, blocks indexed
                 like block_vertices, classes follow the cliques
    scheme       the certified scheme on Gamma_2(v) (local indices follow
                 the sorted Gamma_2 vertex list)
    phi          fibre index -> net point index (identity for a fresh
                 decomposition)
    bhat         quotient graph on the fibres
    """

    graph: Graph
    v: int
    order: GqOrder
    cliques: list[list[int]]
    fibres: list[list[int]]
    block_vertices: list[int]
    net: Net
    scheme: SchemePartition
    phi: tuple[int, ...]
    bhat: Graph


def decompose(g: Graph, v: int, order: GqOrder) -> RegularPointData:
    """Decompose g at the regular point v; every structural invariant is
    re-verified, and any failure aborts rather than returning partial
    data."""
    if not is_regular_point(g, v, order):
        raise ValueError(f"vertex {v} is not a regular point")
    s, t = order.s, order.t
    rows = g.rows
    g1_mask = rows[v]
    gamma1 = bits(g1_mask)

    # parallel classes: the cliques of Gamma_1(v), ordered by min member
    clique_masks: dict[int, None] = {}
    for u in gamma1:
        clique_masks.setdefault((rows[u] & g1_mask) | (1 << u))
    cliques = sorted((bits(m) for m in clique_masks), key=lambda c: c[0])

    scheme = _scheme_unchecked(g, v, order)
    if scheme is None:
        raise RuntimeError("regular-point test passed but the scheme failed; internal error")
    vmap = scheme.vertex_map
    fibres = [[vmap[i] for i in f] for f in scheme.fibres]

    # net: block j = j-th Gamma_1 vertex; incident to the fibres it sees
    block_vertices = gamma1
    blocks: list[frozenset[int]] = []
    for u in block_vertices:
        incident = []
        for fi, f in enumerate(fibres):
            hits = sum(1 for w in f if (rows[u] >> w) & 1)
            if hits == len(f):
                incident.append(fi)
            elif hits:
                raise RuntimeError(f"block {u} meets fibre {fi} partially; internal error")
        blocks.append(frozenset(incident))
    block_index = {u: j for j, u in enumerate(block_vertices)}
    classes = tuple(tuple(block_index[u] for u in c) for c in cliques)
    net = Net(s * s, tuple(blocks), classes)
    net.validate()

    # quotient on fibres: adjacent iff a (necessarily perfect) matching
    nf = len(fibres)
    fibre_masks = [sum(1 << w for w in f) for f in fibres]
    bhat_rows = [0] * nf
    for i in range(nf):
        for j in range(i + 1, nf):
            deg = [(rows[w] & fibre_masks[j]).bit_count() for w in fibres[i]]
            if all(d == 1 for d in deg):
                bhat_rows[i] |= 1 << j
                bhat_rows[j] |= 1 << i
            elif any(deg):
                raise RuntimeError(f"fibres {i},{j} joined by a non-matching; internal error")
    bhat = Graph(nf, bhat_rows)

    phi = tuple(range(nf))
    data = RegularPointData(g, v, order, cliques, fibres, block_vertices, net, scheme, phi, bhat)
    _validate_decomposition(data)
    return data


def _validate_decomposition(data: RegularPointData) -> None:
    s, t = data.order.s, data.order.t
    if len(data.fibres) != s * s or any(len(f) != t for f in data.fibres):
        raise RuntimeError("fibre structure has the wrong shape")
    # the quotient must literally equal the net's collinearity graph
    if data.bhat != net_collinearity_graph(data.net):
        raise RuntimeError("quotient graph differs from the net collinearity graph")
    # incidence identities MM^T = sI + (J-I-C) and M^T M = (t+1)I + Bhat
    n1 = len(data.block_vertices)
    nf = len(data.fibres)
    M = np.zeros((n1, nf), dtype=np.int64)
    for j, b in enumerate(data.net.blocks):
        for fi in b:
            M[j, fi] = 1
    C = np.zeros((n1, n1), dtype=np.int64)
    for i, u in enumerate(data.block_vertices):
        for j, w in enumerate(data.block_vertices):
            if i != j and data.graph.has_edge(u, w):
                C[i, j] = 1
    I1 = np.eye(n1, dtype=np.int64)
    J1 = np.ones((n1, n1), dtype=np.int64)
    if not np.array_equal(M @ M.T, s * I1 + (J1 - I1 - C)):
        raise RuntimeError("MM^T identity failed")
    Bh = np.zeros((nf, nf), dtype=np.int64)
    for i in range(nf):
        for j in bits(data.bhat.rows[i]):
            Bh[i, j] = 1
    if not np.array_equal(M.T @ M, (t + 1) * np.eye(nf, dtype=np.int64) + Bh):
        raise RuntimeError("M^T M identity failed")
    # reassembly with the stored labeling must reproduce the host graph
    from .switchkit import assemble

    if assemble(data, data.phi) != data.graph:
        raise RuntimeError("reassembly does not reproduce the original graph")
