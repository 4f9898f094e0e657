"""The generative operations: reassembling a graph from a regular-point
decomposition, permutation switching, Godsil-McKay switching, and the
spread removal/addition pipeline.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .geometry import net_collinearity_graph
from .graphcore import Graph, bits, cliques_of_size
from .regpoint import RegularPointData
from .specalg import check_srg, pseudo_gq_order

Permutation = Sequence[int]
Spread = list[tuple[int, ...]]


def _is_bijection(perm: Sequence[int], n: int) -> bool:
    return len(perm) == n and sorted(perm) == list(range(n))


def assemble(data: RegularPointData, phi: Permutation, certify: bool = True) -> Graph:
    """Rebuild the graph from a decomposition with the labeling phi
    (fibre index -> net point index), on the original vertex ids.

    When s > t, phi must be an isomorphism from the quotient graph to the
    net's collinearity graph; for s = t both are complete and any
    bijection is legal.  The output is certified strongly regular.
    """
    order = data.order
    s, t = order.s, order.t
    nf = len(data.fibres)
    if not _is_bijection(phi, nf):
        raise ValueError("phi is not a bijection on the net points")
    if s > t:
        collin = net_collinearity_graph(data.net)
        for i in range(nf):
            for j in bits(data.bhat.rows[i]):
                if not collin.has_edge(phi[i], phi[j]):
                    raise ValueError("phi is not an isomorphism onto the net collinearity graph")
            # degree equality makes the edge check sufficient
            if data.bhat.degree(i) != collin.degree(phi[i]):
                raise ValueError("phi is not an isomorphism onto the net collinearity graph")

    g = data.graph
    n = g.n
    v = data.v
    rows = [0] * n

    def link(a: int, b: int) -> None:
        rows[a] |= 1 << b
        rows[b] |= 1 << a

    for u in data.block_vertices:
        link(v, u)
    for clique in data.cliques:
        for i, a in enumerate(clique):
            for b in clique[i + 1 :]:
                link(a, b)
    # fibre -> block edges through phi
    point_of_block = {j: data.net.blocks[j] for j in range(len(data.net.blocks))}
    for fi, fibre in enumerate(data.fibres):
        p = phi[fi]
        for j, u in enumerate(data.block_vertices):
            if p in point_of_block[j]:
                for w in fibre:
                    link(u, w)
    # untouched second-subconstituent edges
    vmap = data.scheme.vertex_map
    B = data.scheme.graph
    for i in range(B.n):
        for j in bits(B.rows[i]):
            if i < j:
                link(vmap[i], vmap[j])

    out = Graph(n, rows)
    if certify:
        params = check_srg(out)
        if params is None or pseudo_gq_order(params) != order:
            raise RuntimeError("assembled graph failed strong-regularity certification")
    return out


def switch_sigma(data: RegularPointData, sigma: Permutation, certify: bool = True) -> Graph:
    """The switched graph: reassemble with sigma composed onto the stored
    labeling.  For s > t, sigma must be an automorphism of the net
    collinearity graph; for s = t any permutation of the net points."""
    nf = len(data.fibres)
    if not _is_bijection(sigma, nf):
        raise ValueError("sigma is not a permutation of the net points")
    phi = tuple(sigma[data.phi[i]] for i in range(nf))
    return assemble(data, phi, certify=certify)


def gm_switch(g: Graph, switching_set: Iterable[int], cells: Sequence[Iterable[int]]) -> Graph:
    """Godsil-McKay switching.

    `switching_set` D plus `cells` C_1..C_m must partition the vertices;
    the cells must form an equitable partition (constant counts between
    every ordered cell pair), and every vertex of D must see 0, half or
    all of each cell.  Vertices seeing half a cell get their edges into
    that cell complemented.
    """
    n = g.n
    d_mask = 0
    for u in switching_set:
        d_mask |= 1 << u
    cell_masks = []
    for c in cells:
        m = 0
        for u in c:
            m |= 1 << u
        cell_masks.append(m)
    total = d_mask
    for m in cell_masks:
        if m & total:
            raise ValueError("switching partition has overlapping parts")
        total |= m
    if total != (1 << n) - 1:
        raise ValueError("switching partition does not cover the vertex set")
    for i, mi in enumerate(cell_masks):
        for j, mj in enumerate(cell_masks):
            degs = {(g.rows[u] & mj).bit_count() for u in bits(mi)}
            if len(degs) > 1:
                raise ValueError(f"cells {i} and {j} are not equitable")
    rows = list(g.rows)
    for u in bits(d_mask):
        for i, m in enumerate(cell_masks):
            size = m.bit_count()
            hit = rows[u] & m
            cnt = hit.bit_count()
            if cnt == 0 or cnt == size:
                continue
            if 2 * cnt != size:
                raise ValueError(f"vertex {u} sees {cnt} of cell {i} (size {size}); not 0, half or all")
            new = m & ~hit
            rows[u] = (rows[u] & ~m) | new
            for w in bits(hit):
                rows[w] &= ~(1 << u)
            for w in bits(new):
                rows[w] |= 1 << u
    return Graph(n, rows)


def find_spreads(g: Graph, s: int, limit: int | None = None) -> list[Spread]:
    """All partitions of the vertex set into (s+1)-cliques, by exact-cover
    backtracking over the size-(s+1) cliques.  Deterministic order; stops
    after `limit` spreads when given."""
    n = g.n
    if n % (s + 1):
        raise ValueError(f"vertex count {n} not divisible by clique size {s + 1}")
    cliques = cliques_of_size(g, s + 1)
    clique_masks = [sum(1 << v for v in c) for c in cliques]
    by_vertex: list[list[int]] = [[] for _ in range(n)]
    for ci, m in enumerate(clique_masks):
        for v in bits(m):
            by_vertex[v].append(ci)
    out: list[Spread] = []
    chosen: list[int] = []

    def search(covered: int) -> bool:
        if covered == (1 << n) - 1:
            out.append([cliques[ci] for ci in sorted(chosen, key=lambda c: cliques[c][0])])
            return limit is not None and len(out) >= limit
        # branch on the uncovered vertex with fewest available cliques
        best_v, best_opts = -1, None
        m = ~covered & ((1 << n) - 1)
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            opts = [ci for ci in by_vertex[v] if not clique_masks[ci] & covered]
            if best_opts is None or len(opts) < len(best_opts):
                best_v, best_opts = v, opts
                if not opts:
                    return False
        for ci in best_opts:
            chosen.append(ci)
            if search(covered | clique_masks[ci]):
                return True
            chosen.pop()
        return False

    search(0)
    return out


def _validate_spread(g: Graph, spread: Sequence[Iterable[int]]) -> list[int]:
    masks = []
    total = 0
    for cls in spread:
        m = 0
        for v in cls:
            m |= 1 << v
        if m & total:
            raise ValueError("spread classes overlap")
        total |= m
        for v in bits(m):
            if (g.rows[v] & m) != m ^ (1 << v):
                raise ValueError(f"spread class {sorted(bits(m))} is not a clique")
        masks.append(m)
    if total != (1 << g.n) - 1:
        raise ValueError("spread does not cover the vertex set")
    if len({m.bit_count() for m in masks}) != 1:
        raise ValueError("spread classes must all have the same size")
    return masks


def remove_spread(g: Graph, spread: Sequence[Iterable[int]]) -> Graph:
    """Delete all edges inside each spread class."""
    masks = _validate_spread(g, spread)
    rows = list(g.rows)
    for m in masks:
        for v in bits(m):
            rows[v] &= ~m
    return Graph(g.n, rows)


def add_spread(cover: Graph, classes: Sequence[Iterable[int]]) -> Graph:
    """Turn the given vertex classes (cocliques, e.g. the antipodal
    classes of a distance-regular cover) into cliques."""
    rows = list(cover.rows)
    total = 0
    masks = []
    for cls in classes:
        m = 0
        for v in cls:
            m |= 1 << v
        if m & total:
            raise ValueError("classes overlap")
        total |= m
        for v in bits(m):
            if cover.rows[v] & m:
                raise ValueError("classes must be cocliques in the cover")
        masks.append(m)
    if total != (1 << cover.n) - 1:
        raise ValueError("classes do not cover the vertex set")
    for m in masks:
        for v in bits(m):
            rows[v] |= m & ~(1 << v)
    return Graph(cover.n, rows)


def _fast_switch_tables(data: RegularPointData):
    """Precomputed masks for sweeping many sigmas over one decomposition.

    Only the block/fibre edges depend on sigma; everything else is frozen
    into base rows once.
    """
    g = data.graph
    n = g.n
    v = data.v
    nf = len(data.fibres)
    base = [0] * n
    base[v] = sum(1 << u for u in data.block_vertices)
    for clique in data.cliques:
        cm = sum(1 << u for u in clique)
        for u in clique:
            base[u] = (cm ^ (1 << u)) | (1 << v)
    vmap = data.scheme.vertex_map
    B = data.scheme.graph
    for i in range(B.n):
        r = 0
        m = B.rows[i]
        while m:
            low = m & -m
            r |= 1 << vmap[low.bit_length() - 1]
            m ^= low
        base[vmap[i]] = r
    fibre_masks = [sum(1 << w for w in f) for f in data.fibres]
    # blocks incident to each net point, as a vertex mask
    point_blocks = [0] * nf
    for j, b in enumerate(data.net.blocks):
        for p in b:
            point_blocks[p] |= 1 << data.block_vertices[j]
    blocks_of_point = [[j for j, b in enumerate(data.net.blocks) if p in b] for p in range(nf)]
    return base, fibre_masks, point_blocks, blocks_of_point, vmap


def switch_sigma_fast(tables, data: RegularPointData, sigma: Sequence[int]) -> Graph:
    """switch_sigma without certification; byte-identical output."""
    base, fibre_masks, point_blocks, blocks_of_point, vmap = tables
    phi = data.phi
    rows = list(base)
    nf = len(data.fibres)
    for fi in range(nf):
        p = sigma[phi[fi]]
        bm = point_blocks[p]
        fm = fibre_masks[fi]
        for w in data.fibres[fi]:
            rows[w] |= bm
        m = bm
        while m:
            low = m & -m
            rows[low.bit_length() - 1] |= fm
            m ^= low
    return Graph._unchecked(data.graph.n, rows)


def _sweep_worker(args):
    data, sigmas, certify_every = args
    from .isocanon import canonical_form
    from .specalg import check_srg

    tables = _fast_switch_tables(data)
    params = check_srg(data.graph)
    forms = {}
    for i, sigma in enumerate(sigmas):
        g = switch_sigma_fast(tables, data, sigma)
        if certify_every and i % certify_every == 0:
            if check_srg(g) != params:
                raise RuntimeError(f"switched graph failed SRG certification at sigma {sigma}")
        f = canonical_form(g)
        if f not in forms:
            forms[f] = tuple(sigma)
    return forms


def sweep_classes(
    data: RegularPointData,
    sigmas: Iterable[Sequence[int]],
    processes: int | None = None,
    certify_every: int = 1000,
) -> dict[bytes, tuple[int, ...]]:
    """Canonical forms of the switched graph for every sigma, deduplicated;
    maps each form to the first sigma that produced it.

    The per-graph strong-regularity certificate is sampled (every
    `certify_every` graphs) rather than run on all of them; tests cover
    the exact construction equivalence separately.
    """
    sigmas = [tuple(s) for s in sigmas]
    if processes is None or processes <= 1 or len(sigmas) < 1000:
        return _sweep_worker((data, sigmas, certify_every))
    import multiprocessing as mp

    chunks = [sigmas[i::processes] for i in range(processes)]
    ctx = mp.get_context("fork")
    with ctx.Pool(processes) as pool:
        results = pool.map(_sweep_worker, [(data, c, certify_every) for c in chunks])
    merged: dict[bytes, tuple[int, ...]] = {}
    for r in results:
        for f, s in r.items():
            merged.setdefault(f, s)
    return merged


def antipodal_classes(cover: Graph) -> list[tuple[int, ...]]:
    """Distance-3 classes of a diameter-3 graph, ordered by minimum member."""
    from .specalg import distance_layers

    n = cover.n
    seen = 0
    out = []
    for v in range(n):
        if (seen >> v) & 1:
            continue
        layers = distance_layers(cover, v)
        if len(layers) != 4:
            raise ValueError("graph does not have diameter 3")
        cls = layers[3] | (1 << v)
        out.append(tuple(bits(cls)))
        seen |= cls
    return out
