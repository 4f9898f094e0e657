"""Immutable bitset graphs, the graph6 codec, and clique/distance machinery.

Vertices are integers 0..n-1.  Adjacency is stored as one Python int per
vertex (bit j of row i set iff i ~ j), which makes neighbourhood
intersections single AND operations.  All graphs are simple, undirected
and loopless.
"""
from __future__ import annotations

from typing import Iterable, Sequence


class Graph:
    """Simple undirected graph with bitset adjacency rows."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: Sequence[int]):
        if len(rows) != n:
            raise ValueError(f"expected {n} rows, got {len(rows)}")
        mask = (1 << n) - 1
        for i, r in enumerate(rows):
            if r & ~mask:
                raise ValueError(f"row {i} has bits outside [0,{n})")
            if (r >> i) & 1:
                raise ValueError(f"loop at vertex {i}")
        for i in range(n):
            for j in _bits(rows[i]):
                if not (rows[j] >> i) & 1:
                    raise ValueError(f"asymmetric adjacency at ({i},{j})")
        self.n = n
        self.rows = tuple(rows)

    @classmethod
    def _unchecked(cls, n: int, rows) -> "Graph":
        """Skip validation; caller guarantees a symmetric loopless matrix."""
        g = object.__new__(cls)
        g.n = n
        g.rows = tuple(rows)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"bad edge ({u},{v}) for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [0] * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << i) for i in range(n)])

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def neighbors(self, v: int) -> list[int]:
        return _bits(self.rows[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def num_edges(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            r = self.rows[u] >> (u + 1)
            v = u + 1
            while r:
                if r & 1:
                    out.append((u, v))
                r >>= 1
                v += 1
        return out

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex x renamed to perm[x]."""
        n = self.n
        rows = [0] * n
        for u in range(n):
            r = 0
            for v in _bits(self.rows[u]):
                r |= 1 << perm[v]
            rows[perm[u]] = r
        return Graph(n, rows)

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, [full ^ r ^ (1 << i) for i, r in enumerate(self.rows)])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges()})"


def _bits(mask: int) -> list[int]:
    """Indices of set bits, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


bits = _bits


class Graph6Error(ValueError):
    """Malformed graph6 input; `position` is the offending byte offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at byte {position})")
        self.position = position


def graph6_encode(g: Graph) -> bytes:
    """Standard graph6 bytes: N(n) header then upper triangle, column order."""
    n = g.n
    out = bytearray(_encode_n(n))
    acc = 0
    nbits = 0
    rows = g.rows
    for j in range(1, n):
        col = 0
        for i in range(j):
            col = (col << 1) | ((rows[i] >> j) & 1)
        acc = (acc << j) | col
        nbits += j
        while nbits >= 6:
            out.append(((acc >> (nbits - 6)) & 0x3F) + 63)
            nbits -= 6
    if nbits:
        out.append(((acc << (6 - nbits)) & 0x3F) + 63)
    return bytes(out)


def _encode_n(n: int) -> bytes:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, ((n >> 12) & 0x3F) + 63, ((n >> 6) & 0x3F) + 63, (n & 0x3F) + 63])
    if n <= 68719476735:
        return bytes([126, 126] + [((n >> s) & 0x3F) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise ValueError("n too large for graph6")


def graph6_decode(data: bytes | str) -> Graph:
    """Decode one graph6 line; rejects bad bytes, lengths and padding."""
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.rstrip(b"\r\n")
    if not data:
        raise Graph6Error("empty input", 0)
    pos = 0
    if data[0] == 126:
        if len(data) >= 2 and data[1] == 126:
            if len(data) < 8:
                raise Graph6Error("truncated 8-byte size header", len(data))
            chunk, pos = data[2:8], 8
        else:
            if len(data) < 4:
                raise Graph6Error("truncated 4-byte size header", len(data))
            chunk, pos = data[1:4], 4
        n = 0
        for k, b in enumerate(chunk):
            if not 63 <= b <= 126:
                raise Graph6Error(f"bad size byte {b}", (pos - len(chunk)) + k)
            n = (n << 6) | (b - 63)
    else:
        if not 63 <= data[0] <= 126:
            raise Graph6Error(f"bad size byte {data[0]}", 0)
        n = data[0] - 63
        pos = 1
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise Graph6Error(f"expected {need} body bytes for n={n}, got {len(body)}", pos + min(need, len(body)))
    rows = [0] * n
    bitpos = 0
    j, i = 1, 0
    for k, b in enumerate(body):
        if not 63 <= b <= 126:
            raise Graph6Error(f"bad body byte {b}", pos + k)
        val = b - 63
        for s in range(5, -1, -1):
            if bitpos >= nbits:
                if (val >> s) & 1:
                    raise Graph6Error("nonzero padding bits", pos + k)
                continue
            if (val >> s) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            bitpos += 1
            i += 1
            if i == j:
                j += 1
                i = 0
    return Graph(n, rows)


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
    """Subgraph on `vertices` (renumbered ascending) plus new->old index map."""
    vs = sorted(set(vertices))
    if vs and not (0 <= vs[0] and vs[-1] < g.n):
        raise ValueError(f"vertex out of range: {vs[0] if vs[0] < 0 else vs[-1]}")
    index = {v: i for i, v in enumerate(vs)}
    rows = []
    for v in vs:
        r = 0
        for w in _bits(g.rows[v]):
            if w in index:
                r |= 1 << index[w]
        rows.append(r)
    return Graph(len(vs), rows), vs


def distance_partition(g: Graph, v: int) -> list[list[int]]:
    """BFS layers from v; unreachable vertices form a trailing class."""
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range")
    seen = 1 << v
    layers = [[v]]
    frontier = 1 << v
    while True:
        nxt = 0
        for u in _bits(frontier):
            nxt |= g.rows[u]
        nxt &= ~seen
        if not nxt:
            break
        layers.append(_bits(nxt))
        seen |= nxt
        frontier = nxt
    rest = ((1 << g.n) - 1) & ~seen
    if rest:
        layers.append(_bits(rest))
    return layers


def common_neighbors(g: Graph, x: int, y: int) -> list[int]:
    """N(x) & N(y); x and y must be distinct."""
    if x == y:
        raise ValueError("common_neighbors requires two distinct vertices")
    return _bits(g.rows[x] & g.rows[y])


def maximal_cliques_of_size(g: Graph, m: int) -> list[tuple[int, ...]]:
    """All maximal cliques with exactly m vertices, sorted.

    Pivoting Bron-Kerbosch, pruned to the target size: once the growing
    clique reaches m vertices it is recorded iff nothing extends it.
    """
    if m < 2:
        raise ValueError("clique size must be >= 2")
    rows = g.rows
    out: list[tuple[int, ...]] = []
    # degree pruning: a vertex of degree < m-1 is in no m-clique
    alive = 0
    for v in range(g.n):
        if rows[v].bit_count() >= m - 1:
            alive |= 1 << v

    def expand(r: list[int], p: int, x: int) -> None:
        if len(r) == m:
            if p == 0 and x == 0:
                out.append(tuple(sorted(r)))
            return
        if p == 0:
            return
        if len(r) + p.bit_count() < m:
            return
        # pivot with most neighbours in P
        best, best_cnt = -1, -1
        pu = p | x
        while pu:
            low = pu & -pu
            u = low.bit_length() - 1
            pu ^= low
            c = (p & rows[u]).bit_count()
            if c > best_cnt:
                best, best_cnt = u, c
        cand = p & ~rows[best]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            r.append(v)
            expand(r, p & rows[v], x & rows[v])
            r.pop()
            p ^= low
            x |= low
        return

    expand([], alive, 0)
    return sorted(out)


def cliques_of_size(g: Graph, m: int) -> list[tuple[int, ...]]:
    """All cliques with exactly m vertices (maximal or not), sorted."""
    if m < 1:
        raise ValueError("clique size must be >= 1")
    rows = g.rows
    out: list[tuple[int, ...]] = []

    def expand(r: list[int], cand: int) -> None:
        if len(r) == m:
            out.append(tuple(r))
            return
        if len(r) + cand.bit_count() < m:
            return
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            r.append(v)
            expand(r, cand & rows[v])
            r.pop()

    expand([], (1 << g.n) - 1)
    return out


def clique_counts_per_vertex(g: Graph, m: int) -> list[int]:
    """For each vertex, the number of maximal m-cliques containing it."""
    counts = [0] * g.n
    for c in maximal_cliques_of_size(g, m):
        for v in c:
            counts[v] += 1
    return counts


def triangle_and_k4_counts(g: Graph) -> tuple[list[int], list[int]]:
    """Per-vertex counts of triangles and of 4-cliques through each vertex.

    Used as a cheap isomorphism-invariant vertex colouring; strongly
    regular graphs have constant triangle counts but their 4-clique
    counts often split the vertex set.
    """
    n = g.n
    rows = g.rows
    tri = [0] * n
    k4 = [0] * n
    for u in range(n):
        ru = rows[u] >> (u + 1)
        v = u + 1
        while ru:
            if ru & 1:
                w_mask = rows[u] & rows[v]
                tri_uv = w_mask.bit_count()
                if tri_uv:
                    tri[u] += tri_uv
                    tri[v] += tri_uv
                    high = w_mask >> (v + 1)
                    w = v + 1
                    while high:
                        if high & 1:
                            # count x > w completing a K4 on {u,v,w,x}
                            x_mask = w_mask & rows[w]
                            x_mask >>= w + 1
                            cnt = x_mask.bit_count()
                            if cnt:
                                k4[u] += cnt
                                k4[v] += cnt
                                k4[w] += cnt
                                xm = (w_mask & rows[w]) >> (w + 1)
                                x = w + 1
                                while xm:
                                    if xm & 1:
                                        k4[x] += 1
                                    xm >>= 1
                                    x += 1
                        high >>= 1
                        w += 1
            ru >>= 1
            v += 1
    # tri[v] counted each triangle at v twice (once per incident edge order)
    return [t // 2 for t in tri], k4
