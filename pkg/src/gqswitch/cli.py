"""Command-line interface.

Commands mirror the construct/analyze/switch/spreads/cover workflow and a
canonical-form-keyed store.  Graphs travel as graph6 lines on stdin and
stdout.  Exit codes: 0 success, 1 verification failure, 2 bad input.
"""
from __future__ import annotations

import argparse
import secrets
import sys
from collections import Counter

from .geometry import affine_plane, bilinear_forms_graph, hermitian_gq_graph, net_collinearity_graph, wq_graph
from .graphcore import Graph, Graph6Error, clique_counts_per_vertex, graph6_decode, graph6_encode
from .isocanon import canonical_form, random_automorphisms
from .regpoint import decompose, regular_points
from .specalg import check_antipodal_cover, check_srg, pseudo_gq_order
from .store import GraphStore
from .switchkit import antipodal_classes, add_spread, find_spreads, remove_spread, sweep_classes, switch_sigma

BAD_INPUT = 2
VERIFY_FAIL = 1


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_graph(path: str | None) -> Graph:
    data = sys.stdin.buffer.readline() if path in (None, "-") else open(path, "rb").readline()
    try:
        return graph6_decode(data)
    except Graph6Error as e:
        raise CliError(f"bad graph6 input: {e}", BAD_INPUT)


def _emit(g: Graph) -> None:
    sys.stdout.write(graph6_encode(g).decode("ascii") + "\n")


def cmd_construct(args) -> int:
    q = args.q
    try:
        if args.family == "wq":
            _emit(wq_graph(q))
        elif args.family == "hermitian":
            _emit(hermitian_gq_graph(q))
        elif args.family == "bilinear":
            _emit(bilinear_forms_graph(q))
        else:
            net = affine_plane(q)
            print(f"affine plane of order {q}: {net.num_points} points, {len(net.blocks)} lines")
            for ci, cls in enumerate(net.classes):
                for b in cls:
                    pts = ",".join(str(p) for p in sorted(net.blocks[b]))
                    print(f"class {ci} line {b}: {pts}")
    except ValueError as e:
        raise CliError(str(e), BAD_INPUT)
    return 0


def cmd_analyze(args) -> int:
    g = _read_graph(args.graph)
    print(f"vertices: {g.n}")
    print(f"edges: {g.num_edges()}")
    params = check_srg(g)
    if params is None:
        print("not strongly regular")
        q = round(g.n ** (1 / 3))
        if q >= 2 and q**3 == g.n and check_antipodal_cover(g, q):
            print(
                f"antipodal {q}-cover of K{q * q}, intersection array "
                f"{{{q * q - 1},{q * q - q},1;1,{q},{q * q - 1}}}"
            )
        return 0
    print(f"strongly regular: ({params.v},{params.k},{params.a},{params.c})")
    order = pseudo_gq_order(params)
    if order is None:
        print("not pseudo-GQ")
        return 0
    print(f"pseudo-GQ order: (s,t)=({order.s},{order.t})")
    counts = clique_counts_per_vertex(g, order.s + 1)
    dist = Counter(counts)
    fp = ", ".join(f"{c} maxcliques: {n} vertices" for c, n in sorted(dist.items()))
    print(f"maxclique fingerprint (size {order.s + 1}): {fp}")
    rps = regular_points(g, order)
    print(f"regular points ({len(rps)}): {' '.join(map(str, rps))}")
    for v in rps:
        data = decompose(g, v, order)
        net_kind = "affine plane" if order.s == order.t else f"{order.t + 1}-net"
        qp = check_srg(data.bhat)
        quotient = f"({qp.v},{qp.k},{qp.a},{qp.c})" if qp else f"K{data.bhat.n}"
        print(
            f"v={v}: fibres {len(data.fibres)} x {len(data.fibres[0])}, "
            f"net: {net_kind} of order {order.s}, quotient: {quotient}"
        )
        if args.dump:
            for fi, f in enumerate(data.fibres):
                print(f"  fibre {fi}: {','.join(map(str, f))}")
            for j, b in enumerate(data.net.blocks):
                pts = ",".join(map(str, sorted(b)))
                print(f"  block {j} (vertex {data.block_vertices[j]}): {pts}")
            print(f"  phi: {' '.join(map(str, data.phi))}")
    return 0


def _parse_sigma(text: str, n: int) -> tuple[int, ...]:
    try:
        sigma = tuple(int(x) for x in text.split())
    except ValueError:
        raise CliError("sigma must be whitespace-separated integers", BAD_INPUT)
    if sorted(sigma) != list(range(n)):
        raise CliError(f"sigma is not a permutation of 0..{n - 1}", BAD_INPUT)
    return sigma


def cmd_switch(args) -> int:
    g = _read_graph(args.graph)
    params = check_srg(g)
    order = pseudo_gq_order(params) if params else None
    if order is None:
        raise CliError("input graph is not pseudo-GQ strongly regular", VERIFY_FAIL)
    try:
        data = decompose(g, args.vertex, order)
    except ValueError as e:
        raise CliError(str(e), VERIFY_FAIL)
    nf = len(data.fibres)
    store = GraphStore(args.store) if args.store else None
    seen: set[bytes] = set()

    def emit(graph: Graph, sigma, seed="-") -> None:
        canon = canonical_form(graph) if (args.dedupe or store) else None
        if args.dedupe:
            if canon in seen:
                return
            seen.add(canon)
        if store is not None:
            store.insert(graph, source="switch", seed=str(seed), sigma=" ".join(map(str, sigma)), canon=canon)
        _emit(graph)

    if args.sigma is not None:
        sigma = _parse_sigma(args.sigma, nf)
        try:
            emit(switch_sigma(data, sigma), sigma)
        except ValueError as e:
            raise CliError(str(e), VERIFY_FAIL)
    elif args.all:
        if order.s > order.t:
            raise CliError("--all sweeps every permutation; only legal when s = t", BAD_INPUT)
        from itertools import permutations

        forms = sweep_classes(data, permutations(range(nf)), processes=args.jobs)
        for canon, sigma in sorted(forms.items()):
            graph = switch_sigma(data, sigma)
            if store is not None:
                store.insert(graph, source="switch-all", sigma=" ".join(map(str, sigma)), canon=canon)
            _emit(graph)
    else:
        count = args.random
        seed = args.seed
        if seed is None:
            seed = secrets.randbelow(2**31)
            print(f"seed: {seed}", file=sys.stderr)
        import random as _random

        rng = _random.Random(seed)
        if order.s == order.t:
            sigmas = []
            for _ in range(count):
                s = list(range(nf))
                rng.shuffle(s)
                sigmas.append(tuple(s))
        else:
            sigmas = random_automorphisms(net_collinearity_graph(data.net), count, seed)
        for sigma in sigmas:
            emit(switch_sigma(data, sigma), sigma, seed=seed)
    return 0


def cmd_spreads(args) -> int:
    g = _read_graph(args.graph)
    try:
        spreads = find_spreads(g, args.s, limit=args.limit)
    except ValueError as e:
        raise CliError(str(e), BAD_INPUT)
    for sp in spreads:
        print(";".join(",".join(map(str, c)) for c in sp))
    return 0


def cmd_cover(args) -> int:
    g = _read_graph(args.graph)
    if args.action == "remove":
        params = check_srg(g)
        if params is None:
            raise CliError("input graph is not strongly regular", VERIFY_FAIL)
        s = params.a + 1
        spreads = find_spreads(g, s)
        if args.spread_index is not None:
            if not 0 <= args.spread_index < len(spreads):
                raise CliError(f"spread index out of range (found {len(spreads)})", BAD_INPUT)
            spreads = [spreads[args.spread_index]]
        seen: set[bytes] = set()
        for sp in spreads:
            cover = remove_spread(g, sp)
            if args.dedupe:
                canon = canonical_form(cover)
                if canon in seen:
                    continue
                seen.add(canon)
            _emit(cover)
    else:
        try:
            classes = antipodal_classes(g)
            srg = add_spread(g, classes)
        except ValueError as e:
            raise CliError(str(e), VERIFY_FAIL)
        if check_srg(srg) is None:
            raise CliError("spread addition did not produce a strongly regular graph", VERIFY_FAIL)
        _emit(srg)
    return 0


def cmd_store(args) -> int:
    store = GraphStore(args.dir)
    if args.action == "insert":
        stream = sys.stdin.buffer if args.graph in (None, "-") else open(args.graph, "rb")
        added = total = 0
        for line in stream:
            line = line.strip()
            if not line:
                continue
            try:
                g = graph6_decode(line)
            except Graph6Error as e:
                raise CliError(f"bad graph6 line: {e}", BAD_INPUT)
            if check_srg(g) is None:
                raise CliError("store accepts strongly regular graphs only", VERIFY_FAIL)
            total += 1
            if store.insert(g, source=args.source):
                added += 1
        print(f"inserted {added} new of {total}")
    elif args.action == "list":
        for e in store.entries():
            print(f"{e.canon_hash}\t{e.offset}\t{e.source}\t{e.seed}\t{e.sigma}")
    else:
        for line in store.export_lines():
            sys.stdout.write(line.decode("ascii") + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gqswitch", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a named graph family member")
    c.add_argument("family", choices=["wq", "hermitian", "bilinear", "affine"])
    c.add_argument("q", type=int)
    c.set_defaults(func=cmd_construct)

    a = sub.add_parser("analyze", help="SRG parameters, regular points, decompositions")
    a.add_argument("graph", nargs="?", help="graph6 file (default stdin)")
    a.add_argument("--dump", action="store_true", help="full fibre/net/phi dump per regular point")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("switch", help="emit switched graphs at a regular point")
    s.add_argument("graph", nargs="?")
    s.add_argument("-v", "--vertex", type=int, required=True)
    s.add_argument("--sigma", help="one-line image notation, 0-indexed, e.g. '3 1 0 2'")
    s.add_argument("--all", action="store_true", help="sweep all permutations (s = t only)")
    s.add_argument("--random", type=int, metavar="N", help="N seeded random switches")
    s.add_argument("--seed", type=int)
    s.add_argument("--dedupe", action="store_true", help="emit one graph per isomorphism class")
    s.add_argument("--store", metavar="DIR", help="record emitted graphs in a store")
    s.add_argument("--jobs", type=int, default=None, help="worker processes for --all")
    s.set_defaults(func=cmd_switch)

    sp = sub.add_parser("spreads", help="list spreads (partitions into (s+1)-cliques)")
    sp.add_argument("graph", nargs="?")
    sp.add_argument("-s", type=int, required=True, help="clique size minus one")
    sp.add_argument("--limit", type=int)
    sp.set_defaults(func=cmd_spreads)

    cv = sub.add_parser("cover", help="remove a spread / add a spread to a cover")
    cv.add_argument("action", choices=["remove", "add"])
    cv.add_argument("graph", nargs="?")
    cv.add_argument("--spread-index", type=int)
    cv.add_argument("--dedupe", action="store_true")
    cv.set_defaults(func=cmd_cover)

    st = sub.add_parser("store", help="canonical-form-keyed graph store")
    st.add_argument("action", choices=["insert", "list", "export"])
    st.add_argument("graph", nargs="?")
    st.add_argument("--dir", required=True)
    st.add_argument("--source", default="insert")
    st.set_defaults(func=cmd_store)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "switch":
        given = sum(1 for x in (args.sigma, args.all or None, args.random) if x)
        if given != 1:
            print("switch needs exactly one of --sigma, --all, --random", file=sys.stderr)
            return BAD_INPUT
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
