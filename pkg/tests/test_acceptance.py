"""Acceptance suite: each test implements one acceptance criterion at its
stated tolerance and prints one PASS line.  Run with `pytest -v -s
tests/test_acceptance.py`.

The two full Sym(9) sweeps each enumerate all 362 880 labelings; set
GQSWITCH_JOBS to control worker processes (defaults to the CPU count).
"""
from __future__ import annotations

import random
from itertools import combinations, permutations

import pytest

from gqswitch.geometry import GqOrder, bilinear_forms_graph, hermitian_gq_graph, lattice_graph_complement
from gqswitch.graphcore import (
    Graph,
    clique_counts_per_vertex,
    graph6_decode,
    induced_subgraph,
)
from gqswitch.isocanon import (
    are_isomorphic,
    canonical_form,
    is_collineation,
    isomorphism_map,
    type_swapping_automorphism,
)
from gqswitch.regpoint import _is_regular_point_unchecked, decompose, regular_points
from gqswitch.specalg import check_antipodal_cover, check_srg, verify_subconstituent_equations
from gqswitch.switchkit import (
    _fast_switch_tables,
    add_spread,
    antipodal_classes,
    find_spreads,
    gm_switch,
    sweep_classes,
    switch_sigma,
    switch_sigma_fast,
)
from tests.conftest import jobs


def second_subconstituent(g: Graph, v: int) -> Graph:
    far = [u for u in range(g.n) if u != v and not g.has_edge(v, u)]
    sub, _ = induced_subgraph(g, far)
    return sub


def cycle_sigma(points, n: int) -> tuple[int, ...]:
    s = list(range(n))
    for i in range(len(points)):
        s[points[i]] = points[(i + 1) % len(points)]
    return tuple(s)


@pytest.fixture(scope="module")
def sweep1(w3_data):
    """Criterion 2 workhorse: all 362 880 switches of W(3)."""
    return sweep_classes(w3_data, permutations(range(9)), processes=jobs(), certify_every=500)


@pytest.fixture(scope="module")
def h1_form(h1_graph):
    return canonical_form(h1_graph)


@pytest.fixture(scope="module")
def second_round(w3_data, sweep1, h1_form):
    """Criterion 3 workhorse: locate the one graph with a second kind of
    regular point and sweep there."""
    order = GqOrder(3, 3)
    hosts = []
    for form, sigma in sorted(sweep1.items()):
        rep = switch_sigma(w3_data, sigma)
        for w in regular_points(rep, order):
            if canonical_form(second_subconstituent(rep, w)) != h1_form:
                hosts.append((rep, w))
                break
    assert len(hosts) == 1, f"expected exactly one host graph, found {len(hosts)}"
    host, w = hosts[0]
    data2 = decompose(host, w, order)
    forms2 = sweep_classes(data2, permutations(range(9)), processes=jobs(), certify_every=500)
    return host, w, forms2


def test_criterion_1_w2_invariance(w2_data, w2):
    target = canonical_form(w2)
    forms = {canonical_form(switch_sigma(w2_data, s)) for s in permutations(range(4))}
    assert forms == {target}
    print("\nACCEPTANCE 1 PASS: all 24 switches of W(2) are isomorphic to W(2)")


def test_criterion_2_w3_full_sweep(sweep1, w3):
    assert len(sweep1) == 9
    assert canonical_form(w3) in sweep1
    print(f"\nACCEPTANCE 2 PASS: full Sym(9) sweep of W(3) gives exactly {len(sweep1)} classes")


def test_criterion_3_second_round(sweep1, second_round, h2_graph):
    host, w, forms2 = second_round
    assert canonical_form(second_subconstituent(host, w)) == canonical_form(h2_graph)
    assert len(forms2) == 9
    new = set(forms2) - set(sweep1)
    assert len(new) == 8
    total = set(sweep1) | set(forms2)
    assert len(total) == 17
    print("\nACCEPTANCE 3 PASS: second round gives 9 classes, 8 new; 17 classes in total")


def test_criterion_4_graph6_fidelity(w3, h1_graph, h2_graph):
    assert h1_graph.n == 27 and h2_graph.n == 27
    gamma2 = second_subconstituent(w3, 0)
    assert are_isomorphic(h1_graph, gamma2)
    assert not are_isomorphic(h1_graph, h2_graph)
    assert check_antipodal_cover(h1_graph, 3)
    assert check_antipodal_cover(h2_graph, 3)
    print("\nACCEPTANCE 4 PASS: published 27-vertex strings decode, identify and certify as covers")


@pytest.mark.parametrize("q", [3, 4, 5])
def test_criterion_5_maxclique_fingerprints(q, w3, w4, w5):
    g = {3: w3, 4: w4, 5: w5}[q]
    order = GqOrder(q, q)
    data = decompose(g, 0, order)
    tables = _fast_switch_tables(data)
    n = g.n
    nf = q * q
    line = sorted(data.net.blocks[0])
    base_counts = clique_counts_per_vertex(g, q + 1)
    assert base_counts == [q + 1] * n
    fingerprints = []
    for r in range(2, q + 1):
        sigma = cycle_sigma(line[:r], nf)
        switched = switch_sigma_fast(tables, data, sigma)
        counts = clique_counts_per_vertex(switched, q + 1)
        expected: dict[int, int] = {}
        for cnt, num in ((1, 2 * r * q), (q + 1, 2 * q * q - (2 * r - 1) * q + 1), (q + 1 - r, q**3 - q * q)):
            expected[cnt] = expected.get(cnt, 0) + num
        got: dict[int, int] = {}
        for c in counts:
            got[c] = got.get(c, 0) + 1
        assert got == expected, f"q={q} r={r}: {got} != {expected}"
        fingerprints.append(tuple(sorted(got.items())))
    triple = next(
        t for t in combinations(range(nf), 3) if not any(set(t) <= b for b in data.net.blocks)
    )
    switched = switch_sigma_fast(tables, data, cycle_sigma(triple, nf))
    counts = clique_counts_per_vertex(switched, q + 1)
    assert sum(1 for c in counts if c == 0) == 3 * q
    fingerprints.append(tuple(sorted((c, counts.count(c)) for c in set(counts))))
    # q distinct fingerprints, all different from W(q)'s: at least q mates
    assert len(set(fingerprints)) == q
    assert all(f != ((q + 1, n),) for f in fingerprints)
    print(f"\nACCEPTANCE 5 PASS (q={q}): switch fingerprints match the counting; >= {q} mates")


@pytest.mark.parametrize("q", [2, 3, 4])
def test_criterion_6_gm_oracle(q, w2_data, w3_data, w4_data):
    data = {2: w2_data, 3: w3_data, 4: w4_data}[q]
    g = data.graph
    nf = q * q
    rng = random.Random(600 + q)
    for _ in range(50):
        a, b = rng.sample(range(nf), 2)
        sigma = list(range(nf))
        sigma[a], sigma[b] = b, a
        switched = switch_sigma(data, tuple(sigma), certify=False)
        d = [data.v] + data.block_vertices
        fa = set(data.fibres[data.phi.index(a)])
        fb = set(data.fibres[data.phi.index(b)])
        cells = [sorted(fa | fb)] + [f for i, f in enumerate(data.fibres) if data.phi[i] not in (a, b)]
        assert gm_switch(g, d, cells) == switched
    print(f"\nACCEPTANCE 6 PASS (q={q}): 50 fibre transpositions equal Godsil-McKay switching byte-for-byte")


@pytest.fixture(scope="module")
def hermitian_q2():
    g = hermitian_gq_graph(2)
    data = decompose(g, regular_points(g, GqOrder(4, 2))[0], GqOrder(4, 2))
    return g, data


@pytest.fixture(scope="module")
def hermitian_q3():
    g = hermitian_gq_graph(3)
    data = decompose(g, 0, GqOrder(9, 3))
    return g, data


def test_criterion_7_hermitian_mates(hermitian_q2, hermitian_q3):
    # GQ(4,2): the type-swapping switch gives a non-geometric mate, and
    # the construction applied to the mate returns the original's class
    g42, data42 = hermitian_q2
    sigma = type_swapping_automorphism(data42.bhat)
    assert sigma is not None and not is_collineation(sigma, data42.net)
    mate = switch_sigma(data42, sigma)
    assert check_srg(mate).as_tuple() == (45, 12, 3, 3)
    assert not are_isomorphic(mate, g42)
    order42 = GqOrder(4, 2)
    rps = regular_points(mate, order42)
    assert rps
    data_back = decompose(mate, rps[0], order42)
    sigma_back = type_swapping_automorphism(data_back.bhat)
    back = switch_sigma(data_back, sigma_back)
    assert are_isomorphic(back, g42)

    # GQ(9,3): exactly one new class with parameters (280,36,8,4)
    g93, data93 = hermitian_q3
    sigma93 = type_swapping_automorphism(data93.bhat)
    assert sigma93 is not None and not is_collineation(sigma93, data93.net)
    mate93 = switch_sigma(data93, sigma93)
    assert check_srg(mate93).as_tuple() == (280, 36, 8, 4)
    f_orig = canonical_form(g93)
    f_mate = canonical_form(mate93)
    assert f_mate != f_orig
    # a different type-swapping automorphism lands in the same class:
    # conjugate by a translation of the matrix space
    q = 3
    ref = bilinear_forms_graph(q)
    psi = isomorphism_map(data93.bhat, ref)
    shift = [0] * 81
    for i in range(81):
        digits = [(i // q**k) % q for k in (3, 2, 1, 0)]
        digits[3] = (digits[3] + 1) % q
        shift[i] = ((digits[0] * q + digits[1]) * q + digits[2]) * q + digits[3]
    psi_inv = [0] * 81
    for v, p in enumerate(psi):
        psi_inv[p] = v
    translate = tuple(psi_inv[shift[psi[v]]] for v in range(81))
    assert data93.bhat.relabel(translate) == data93.bhat
    assert is_collineation(translate, data93.net)
    sigma93b = tuple(translate[sigma93[i]] for i in range(81))
    assert not is_collineation(sigma93b, data93.net)
    mate93b = switch_sigma(data93, sigma93b)
    assert canonical_form(mate93b) == f_mate
    print("\nACCEPTANCE 7 PASS: Hermitian mates exist, pair up, and form exactly one new class each")


def test_criterion_8_quotient_identifications(hermitian_q2, hermitian_q3):
    _, data42 = hermitian_q2
    assert are_isomorphic(data42.bhat, lattice_graph_complement(4))
    assert are_isomorphic(data42.bhat, bilinear_forms_graph(2))
    _, data93 = hermitian_q3
    assert are_isomorphic(data93.bhat, bilinear_forms_graph(3))
    print("\nACCEPTANCE 8 PASS: quotients are the lattice complement / bilinear forms graphs")


def test_criterion_9_spread_pipeline_q3(w3_data, sweep1, second_round, h1_form, h2_graph):
    order = GqOrder(3, 3)
    _, _, forms2 = second_round
    cover_forms = set()
    for form, sigma in sorted(sweep1.items()):
        rep = switch_sigma(w3_data, sigma)
        for w in regular_points(rep, order):
            cover_forms.add(canonical_form(second_subconstituent(rep, w)))
    host, w2nd, _ = second_round
    data2 = decompose(host, w2nd, order)
    for form, sigma in sorted(forms2.items()):
        rep = switch_sigma(data2, sigma)
        for w in regular_points(rep, order):
            cover_forms.add(canonical_form(second_subconstituent(rep, w)))
    assert cover_forms == {h1_form, canonical_form(h2_graph)}
    for f in cover_forms:
        assert check_antipodal_cover(graph6_decode(f), 3)
    print("\nACCEPTANCE 9a PASS: the 17 graphs' second subconstituents are exactly the 2 covers of K9")


def test_criterion_9_spread_pipeline_q4(w4_data):
    order = GqOrder(4, 4)
    data = w4_data
    tables = _fast_switch_tables(data)
    lines = [sorted(b) for b in data.net.blocks]
    line0 = lines[0]
    parallel = next(l for l in lines[1:] if not set(l) & set(line0))
    sigmas = [cycle_sigma(line0[:r], 16) for r in (2, 3, 4)]
    two_two = list(range(16))
    for x, y in (line0[:2], line0[2:]):
        two_two[x], two_two[y] = y, x
    sigmas.append(tuple(two_two))
    across = list(range(16))
    for x, y in (line0[:2], parallel[:2]):
        across[x], across[y] = y, x
    sigmas.append(tuple(across))
    triple = next(
        t for t in combinations(range(16), 3) if not any(set(t) <= b for b in data.net.blocks)
    )
    sigmas.append(cycle_sigma(triple, 16))
    rng = random.Random(20250809)
    for _ in range(200):
        s = list(range(16))
        rng.shuffle(s)
        sigmas.append(tuple(s))

    srg_forms = set()
    cover_seen = set()
    for sigma in sigmas:
        g = switch_sigma_fast(tables, data, sigma)
        for w in range(85):
            if not _is_regular_point_unchecked(g, w, order):
                continue
            cov = second_subconstituent(g, w)
            cf = canonical_form(cov)
            if cf in cover_seen:
                continue
            cover_seen.add(cf)
            assert check_antipodal_cover(cov, 4)
            srg = add_spread(cov, antipodal_classes(cov))
            assert check_srg(srg).as_tuple() == (64, 18, 2, 6)
            assert find_spreads(srg, 3, limit=1)
            srg_forms.add(canonical_form(srg))
    assert len(srg_forms) == 6
    print("\nACCEPTANCE 9b PASS: W(4)-derived covers give exactly 6 SRG(64,18,2,6) classes with spreads")


@pytest.mark.parametrize("q,params", [(4, (85, 20, 3, 5)), (5, (156, 30, 4, 6))])
def test_criterion_10_sampling(q, params, w4_data, w5):
    order = GqOrder(q, q)
    data = w4_data if q == 4 else decompose(w5, 0, order)
    tables = _fast_switch_tables(data)
    rng = random.Random(1000 + q)
    nf = q * q
    forms = set()
    for _ in range(1000):
        s = list(range(nf))
        rng.shuffle(s)
        g = switch_sigma_fast(tables, data, tuple(s))
        assert check_srg(g).as_tuple() == params
        forms.add(canonical_form(g))
    fraction = len(forms) / 1000
    assert fraction >= 0.90
    print(f"\nACCEPTANCE 10 PASS (q={q}): 1000/1000 strongly regular, {fraction:.1%} distinct classes")


def test_criterion_11_identity_suites(w2_data, w3_data, w4_data, w5, hermitian_q2, hermitian_q3, second_round):
    corpus = [
        (w2_data.graph, w2_data.v, w2_data.order),
        (w3_data.graph, w3_data.v, w3_data.order),
        (w4_data.graph, w4_data.v, w4_data.order),
        (w5, 0, GqOrder(5, 5)),
        (hermitian_q2[0], hermitian_q2[1].v, GqOrder(4, 2)),
        (hermitian_q3[0], hermitian_q3[1].v, GqOrder(9, 3)),
    ]
    host, w2nd, _ = second_round
    corpus.append((host, w2nd, GqOrder(3, 3)))
    rng = random.Random(1100)
    s = list(range(9))
    rng.shuffle(s)
    corpus.append((switch_sigma(w3_data, tuple(s)), 0, GqOrder(3, 3)))

    for g, v, order in corpus:
        report = verify_subconstituent_equations(g, v, order)
        assert report.all_pass, (g, v, report.lines())
        # mutation: toggling one edge inside Gamma_2(v) breaks an identity
        far = [u for u in range(g.n) if u != v and not g.has_edge(v, u)]
        x = far[0]
        y = next(u for u in far[1:] if g.has_edge(x, u))
        rows = list(g.rows)
        rows[x] ^= 1 << y
        rows[y] ^= 1 << x
        mutated = Graph(g.n, rows)
        assert not verify_subconstituent_equations(mutated, v, order).all_pass
    print(f"\nACCEPTANCE 11 PASS: all identities hold on {len(corpus)} decompositions; every mutation breaks one")
