import itertools
import random

import numpy as np
import pytest

from gqswitch.geometry import GqOrder, affine_plane
from gqswitch.graphcore import Graph, induced_subgraph
from gqswitch.isocanon import are_isomorphic, canonical_form, is_collineation
from gqswitch.regpoint import decompose
from gqswitch.specalg import check_antipodal_cover, check_srg
from gqswitch.switchkit import (
    add_spread,
    antipodal_classes,
    assemble,
    find_spreads,
    gm_switch,
    remove_spread,
    sweep_classes,
    switch_sigma,
    switch_sigma_fast,
    _fast_switch_tables,
)


def traces(g, kmax):
    """Integer power traces; equal traces up to n <=> cospectral."""
    n = g.n
    A = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in g.neighbors(i):
            A[i, j] = 1
    out = []
    p = np.eye(n, dtype=np.int64)
    for _ in range(kmax + 1):
        out.append(int(np.trace(p)))
        p = p @ A
    return out


def test_identity_switch_is_identity(w3_data):
    assert switch_sigma(w3_data, tuple(range(9))) == w3_data.graph


def test_switch_preserves_parameters(w3_data):
    rng = random.Random(4)
    for _ in range(5):
        s = list(range(9))
        rng.shuffle(s)
        assert check_srg(switch_sigma(w3_data, tuple(s))).as_tuple() == (40, 12, 2, 4)


def test_w2_all_switches_isomorphic(w2_data, w2):
    forms = set()
    for s in itertools.permutations(range(4)):
        forms.add(canonical_form(switch_sigma(w2_data, s)))
    assert forms == {canonical_form(w2)}


def test_assemble_rejects_bad_phi(gq42):
    # SRG(16,9,4,6) has no twin vertices, so swapping any two points of
    # phi breaks the quotient isomorphism required when s > t
    data = decompose(gq42, 0, GqOrder(4, 2))
    phi = list(data.phi)
    phi[0], phi[1] = phi[1], phi[0]
    with pytest.raises(ValueError):
        assemble(data, tuple(phi))


def test_assemble_rejects_non_bijection(w3_data):
    with pytest.raises(ValueError):
        assemble(w3_data, (0,) * 9)


def test_fast_switch_matches_certified(w3_data):
    tables = _fast_switch_tables(w3_data)
    rng = random.Random(6)
    for _ in range(20):
        s = list(range(9))
        rng.shuffle(s)
        s = tuple(s)
        assert switch_sigma_fast(tables, w3_data, s) == switch_sigma(w3_data, s)


def test_gm_oracle_transposition(w3_data):
    """A fibre transposition equals Godsil-McKay switching with
    D = {v} + Gamma_1(v) and the two fibres merged into one cell."""
    g = w3_data.graph
    rng = random.Random(7)
    for _ in range(5):
        a, b = rng.sample(range(9), 2)
        sigma = list(range(9))
        sigma[a], sigma[b] = sigma[b], sigma[a]
        switched = switch_sigma(w3_data, tuple(sigma))
        d = [w3_data.v] + w3_data.block_vertices
        fa = set(w3_data.fibres[w3_data.phi.index(a)])
        fb = set(w3_data.fibres[w3_data.phi.index(b)])
        cells = [sorted(fa | fb)] + [f for i, f in enumerate(w3_data.fibres) if w3_data.phi[i] not in (a, b)]
        gm = gm_switch(g, d, cells)
        assert gm == switched


def test_gm_switch_no_half_vertices_is_identity(w3):
    layers = [[v] for v in range(1, 40)]
    assert gm_switch(w3, [0], layers) == w3


def test_gm_switch_hand_case_cospectral():
    # D = {0,1} adjacent; C1 = 4-cycle 2-3-4-5; each D vertex sees half
    g = Graph.from_edges(6, [(0, 1), (2, 3), (3, 4), (4, 5), (5, 2), (0, 2), (0, 3), (1, 3), (1, 4)])
    h = gm_switch(g, [0, 1], [[2, 3, 4, 5]])
    assert h != g
    assert traces(g, 6) == traces(h, 6)


def test_gm_switch_validates_partition(w3):
    with pytest.raises(ValueError):
        gm_switch(w3, [0], [list(range(1, 30))])  # not covering
    # non-equitable cells
    g = Graph.from_edges(4, [(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        gm_switch(g, [3], [[0, 1, 2]])


def test_gm_switch_rejects_non_half_pattern():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 0)])
    with pytest.raises(ValueError):
        gm_switch(g, [4], [[0, 1, 2, 3]])


def test_coset_lemma_translations(w3_data):
    """Composing sigma with a collineation does not change the class."""
    from gqswitch.geometry import net_incidence_graph
    from gqswitch.isocanon import isomorphism_map

    # conjugate a coordinate translation of AG(2,3) into the
    # decomposition net's labeling through a net isomorphism
    coords = affine_plane(3)
    translation = tuple(((p // 3 + 1) % 3) * 3 + p % 3 for p in range(9))
    assert is_collineation(translation, coords)
    psi_full = isomorphism_map(net_incidence_graph(w3_data.net), net_incidence_graph(coords))
    assert psi_full is not None
    psi = psi_full[:9]  # degrees separate points from blocks, so points map to points
    psi_inv = {v: i for i, v in enumerate(psi)}
    tau = tuple(psi_inv[translation[psi[p]]] for p in range(9))
    assert is_collineation(tau, w3_data.net)
    rng = random.Random(11)
    for _ in range(3):
        s = list(range(9))
        rng.shuffle(s)
        sigma = tuple(s)
        composed = tuple(sigma[tau[i]] for i in range(9))
        assert are_isomorphic(switch_sigma(w3_data, sigma), switch_sigma(w3_data, composed))


def test_transposition_is_not_collineation(w3_data):
    sigma = list(range(9))
    sigma[0], sigma[1] = 1, 0
    assert not is_collineation(tuple(sigma), w3_data.net)


def test_sweep_classes_matches_naive(w3_data):
    rng = random.Random(12)
    sigmas = []
    for _ in range(40):
        s = list(range(9))
        rng.shuffle(s)
        sigmas.append(tuple(s))
    forms = sweep_classes(w3_data, sigmas)
    naive = {canonical_form(switch_sigma(w3_data, s)) for s in sigmas}
    assert set(forms) == naive


def test_find_spreads_k6():
    spreads = find_spreads(Graph.complete(6), 2)
    assert len(spreads) == 10


def test_find_spreads_triangle_free_empty():
    c6 = Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
    assert find_spreads(c6, 2) == []


def test_find_spreads_divisibility():
    with pytest.raises(ValueError):
        find_spreads(Graph.complete(7), 2)


def test_find_spreads_limit():
    assert len(find_spreads(Graph.complete(6), 2, limit=3)) == 3


def test_spread_remove_add_roundtrip(cube):
    classes = antipodal_classes(cube)
    assert sorted(classes) == [(0, 7), (1, 6), (2, 5), (3, 4)]
    k44 = add_spread(cube, classes)
    assert check_srg(k44).as_tuple() == (8, 4, 0, 4)
    assert remove_spread(k44, classes) == cube


def test_spread_validation(cube):
    with pytest.raises(ValueError):
        remove_spread(cube, [(0, 1, 2, 3), (4, 5, 6, 7)])  # not cliques
    with pytest.raises(ValueError):
        add_spread(cube, [(0, 1)] + [(2, 5), (3, 4), (6, 7)])  # 0~1 edge exists


def test_gq24_spreads_from_w3_cover(w3):
    far = [u for u in range(40) if u != 0 and not w3.has_edge(0, u)]
    cover, _ = induced_subgraph(w3, far)
    assert check_antipodal_cover(cover, 3)
    srg = add_spread(cover, antipodal_classes(cover))
    assert check_srg(srg).as_tuple() == (27, 10, 1, 5)
    # 200 spreads in total, in two classes of 40 and 160; removing them
    # yields both antipodal 3-covers of K9
    spreads = find_spreads(srg, 2)
    assert len(spreads) == 200
    by_cover = {}
    for sp in spreads:
        by_cover.setdefault(canonical_form(remove_spread(srg, sp)), []).append(sp)
    assert len(by_cover) == 2
    assert sorted(len(v) for v in by_cover.values()) == [40, 160]
    assert canonical_form(cover) in by_cover
