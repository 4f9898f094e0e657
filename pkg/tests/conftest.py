"""Shared fixtures: the expensive graphs and decompositions are built once
per session."""
from __future__ import annotations

import os

import pytest

from gqswitch.geometry import GqOrder, hermitian_gq_graph, wq_graph
from gqswitch.graphcore import Graph
from gqswitch.regpoint import decompose


def jobs() -> int:
    return int(os.environ.get("GQSWITCH_JOBS", os.cpu_count() or 1))


@pytest.fixture(scope="session")
def w2():
    return wq_graph(2)


@pytest.fixture(scope="session")
def w3():
    return wq_graph(3)


@pytest.fixture(scope="session")
def w4():
    return wq_graph(4)


@pytest.fixture(scope="session")
def w5():
    return wq_graph(5)


@pytest.fixture(scope="session")
def gq42():
    return hermitian_gq_graph(2)


@pytest.fixture(scope="session")
def w2_data(w2):
    return decompose(w2, 0, GqOrder(2, 2))


@pytest.fixture(scope="session")
def w3_data(w3):
    return decompose(w3, 0, GqOrder(3, 3))


@pytest.fixture(scope="session")
def w4_data(w4):
    return decompose(w4, 0, GqOrder(4, 4))


@pytest.fixture(scope="session")
def cube():
    return Graph.from_edges(
        8, [(i, i ^ 1) for i in range(8)] + [(i, i ^ 2) for i in range(8)] + [(i, i ^ 4) for i in range(8)]
    )


@pytest.fixture(scope="session")
def petersen():
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]
    edges += [(5, 7), (7, 9), (9, 6), (6, 8), (8, 5)]
    edges += [(0, 5), (1, 6), (2, 7), (3, 8), (4, 9)]
    return Graph.from_edges(10, edges)


# the two 27-vertex antipodal 3-covers of K9, as published graph6 strings
H1_STRING = b"ZQhSaQOQcaHC``WWObJCG`WD_Y????FwC?B~BBB_]@c@eWOKKKcKoB`E@wP?"
H2_STRING = b"Z@G`PG_GH_HKRGPbGXAOoSgDSOaacCKdaBSK`JDCOxCOLHWcgpAf?SgRGTA?"


@pytest.fixture(scope="session")
def h1_graph():
    from gqswitch.graphcore import graph6_decode

    return graph6_decode(H1_STRING)


@pytest.fixture(scope="session")
def h2_graph():
    from gqswitch.graphcore import graph6_decode

    return graph6_decode(H2_STRING)
