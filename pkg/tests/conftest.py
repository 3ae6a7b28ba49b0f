import pytest

from capwork.gf import make_field
from capwork.graphs import (
    collinear_triple_hypergraph,
    collinearity_graph,
    oppositeness_graph,
    subspace_intersection_graph,
)
from capwork.polar import elliptic_quadric, parabolic_quadric, symplectic
from capwork.projective import build_pg


@pytest.fixture(scope="session")
def w32():
    return symplectic(2, make_field(2))


@pytest.fixture(scope="session")
def w33():
    return symplectic(2, make_field(3))


@pytest.fixture(scope="session")
def q43():
    return parabolic_quadric(2, make_field(3))


@pytest.fixture(scope="session")
def qminus52():
    return elliptic_quadric(2, make_field(2))


@pytest.fixture(scope="session")
def w32_graph(w32):
    return collinearity_graph(w32)


@pytest.fixture(scope="session")
def w32_opp(w32):
    return oppositeness_graph(w32)


@pytest.fixture(scope="session")
def q43_graph(q43):
    return collinearity_graph(q43)


@pytest.fixture(scope="session")
def pg32():
    return build_pg(3, make_field(2))


@pytest.fixture(scope="session")
def pg23():
    return build_pg(2, make_field(3))


@pytest.fixture(scope="session")
def pg22():
    return build_pg(2, make_field(2))


@pytest.fixture(scope="session")
def pg33():
    return build_pg(3, make_field(3))


@pytest.fixture(scope="session")
def pg52():
    return build_pg(5, make_field(2))


@pytest.fixture(scope="session")
def fano_triples(pg22):
    return collinear_triple_hypergraph(pg22)


@pytest.fixture(scope="session")
def h23(pg23):
    return collinear_triple_hypergraph(pg23)


@pytest.fixture(scope="session")
def h33(pg33):
    return collinear_triple_hypergraph(pg33)


@pytest.fixture(scope="session")
def line_graph_pg32(pg32):
    return subspace_intersection_graph(pg32, 2)


@pytest.fixture(scope="session")
def plane_graph_pg52(pg52):
    return subspace_intersection_graph(pg52, 3)
