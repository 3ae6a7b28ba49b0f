import itertools
from fractions import Fraction

import numpy as np
import pytest

from capwork import kernels
from capwork.errors import EmptySetError, GuardError
from capwork.gf import make_field
from capwork.graphs import (
    collinear_triple_hypergraph,
    collinearity_graph,
    oppositeness_graph,
    pack_bool_rows,
    subspace_intersection_graph,
)
from capwork.projective import build_pg


@pytest.mark.parametrize(
    "fixture,n,d",
    [
        ("w32_graph", 15, 6),
        ("q43_graph", 40, 12),
        ("w32_opp", 45, 16),
        ("line_graph_pg32", 35, 18),
        ("plane_graph_pg52", 1395, 882),
    ],
)
def test_graph_parameters(request, fixture, n, d):
    g = request.getfixturevalue(fixture)
    assert g.n == n
    assert g.is_regular()
    assert g.degree() == d


def test_hyperbolic_grid_graph():
    from capwork.polar import hyperbolic_quadric

    g = collinearity_graph(hyperbolic_quadric(2, make_field(2)))
    assert (g.n, g.degree()) == (9, 4)  # 3x3 rook graph


def test_oppositeness_w33():
    from capwork.polar import symplectic

    g = oppositeness_graph(symplectic(2, make_field(3)))
    assert (g.n, g.degree()) == (160, 81)


def test_oppositeness_grid_regular():
    from capwork.polar import hyperbolic_quadric

    g = oppositeness_graph(hyperbolic_quadric(2, make_field(2)))
    assert g.n == 18 and g.is_regular() and g.degree() == 4


def test_line_graph_disjoint_lines_nonadjacent(pg32, line_graph_pg32):
    labels = line_graph_pg32.labels
    for i, j in itertools.combinations(range(8), 2):
        touching = bool(set(labels[i]) & set(labels[j]))
        assert kernels.mask_contains(line_graph_pg32.rows[i], j) == touching


@pytest.mark.parametrize(
    "r,q,edges",
    [(3, 2, 35), (2, 3, 52), (3, 3, 520), (2, 2, 7), (4, 2, 155)],
)
def test_hypergraph_edge_counts(r, q, edges):
    from capwork.gf import field_of_order

    h = collinear_triple_hypergraph(build_pg(r, field_of_order(q)))
    assert h.edge_count == edges == h.n * (h.n - 1) * (q - 1) // 6
    assert len(h.edges) == edges
    assert h.max_codegree(range(h.n)) == q - 1


def test_triples_all_collinear(h23, pg23):
    lines = {tuple(int(x) for x in row) for row in pg23.lines}
    for tri in h23.edges[:200]:
        a, b, c = (int(x) for x in tri)
        line = pg23.line_points(a, b)
        assert line in lines and c in line


def test_triples_sorted_and_distinct(h33):
    edges = [tuple(int(x) for x in row) for row in h33.edges]
    assert edges == sorted(edges)
    assert len(set(edges)) == len(edges)
    for a, b, c in edges[:100]:
        assert a < b < c


def test_induced_counts(w32_graph, h23):
    assert w32_graph.induced_edge_count([]) == 0
    assert w32_graph.induced_edge_count(range(15)) == 45
    assert h23.induced_edge_count(range(13)) == 52
    line = [int(x) for x in h23.geometry.lines[0]]
    assert h23.induced_edge_count(line) == 4
    assert h23.max_codegree(line) == 2
    assert h23.avg_degree(line) == Fraction(3)
    assert h23.max_codegree([0, 1]) in (0, 1)  # two points: at most q-1=2 triples
    with pytest.raises(EmptySetError):
        h23.avg_degree([])


def test_hyper_induced_monotone(h23):
    subset = []
    last = 0
    for v in range(13):
        subset.append(v)
        e = h23.induced_edge_count(subset)
        assert e >= last
        last = e


def test_full_hypergraph_induced_equals_total(fano_triples):
    assert fano_triples.induced_edge_count(range(7)) == 35 // 5  # 7 lines, one triple each


def test_closed_form_only_mode():
    pg = build_pg(3, make_field(31))
    h = collinear_triple_hypergraph(pg)
    assert not h.materialized
    assert h.edge_count == pg.n_points * (pg.n_points - 1) * 30 // 6
    with pytest.raises(GuardError):
        h.induced_edge_count(range(10))
    with pytest.raises(GuardError):
        h.third_masks()


def test_byte_identical_rebuild(w32):
    from capwork.cache import graph_to_bytes

    g1 = collinearity_graph(w32)
    g2 = collinearity_graph(w32)
    assert graph_to_bytes(g1) == graph_to_bytes(g2)


def test_pack_bool_rows_roundtrip():
    rng = np.random.default_rng(3)
    mat = rng.random((70, 70)) < 0.3
    mat |= mat.T
    np.fill_diagonal(mat, False)
    rows = pack_bool_rows(mat)
    for i in range(70):
        assert set(kernels.mask_indices(rows[i])) == set(np.flatnonzero(mat[i]).tolist())


def test_intersection_graph_guard(pg23):
    with pytest.raises(GuardError):
        subspace_intersection_graph(pg23, 4)
