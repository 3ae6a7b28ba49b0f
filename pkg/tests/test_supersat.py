import itertools
import math
from fractions import Fraction

import pytest

from capwork import kernels
from capwork.errors import GuardCubicError, NonIntegralKError, PreconditionSizeError
from capwork.supersat import (
    epsilon_supersat_bound,
    interlacing_edge_bound,
    min_induced_edges,
    min_pair_sum_exhaustive,
    min_pair_sum_floor,
    plane_pairs_bound,
    triples_lower_bound,
)


def test_interlacing_bound_values():
    assert interlacing_edge_bound(15, 6, -3, 5) == 0
    assert interlacing_edge_bound(15, 6, -3, 6) == Fraction(18, 5)
    assert interlacing_edge_bound(15, 6, -3, 0) == 0


def test_interlacing_exact_minima_w32(w32_graph):
    for s in range(0, 7):
        bound = interlacing_edge_bound(15, 6, -3, s)
        report = min_induced_edges(w32_graph, s, mode="exact")
        assert Fraction(2 * report.min_observed) >= bound


def test_epsilon_bound_example():
    b = epsilon_supersat_bound(15, 6, -3, Fraction(1, 5), 6)
    assert b == Fraction(18, 5)
    # consistency: never exceeds the interlacing bound at the threshold
    assert b <= interlacing_edge_bound(15, 6, -3, 6)


def test_epsilon_bound_precondition():
    with pytest.raises(PreconditionSizeError):
        epsilon_supersat_bound(15, 6, -3, Fraction(1, 5), 5)


def test_epsilon_bound_sampled_never_violated(q43_graph):
    # s >= (1+eps) alpha with eps = 1 means s >= 20
    beta = epsilon_supersat_bound(40, 12, -4, 1, 20) / 400
    for trial in range(2000):
        s = 20 + kernels.mix64(trial * 3 + 1) % 21
        subset = kernels.sample_subset(40, s, 77, trial)
        lhs = 2 * q43_graph.induced_edge_count(subset)
        assert Fraction(lhs) >= epsilon_supersat_bound(40, 12, -4, 1, s)
    assert beta == Fraction(1, 5)


def test_pair_sum_floor_examples():
    assert min_pair_sum_floor(3, 2) == 2
    assert min_pair_sum_floor(7, 2) == 6
    assert min_pair_sum_floor(1, 4) == math.comb(3, 2)


def test_pair_sum_exhaustive_examples():
    assert min_pair_sum_exhaustive(3, 5) == 2  # (2,2,1)
    assert min_pair_sum_exhaustive(7, 13) == 6


def test_pair_sum_grid():
    # full grid s <= 8, y <= 5: the closed-form floor equals the true minimum
    for s in range(1, 9):
        for y in range(1, 6):
            assert min_pair_sum_exhaustive(s, s * y - 1) == min_pair_sum_floor(s, y)


def test_triples_k_form_fano(fano_triples):
    bound = triples_lower_bound(6, 2, 2, "k")
    assert bound == 4
    report = min_induced_edges(fano_triples, 6, mode="exact")
    assert report.min_observed == 4
    assert Fraction(report.min_observed) >= bound


def test_triples_cubic_guard_on_fano():
    # the cubic bound 216/45 = 4.8 would exceed the true minimum 4
    with pytest.raises(GuardCubicError):
        triples_lower_bound(6, 2, 2, "cubic")


def test_triples_cubic_valid_domain():
    # PG(2,3): [r]_q = 4 still below 6 -> guard; PG(2,5): [r]_q = 6 allowed
    with pytest.raises(GuardCubicError):
        triples_lower_bound(8, 2, 3, "cubic")
    val = triples_lower_bound(12, 2, 5, "cubic")
    assert val == Fraction(12**3, 15 * 6)


def test_triples_k_form_preconditions():
    with pytest.raises(NonIntegralKError):
        triples_lower_bound(7, 2, 2, "k")  # not a multiple of 3
    with pytest.raises(NonIntegralKError):
        triples_lower_bound(3, 2, 2, "k")  # k = 1


def test_triples_k_form_pg23(h23):
    # |P| = 8 = 2 * [2]_3: exhaustive minimum over all 8-subsets
    bound = triples_lower_bound(8, 2, 3, "k")
    report = min_induced_edges(h23, 8, mode="exact")
    assert Fraction(report.min_observed) >= bound


def test_triples_k_form_pg32_sampled(pg32):
    from capwork.graphs import collinear_triple_hypergraph

    h = collinear_triple_hypergraph(pg32)
    bound = triples_lower_bound(14, 3, 2, "k")
    report = min_induced_edges(h, 14, mode="sampled", trials=3000, seed=5)
    assert Fraction(report.min_observed) >= bound


def test_plane_pairs_bound_values():
    assert plane_pairs_bound(Fraction(1, 9), 2) == Fraction(21, 9)
    assert plane_pairs_bound(0, 2) == 0


def test_plane_pairs_sampled(plane_graph_pg52):
    # 10-subsets of the 1395 planes: pair count >= ceil(21/9) = 3
    bound = plane_pairs_bound(Fraction(1, 9), 2)
    worst = None
    for trial in range(2000):
        subset = kernels.sample_subset(1395, 10, 11, trial)
        pairs = plane_graph_pg52.induced_edge_count(subset)
        worst = pairs if worst is None else min(worst, pairs)
    assert worst >= math.ceil(bound)


def test_min_induced_edges_modes(w32_graph):
    exact = min_induced_edges(w32_graph, 6, mode="exact")
    assert exact.mode == "exact"
    sampled = min_induced_edges(w32_graph, 6, mode="sampled", trials=500, seed=1)
    assert sampled.min_observed >= exact.min_observed
    trivial = min_induced_edges(w32_graph, 1, mode="exact")
    assert trivial.min_observed == 0


def test_report_roundtrip(w32_graph):
    from capwork.supersat import SupersatReport

    rep = min_induced_edges(w32_graph, 5, mode="exact", instance="w32")
    again = SupersatReport.from_json(rep.to_json())
    assert again == rep
