from fractions import Fraction

import pytest

from conftest import brute_coloring
from tropconv.exceptions import DomainError
from tropconv.models.graphs import Graph
from tropconv.services.coloring import (
    APPROX,
    EXACT,
    color_cost_function,
    compound_delta,
    independent_set_table,
    kcoloring_cost,
    kcoloring_witness,
)
from tropconv.services.generators import random_graph
from tropconv.services.setfunction import INF, mask_of


def test_independent_sets_of_triangle(triangle):
    table = independent_set_table(triangle)
    ones = [s for s, v in enumerate(table.tolist()) if v == 1]
    assert ones == [0, mask_of([1]), mask_of([2]), mask_of([3])]


def test_independent_sets_of_edgeless_graph():
    graph = Graph.from_edges(3, 1, [], [[0]] * 3)
    assert independent_set_table(graph).tolist() == [1] * 8


def test_independent_sets_of_single_edge():
    graph = Graph.from_edges(2, 1, [(0, 1)], [[0], [0]])
    assert independent_set_table(graph).tolist() == [1, 1, 1, 0]


def test_color_cost_function_on_triangle(triangle):
    s = color_cost_function(triangle, 2)
    assert s.tolist() == [0, 1, 1, INF, 1, INF, INF, INF]


def test_color_cost_function_edgeless_zero_costs():
    graph = Graph.from_edges(3, 2, [], [[0, 0]] * 3)
    assert color_cost_function(graph, 1).tolist() == [0] * 8


def test_color_out_of_range(triangle):
    with pytest.raises(DomainError):
        color_cost_function(triangle, 4)


def test_triangle_costs(triangle):
    assert kcoloring_cost(triangle, 3) == 3
    assert kcoloring_cost(triangle, 2) == INF


def test_single_vertex():
    graph = Graph.from_edges(1, 1, [], [[5]])
    assert kcoloring_cost(graph, 1) == 5


def test_exact_matches_brute_force():
    for seed in range(6):
        for k in (2, 3):
            graph, _ = random_graph(6, k, edge_prob=0.4, cost_max=9, seed=seed)
            assert kcoloring_cost(graph, k, EXACT) == brute_coloring(graph, k)


def test_exact_with_negative_costs():
    for seed in range(4):
        graph, _ = random_graph(5, 3, edge_prob=0.5, cost_max=6, negative=True, seed=seed)
        assert kcoloring_cost(graph, 3, EXACT) == brute_coloring(graph, 3)


def test_exact_bound_must_cover_costs(triangle):
    with pytest.raises(DomainError):
        kcoloring_cost(triangle, 3, EXACT, bound=0)
    assert kcoloring_cost(triangle, 3, EXACT, bound=10) == 3


@pytest.mark.parametrize("eps", [Fraction(1, 2), Fraction(1, 10)])
def test_approx_within_factor(eps):
    for seed in range(3):
        graph, _ = random_graph(6, 3, edge_prob=0.4, cost_max=20, seed=seed)
        opt = brute_coloring(graph, 3)
        value = kcoloring_cost(graph, 3, APPROX, eps=eps)
        if opt == INF:
            assert value == INF
        else:
            assert opt <= value <= (1 + eps) * opt


def test_approx_needs_nonnegative_costs():
    graph = Graph.from_edges(2, 2, [(0, 1)], [[-1, 0], [0, 0]])
    with pytest.raises(DomainError):
        kcoloring_cost(graph, 2, APPROX, eps=Fraction(1, 2))


def test_compound_delta():
    delta = compound_delta(Fraction(1, 10), 3)
    assert (1 + delta) ** 3 <= Fraction(11, 10)
    assert (1 + delta + Fraction(1, 2 ** 32)) ** 3 > Fraction(11, 10)
    assert compound_delta(Fraction(1, 10), 1) == Fraction(1, 10)


def test_witness_is_optimal_and_proper():
    for seed in range(4):
        graph, _ = random_graph(6, 3, edge_prob=0.4, cost_max=9, seed=seed)
        colors = kcoloring_witness(graph, 3)
        opt = brute_coloring(graph, 3)
        if opt == INF:
            assert colors is None
            continue
        assert all(colors[u] != colors[v] for u, v in graph.edges())
        assert sum(graph.costs[v][c - 1] for v, c in enumerate(colors)) == opt


def test_witness_infeasible(triangle):
    assert kcoloring_witness(triangle, 2) is None


def test_k_must_fit_the_cost_table(triangle):
    with pytest.raises(DomainError):
        kcoloring_cost(triangle, 4)
    with pytest.raises(DomainError):
        kcoloring_cost(triangle, 0)
