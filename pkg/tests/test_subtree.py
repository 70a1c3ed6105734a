from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_colorful_subtree
from tropconv.exceptions import DomainError
from tropconv.models.graphs import ColoredDag
from tropconv.services.generators import random_dag
from tropconv.services.setfunction import NEG_INF
from tropconv.services.subtree import colorful_subtree_table, max_colorful_subtree


def test_empty_dag():
    assert max_colorful_subtree(ColoredDag(k=1, colors=[])) == 0


def test_single_vertex():
    assert max_colorful_subtree(ColoredDag(k=1, colors=[1])) == 0


def test_single_edge():
    dag = ColoredDag(k=2, colors=[1, 2], edges=[(0, 1, 7)])
    assert max_colorful_subtree(dag) == 7


def test_repeated_color_is_not_colorful():
    dag = ColoredDag(k=2, colors=[1, 1], edges=[(0, 1, 7)])
    assert max_colorful_subtree(dag) == 0


def test_branching_tree_uses_merge():
    # root 0 with two children of distinct colors
    dag = ColoredDag(k=3, colors=[1, 2, 3], edges=[(0, 1, 4), (0, 2, 5)])
    assert max_colorful_subtree(dag) == 9
    table = colorful_subtree_table(dag)
    assert table[0][0b111] == 9
    assert table[0][0b011] == 4
    assert table[1][0b001] == NEG_INF


def test_rational_weights():
    dag = ColoredDag(k=2, colors=[1, 2], edges=[(0, 1, "3/2")])
    assert max_colorful_subtree(dag) == Fraction(3, 2)


@pytest.mark.parametrize("seed", range(6))
def test_exact_matches_brute_force(seed):
    dag, _ = random_dag(7, 4, edge_prob=0.4, weight_max=12, seed=seed)
    assert max_colorful_subtree(dag) == brute_colorful_subtree(dag)


@pytest.mark.parametrize("eps", [Fraction(1, 2), Fraction(1, 10)])
def test_approximation_within_factor(eps):
    for seed in range(3):
        dag, _ = random_dag(6, 4, edge_prob=0.5, weight_max=50, seed=seed)
        opt = brute_colorful_subtree(dag)
        value = max_colorful_subtree(dag, eps)
        assert (1 - eps) * opt <= value <= opt


def test_cycle_is_rejected():
    dag = ColoredDag(k=2, colors=[1, 2], edges=[(0, 1, 1), (1, 0, 1)])
    with pytest.raises(DomainError):
        max_colorful_subtree(dag)


def test_negative_weight_is_rejected():
    dag = ColoredDag(k=2, colors=[1, 2], edges=[(0, 1, -1)])
    with pytest.raises(DomainError):
        max_colorful_subtree(dag)


def test_epsilon_one_is_rejected():
    dag = ColoredDag(k=2, colors=[1, 2], edges=[(0, 1, 1)])
    with pytest.raises(DomainError):
        max_colorful_subtree(dag, 1)


@given(st.integers(min_value=0, max_value=2 ** 32))
@settings(max_examples=25, deadline=None)
def test_table_grows_under_merges(seed):
    dag, _ = random_dag(7, 4, edge_prob=0.4, weight_max=12, seed=seed)
    table = colorful_subtree_table(dag)
    full = (1 << dag.k) - 1
    for v in range(dag.size):
        root_bit = 1 << (dag.colors[v] - 1)
        row = table[v].tolist()
        for s1 in range(1 << dag.k):
            if not s1 & root_bit or row[s1] == NEG_INF:
                continue
            # every S2 meeting S1 only in the root color
            free = full & ~s1
            s2 = free
            while True:
                other = s2 | root_bit
                if row[other] != NEG_INF:
                    assert row[s1 | other] >= row[s1] + row[other] >= row[s1]
                if s2 == 0:
                    break
                s2 = (s2 - 1) & free


def test_table_is_indexed_by_exact_color_set():
    # v(1) -> a(2) and v(1) -> x(4) -> y(3): no tree rooted at v has colors exactly {1, 2, 3}
    dag = ColoredDag(k=4, colors=[1, 2, 4, 3], edges=[(0, 1, 100), (0, 2, 0), (2, 3, 0)])
    table = colorful_subtree_table(dag)
    assert table[0][0b0011] == 100
    assert table[0][0b0111] == NEG_INF
    assert table[0][0b1111] == 100
