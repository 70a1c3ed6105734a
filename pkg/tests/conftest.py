"""
Shared builders and brute-force oracles for the test suite.
"""

import itertools
import math

import numpy as np
import pytest

from tropconv.config import get_settings
from tropconv.models.graphs import ColoredDag, Graph
from tropconv.services.setfunction import INF, SetFunction


def random_fn(n, bound=16, inf_frac=0.0, seed=0, zero_frac=0.0):
    """Seeded set function with integer values in [0, bound], some inf and some forced zeros."""
    rng = np.random.default_rng(seed)
    values = rng.integers(0, bound + 1, size=1 << n).tolist()
    out = []
    for v, r, z in zip(values, rng.random(1 << n).tolist(), rng.random(1 << n).tolist()):
        if r < inf_frac:
            out.append(INF)
        elif z < zero_frac:
            out.append(0)
        else:
            out.append(v)
    return SetFunction(n, out)


def brute_coloring(graph: Graph, k: int):
    """Cheapest proper coloring over all k^n assignments (inf when none exists)."""
    best = math.inf
    edges = graph.edges()
    for colors in itertools.product(range(k), repeat=graph.n):
        if any(colors[u] == colors[v] for u, v in edges):
            continue
        best = min(best, sum(graph.costs[v][c] for v, c in enumerate(colors)))
    return best


def brute_colorful_subtree(dag: ColoredDag):
    """
    Heaviest colorful subtree by enumerating vertex sets with distinct colors.

    In a DAG every choice of one in-set parent per non-root vertex gives a
    tree, so the best tree on a set with root r takes the heaviest in-edge
    of every other vertex.
    """
    incoming = {v: [] for v in range(dag.size)}
    for u, v, w in dag.edges:
        incoming[v].append((u, w))
    best = 0
    for size in range(1, dag.size + 1):
        for subset in itertools.combinations(range(dag.size), size):
            if len({dag.colors[v] for v in subset}) != size:
                continue
            members = set(subset)
            for root in subset:
                total = 0
                for v in subset:
                    if v == root:
                        continue
                    weights = [w for u, w in incoming[v] if u in members]
                    if not weights:
                        break
                    total += max(weights)
                else:
                    best = max(best, total)
    return best


@pytest.fixture
def triangle():
    return Graph.from_edges(3, 3, [(0, 1), (1, 2), (0, 2)], [[1, 1, 1]] * 3)


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Each test sees settings built from its own environment."""
    for name in ("TROPCONV_THREADS", "TROPCONV_CHUNK_FACTOR", "TROPCONV_SPARSE_FACTOR",
                 "TROPCONV_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
