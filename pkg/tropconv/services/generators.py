"""
Instance Generators

Seeded random set functions, graphs with color costs, and colored DAGs.
The same seed and parameters always produce the same instance.

Distributions for set-function values (M = the given bound):
    uniform:M   integers uniform in [0, M]
    powerlaw:M  log-uniform integers in [1, M] (density ~ 1/v)
    bimodal:M   half the mass near 0, half near M (windows of width sqrt(M))
"""

import logging
import math
from typing import Any, Dict, Optional, Tuple

import numpy as np

from tropconv.exceptions import UsageError
from tropconv.models.graphs import ColoredDag, Graph
from tropconv.services.setfunction import INF, SetFunction, check_order

# Configure logging
logger = logging.getLogger(__name__)

DISTRIBUTIONS = ("uniform", "powerlaw", "bimodal")


def parse_distribution(spec: str) -> Tuple[str, int]:
    """Split "name:M" into (name, M)."""
    name, sep, bound = spec.partition(":")
    if name not in DISTRIBUTIONS or not sep:
        raise UsageError(f"Distribution must be one of {DISTRIBUTIONS} as name:M, got '{spec}'")
    try:
        value = int(bound)
    except ValueError:
        raise UsageError(f"Distribution bound must be an integer, got '{bound}'")
    if value < 0 or (name == "powerlaw" and value < 1):
        raise UsageError(f"Distribution bound out of range: {value}")
    return name, value


def _check_probability(p: float, name: str) -> float:
    if not 0.0 <= p <= 1.0:
        raise UsageError(f"{name} must lie in [0, 1], got {p}")
    return p


def draw_values(rng: np.random.Generator, size: int, name: str, bound: int) -> np.ndarray:
    if name == "uniform":
        return rng.integers(0, bound + 1, size=size)
    if name == "powerlaw":
        exponents = rng.random(size) * math.log(bound + 1)
        return np.minimum(np.floor(np.exp(exponents)).astype(np.int64), bound)
    width = max(1, math.isqrt(bound))
    low = rng.integers(0, min(width, bound) + 1, size=size)
    high = rng.integers(max(0, bound - width), bound + 1, size=size)
    return np.where(rng.random(size) < 0.5, low, high)


def random_set_function(n: int, dist: str = "uniform:1024", inf_frac: float = 0.0,
                        seed: Optional[int] = None) -> Tuple[SetFunction, Dict[str, Any]]:
    """
    Draw a set function of order n.

    Returns:
        Tuple of (function, meta) where meta records seed and generator
    """
    check_order(n)
    _check_probability(inf_frac, "inf-frac")
    name, bound = parse_distribution(dist)
    rng = np.random.default_rng(seed)
    size = 1 << n
    values = draw_values(rng, size, name, bound)
    infinite = rng.random(size) < inf_frac
    out = [INF if gone else int(v) for v, gone in zip(values.tolist(), infinite.tolist())]
    meta = {"seed": seed, "generator": dist, "inf_frac": inf_frac}
    return SetFunction(n, out), meta


def random_graph(n: int, k: int, edge_prob: float = 0.5, cost_max: int = 10,
                 negative: bool = False, seed: Optional[int] = None) -> Tuple[Graph, Dict[str, Any]]:
    """G(n, p) with integer costs in [0, cost_max] (or [-cost_max, cost_max] when negative)."""
    _check_probability(edge_prob, "edge-prob")
    if cost_max < 0:
        raise UsageError(f"cost-max must be nonnegative, got {cost_max}")
    rng = np.random.default_rng(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < edge_prob]
    low = -cost_max if negative else 0
    costs = rng.integers(low, cost_max + 1, size=(n, k)).tolist()
    meta = {"seed": seed, "generator": "gnp", "edge_prob": edge_prob, "cost_max": cost_max}
    return Graph.from_edges(n, k, edges, costs), meta


def random_dag(n: int, k: int, edge_prob: float = 0.3, weight_max: int = 10,
               seed: Optional[int] = None) -> Tuple[ColoredDag, Dict[str, Any]]:
    """Random DAG on vertices 0..n-1 with edges u->v only for u < v."""
    _check_probability(edge_prob, "edge-prob")
    if weight_max < 0:
        raise UsageError(f"weight-max must be nonnegative, got {weight_max}")
    rng = np.random.default_rng(seed)
    colors = rng.integers(1, k + 1, size=n).tolist()
    edges = [(u, v, int(rng.integers(0, weight_max + 1)))
             for u in range(n) for v in range(u + 1, n) if rng.random() < edge_prob]
    meta = {"seed": seed, "generator": "dag", "edge_prob": edge_prob, "weight_max": weight_max}
    return ColoredDag(k=k, colors=colors, edges=edges), meta
