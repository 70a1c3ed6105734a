"""
Minimum-Cost k-Coloring

The cost of the cheapest proper k-coloring of G[X] is (s_1 ⋆ ... ⋆ s_k)(X),
where s_i(X) is the total cost of giving every vertex of X color i when X is
independent, and inf otherwise. Exact mode chains bounded min-sum
convolutions over shifted costs; approximate mode chains the strongly
polynomial (1+delta)-approximation with delta chosen so the compound factor
stays within 1+eps.
"""

import logging
from fractions import Fraction
from typing import Any, List, Optional, Tuple

import numpy as np

from tropconv.exceptions import DomainError, IntegrityError
from tropconv.models.graphs import Graph
from tropconv.models.params import as_params
from tropconv.services.approx import approx_minsum_strong, normalize
from tropconv.services.lattice import bounded_minsum_convolution
from tropconv.services.setfunction import INF, SetFunction, is_finite, iter_submasks

# Configure logging
logger = logging.getLogger(__name__)

EXACT = "exact"
APPROX = "approx"
_DELTA_BITS = 32


def independent_set_table(graph: Graph) -> SetFunction:
    """0/1 indicator of independent vertex sets, built by adding the highest vertex."""
    size = 1 << graph.n
    independent = np.ones(size, dtype=bool)
    for v in range(graph.n):
        half = 1 << v
        lower = np.arange(half)
        independent[half:2 * half] = independent[:half] & ((lower & graph.adjacency[v]) == 0)
    return SetFunction(graph.n, independent.astype(np.int64).tolist())


def color_cost_function(graph: Graph, color: int) -> SetFunction:
    """
    s_i(X): sum of c(x, i) over X when X is independent, else inf.

    Args:
        graph: Graph with a cost table
        color: Color i in [1, k]
    """
    if not 1 <= color <= graph.k:
        raise DomainError(f"Color {color} outside [1, {graph.k}]")
    size = 1 << graph.n
    sums = np.zeros(size, dtype=object)
    for v in range(graph.n):
        half = 1 << v
        sums[half:2 * half] = sums[:half] + graph.costs[v][color - 1]
    independent = independent_set_table(graph).values.astype(bool)
    return SetFunction(graph.n, np.where(independent, sums, INF))


def compound_delta(eps: Fraction, steps: int) -> Fraction:
    """Largest j / 2^32 with (1 + j/2^32)^steps <= 1 + eps."""
    if steps <= 1:
        return eps
    target = 1 + eps
    lo, hi = 0, 1 << _DELTA_BITS
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if (1 + Fraction(mid, 1 << _DELTA_BITS)) ** steps <= target:
            lo = mid
        else:
            hi = mid - 1
    if lo == 0:
        raise DomainError(f"epsilon {eps} is too small to split over {steps} convolutions")
    return Fraction(lo, 1 << _DELTA_BITS)


def _check_colors(graph: Graph, k: int) -> None:
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    if k > graph.k:
        raise DomainError(f"The cost table has {graph.k} colors, k={k} requested")


def _exact_chain(graph: Graph, k: int,
                 bound: int) -> Tuple[List[SetFunction], List[SetFunction]]:
    """Suffix products P_j = s_j ⋆ ... ⋆ s_k over costs shifted by +bound (P_1 first)."""
    shifted = graph.model_copy(update={
        "costs": [[c + bound for c in row] for row in graph.costs]
    })
    cap = 2 * bound * max(graph.n, 1)
    functions = [color_cost_function(shifted, i) for i in range(1, k + 1)]
    suffix = [functions[-1]]
    for fn in reversed(functions[:-1]):
        suffix.append(bounded_minsum_convolution(fn, suffix[-1], cap))
    suffix.reverse()
    return functions, suffix


def kcoloring_cost(graph: Graph, k: int, mode: str = EXACT, eps: Any = None,
                   bound: Optional[int] = None) -> Any:
    """
    Minimum total cost of a proper k-coloring, inf when G is not k-colorable.

    Args:
        graph: Graph with an n x k' cost table (k <= k')
        k: Number of colors
        mode: "exact" or "approx"
        eps: Accuracy for approx mode
        bound: M with |c(v, i)| <= M for exact mode (default: largest |cost|)

    Returns:
        The optimum (exact) or a value in [OPT, (1+eps) OPT] (approx)
    """
    _check_colors(graph, k)
    full = (1 << graph.n) - 1
    if k == 1:
        return color_cost_function(graph, 1)[full]

    if mode == EXACT:
        largest = graph.max_abs_cost()
        bound = largest if bound is None else bound
        if bound < largest:
            raise DomainError(f"Costs up to {largest} exceed the bound M={bound}")
        _, suffix = _exact_chain(graph, k, bound)
        value = suffix[0][full]
        logger.info(f"Exact {k}-coloring over {graph.n} vertices: {value}")
        return value if not is_finite(value) else value - graph.n * bound

    if mode != APPROX:
        raise DomainError(f"Unknown coloring mode '{mode}'")
    params = as_params(eps)
    params.strict()
    if any(c < 0 for row in graph.costs for c in row):
        raise DomainError("Approximate coloring needs nonnegative costs")
    delta = compound_delta(params.epsilon, k - 1)
    logger.info(f"Approximate {k}-coloring: per-step delta={float(delta):.6g}")
    acc = color_cost_function(graph, k)
    for i in range(k - 1, 0, -1):
        acc = approx_minsum_strong(color_cost_function(graph, i), acc, delta)
    return normalize(acc[full])


def kcoloring_witness(graph: Graph, k: int, bound: Optional[int] = None) -> Optional[List[int]]:
    """
    An optimal coloring (1-based color per vertex) from the exact chain, or None if infeasible.
    """
    _check_colors(graph, k)
    full = (1 << graph.n) - 1
    if k == 1:
        return [1] * graph.n if is_finite(color_cost_function(graph, 1)[full]) else None
    bound = graph.max_abs_cost() if bound is None else bound
    functions, suffix = _exact_chain(graph, k, bound)
    if not is_finite(suffix[0][full]):
        return None
    colors = [0] * graph.n
    rest = full
    for j in range(k - 1):
        target = suffix[j][rest]
        for part in iter_submasks(rest):
            left = functions[j][part]
            right = suffix[j + 1][rest ^ part]
            if is_finite(left) and is_finite(right) and left + right == target:
                break
        else:
            raise IntegrityError("Back-scan found no split matching the chain value")
        for v in range(graph.n):
            if part >> v & 1:
                colors[v] = j + 1
        rest ^= part
    for v in range(graph.n):
        if rest >> v & 1:
            colors[v] = k
    return colors
