"""
Maximum Colorful Subtree

W(v, S) is the largest weight of a subtree rooted at v whose vertices carry
exactly the colors S (each once), with c(v) in S. Layers are processed by
|S|: first the edge relaxation

    W(v, S) = max over edges v->u with c(u) in S \\ {c(v)} of W(u, S \\ {c(v)}) + w(v, u)

then the merge of two subtrees sharing only the root

    W(v, S) = max over S1 ∪ S2 = S, S1 ∩ S2 = {c(v)} of W(v, S1) + W(v, S2),

evaluated as a max-sum subset convolution of X -> W(v, X ∪ {c(v)}) over the
colors other than c(v). With eps given, every merge uses the (1-delta)
approximation with delta = eps / (k |V|).
"""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np

from tropconv.models.graphs import ColoredDag
from tropconv.models.params import as_params
from tropconv.services.approx import approx_maxsum, normalize
from tropconv.services.lattice import naive_convolution
from tropconv.services.setfunction import MAX_SUM, NEG_INF, SetFunction, is_finite, popcounts

# Configure logging
logger = logging.getLogger(__name__)


def _other_colors(k: int, color: int) -> List[int]:
    return [c for c in range(1, k + 1) if c != color]


def _merge(dag: ColoredDag, table: np.ndarray, v: int, layer: int,
           delta: Optional[Fraction]) -> Dict[int, Any]:
    """Merge step for root v at layer |S| = layer; returns S-mask -> merged value."""
    color = dag.colors[v]
    others = _other_colors(dag.k, color)
    order = len(others)
    root_bit = 1 << (color - 1)
    # X (over `others`) <-> S = X ∪ {c(v)} (over all colors)
    lift = np.zeros(1 << order, dtype=np.int64)
    for i, c in enumerate(others):
        half = 1 << i
        lift[half:2 * half] = lift[:half] | (1 << (c - 1))
    lift |= root_bit
    sizes = popcounts(order)

    values = table[v][lift].copy()
    # only strictly smaller layers take part; the empty X would reproduce W(v, S) itself
    values[(sizes + 1 >= layer) | (sizes == 0)] = NEG_INF
    f = SetFunction(order, values)
    if not any(is_finite(x) for x in f.values.tolist()):
        return {}
    if delta is None:
        h = naive_convolution(f, f, MAX_SUM)
    else:
        h = approx_maxsum(f, f, delta)
    targets = np.flatnonzero(sizes + 1 == layer)
    return {int(lift[x]): h[x] for x in targets.tolist() if is_finite(h[x])}


def colorful_subtree_table(dag: ColoredDag, eps: Any = None) -> np.ndarray:
    """
    The full W table: one object row of length 2^k per vertex, -inf where undefined.

    Args:
        dag: Colored DAG with nonnegative weights
        eps: None for the exact DP, else the accuracy of the whole table
    """
    dag.topological_order()
    dag.require_nonnegative()
    k, size = dag.k, dag.size
    delta: Optional[Fraction] = None
    if eps is not None:
        epsilon = as_params(eps).strict()
        delta = epsilon / (k * max(size, 1))

    table = np.full((size, 1 << k), NEG_INF, dtype=object)
    for v in range(size):
        table[v][1 << (dag.colors[v] - 1)] = 0
    out_edges = dag.out_edges()
    layer_of = popcounts(k)

    for layer in range(2, k + 1):
        masks = np.flatnonzero(layer_of == layer).tolist()
        for v in range(size):
            root_bit = 1 << (dag.colors[v] - 1)
            for s in masks:
                if not s & root_bit:
                    continue
                rest = s ^ root_bit
                best = table[v][s]
                for u, w in out_edges[v]:
                    sub = table[u][rest]
                    if is_finite(sub) and rest >> (dag.colors[u] - 1) & 1:
                        best = max(best, sub + w)
                table[v][s] = best
        for v in range(size):
            for s, merged in _merge(dag, table, v, layer, delta).items():
                table[v][s] = max(table[v][s], merged)
        logger.debug(f"Colorful subtree layer {layer} done")
    return table


def max_colorful_subtree(dag: ColoredDag, eps: Any = None) -> Any:
    """
    Weight of the heaviest colorful subtree, exactly or within (1-eps).

    Returns:
        OPT (exact) or a value in [(1-eps) OPT, OPT]; 0 for a DAG without edges
    """
    if dag.size == 0:
        return 0
    table = colorful_subtree_table(dag, eps)
    best = max(x for x in table.ravel().tolist() if is_finite(x))
    logger.info(f"Max colorful subtree over {dag.size} vertices, k={dag.k}: {best}")
    return normalize(best)
