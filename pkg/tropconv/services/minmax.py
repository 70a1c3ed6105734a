"""
Min-Max Convolution

Exact min-max subset convolution h(S) = min_{T⊆S} max{f(T), g(S\\T)} by the
chunked sorted-list algorithm: all 2^(n+1) entries of f and g are sorted, the
list is cut into chunks, and after each chunk a boolean subset convolution of
the thresholded indicators tells which S became feasible. Each S is finalized
by a local scan over the entries of the chunk that first made it feasible.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, List, Optional

import numpy as np

from tropconv.config import get_settings
from tropconv.exceptions import DomainError
from tropconv.models.reports import ChunkStats
from tropconv.services.lattice import boolean_convolve_masks
from tropconv.services.setfunction import INF, SetFunction, is_finite

# Configure logging
logger = logging.getLogger(__name__)

# cap on (sets x chunk entries) evaluated per vectorized scan block
_SCAN_BLOCK = 1 << 22


def boolean_subset_convolution(a: SetFunction, b: SetFunction) -> SetFunction:
    """
    OR-AND subset convolution of 0/1 set functions.

    Raises:
        DomainError: If any value is not 0 or 1
    """
    a.check_same_order(b)
    masks = []
    for name, fn in (("a", a), ("b", b)):
        values = fn.values.tolist()
        if any(v not in (0, 1) or isinstance(v, float) for v in values):
            raise DomainError(f"boolean_subset_convolution: {name} has non-boolean values")
        masks.append(np.array([v == 1 for v in values], dtype=bool))
    out = boolean_convolve_masks(masks[0], masks[1], a.n)
    return SetFunction(a.n, [int(v) for v in out.tolist()])


def default_chunk_size(n: int) -> int:
    factor = get_settings().chunk_factor
    return max(1, math.ceil(factor * math.sqrt(1 << (n + 1))))


@dataclass
class ChunkPlan:
    """
    Sorted list of all f- and g-entries, cut into fixed-size chunks.

    Attributes:
        n (int): Lattice order
        chunk_size (int): Entries per chunk
        values (List[Any]): Entry values in sorted order
        origins (np.ndarray): 0 for an f-entry, 1 for a g-entry
        masks (np.ndarray): Subset of each entry
        finite_count (int): Length of the finite prefix
        pos_f (np.ndarray): Sorted position of f(S), indexed by S
        pos_g (np.ndarray): Sorted position of g(S), indexed by S
    """

    n: int
    chunk_size: int
    values: List[Any]
    origins: np.ndarray
    masks: np.ndarray
    finite_count: int
    pos_f: np.ndarray
    pos_g: np.ndarray

    @classmethod
    def build(cls, f: SetFunction, g: SetFunction, chunk_size: int) -> "ChunkPlan":
        size = len(f)
        raw = f.values.tolist() + g.values.tolist()
        # ties broken by (origin, mask); inf sorts after every finite value
        order = sorted(range(2 * size), key=lambda k: (raw[k], k // size, k % size))
        order_arr = np.array(order, dtype=np.int64)
        origins = (order_arr // size).astype(np.int8)
        masks = order_arr % size
        positions = np.empty(2 * size, dtype=np.int64)
        positions[order_arr] = np.arange(2 * size)
        values = [raw[k] for k in order]
        finite_count = sum(1 for v in values if is_finite(v))
        return cls(
            n=f.n,
            chunk_size=chunk_size,
            values=values,
            origins=origins,
            masks=masks,
            finite_count=finite_count,
            pos_f=positions[:size],
            pos_g=positions[size:],
        )

    @property
    def num_chunks(self) -> int:
        return -(-len(self.values) // self.chunk_size)

    def chunk_bounds(self, i: int):
        start = i * self.chunk_size
        return start, min(start + self.chunk_size, len(self.values))


def _scan(plan: ChunkPlan, targets: np.ndarray, start: int, end: int,
          comparisons: np.ndarray) -> np.ndarray:
    """
    Local scan: for each target S, the best split position using chunk entries U ⊆ S.

    Each entry is tried as the f-argument (paired with g(S\\U)) and as the
    g-argument (paired with f(S\\U)); the candidate is the larger sorted
    position of the pair.
    """
    chunk = plan.masks[start:end]
    f_side = plan.pos_f[chunk][None, :]
    g_side = plan.pos_g[chunk][None, :]
    best = np.empty(len(targets), dtype=np.int64)
    rows = max(1, _SCAN_BLOCK // max(1, len(chunk)))
    for lo in range(0, len(targets), rows):
        sets = targets[lo:lo + rows][:, None]
        inside = (chunk[None, :] & ~sets) == 0
        rest = sets ^ chunk[None, :]
        as_f = np.maximum(f_side, plan.pos_g[rest])
        as_g = np.maximum(g_side, plan.pos_f[rest])
        candidates = np.where(inside, np.minimum(as_f, as_g), np.iinfo(np.int64).max)
        best[lo:lo + rows] = candidates.min(axis=1)
        comparisons[targets[lo:lo + rows]] += 2 * inside.sum(axis=1)
    return best


def minmax_convolution(f: SetFunction, g: SetFunction, chunk_size: Optional[int] = None,
                       stats: Optional[ChunkStats] = None) -> SetFunction:
    """
    Exact min-max subset convolution.

    Args:
        f: Left operand (any totally ordered values, inf allowed)
        g: Right operand
        chunk_size: Entries per chunk (default ceil(chunk_factor * sqrt(2^(n+1))))
        stats: Optional instrumentation record, filled in place

    Returns:
        SetFunction: min_{T⊆S} max{f(T), g(S\\T)}
    """
    f.check_same_order(g)
    n = f.n
    size = 1 << n
    if chunk_size is None:
        chunk_size = default_chunk_size(n)
    if chunk_size < 1:
        raise DomainError(f"Chunk size must be positive, got {chunk_size}")
    plan = ChunkPlan.build(f, g, chunk_size)

    resolved = np.zeros(size, dtype=bool)
    best_pos = np.full(size, -1, dtype=np.int64)
    counts = np.zeros(size, dtype=np.int64)
    comparisons = np.zeros(size, dtype=np.int64)
    f_below = np.zeros(size, dtype=bool)
    g_below = np.zeros(size, dtype=bool)
    chunks_total = -(-plan.finite_count // chunk_size)
    swept = 0
    convolutions = 0

    for i in range(chunks_total):
        start, end = plan.chunk_bounds(i)
        end = min(end, plan.finite_count)
        # indicators [f <= max C_i], [g <= max C_i] by sorted position
        taken = plan.masks[start:end]
        from_g = plan.origins[start:end] == 1
        f_below[taken[~from_g]] = True
        g_below[taken[from_g]] = True
        swept += 1
        convolutions += 1
        feasible = boolean_convolve_masks(f_below, g_below, n)
        fresh = np.flatnonzero(feasible & ~resolved)
        if len(fresh):
            best_pos[fresh] = _scan(plan, fresh, start, end, comparisons)
            resolved[fresh] = True
            counts[fresh] += 1
            logger.debug(f"Chunk {i}: resolved {len(fresh)} sets")
        if resolved.all():
            break

    if stats is not None:
        stats.chunk_size = chunk_size
        stats.chunks_total = chunks_total
        stats.chunks_swept = swept
        stats.boolean_convolutions = convolutions
        stats.resolution_counts = counts.tolist()
        stats.comparisons = comparisons.tolist()

    values = [plan.values[p] if ok else INF for p, ok in zip(best_pos.tolist(), resolved.tolist())]
    return SetFunction(n, values)
