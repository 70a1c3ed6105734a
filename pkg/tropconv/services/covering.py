"""
Coverings

Families of set-function pairs (f_l, g_l) whose pointwise max approximates
f(T) + g(U) from one side.

Sum-to-max: A + B <= min_l max{A_l, B_l} <= (1+eps)(A + B) for every finite pair.
Distant: every member has max{A_l, B_l} >= (1-2eps)(A + B), and when
A/B lies outside [eps, 1/eps] some member has max{A_l, B_l} <= A + B.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List, Tuple

from tropconv.exceptions import DomainError
from tropconv.services.numerics import as_fraction, floor_log2, power_of_two
from tropconv.services.setfunction import INF, SetFunction, is_finite

# Configure logging
logger = logging.getLogger(__name__)

SUM_TO_MAX = "sumToMax"
DISTANT = "distant"


@dataclass
class CoveringFamily:
    """
    Paired set functions produced by a covering construction.

    Attributes:
        pairs (List[Tuple[SetFunction, SetFunction]]): Members (f_l, g_l)
        kind (str): "sumToMax" or "distant"
        epsilon (Fraction): Accuracy the family was built for
    """

    pairs: List[Tuple[SetFunction, SetFunction]] = field(default_factory=list)
    kind: str = SUM_TO_MAX
    epsilon: Fraction = Fraction(1, 2)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def _check_inputs(f: SetFunction, g: SetFunction, eps: Any) -> Fraction:
    f.check_same_order(g)
    f.require_nonnegative("f")
    g.require_nonnegative("g")
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"Covering accuracy must be positive, got {eps}")
    return eps


def _buckets(values: List[Any], eps: Fraction) -> List[Any]:
    """
    Greedy (1+eps)-buckets over sorted distinct values; returns each bucket's maximum.

    Zero is its own bucket. Every value v lies in a bucket whose maximum is
    at most (1+eps)*v.
    """
    tops: List[Any] = []
    distinct = sorted(set(values))
    i = 0
    if distinct and distinct[0] == 0:
        tops.append(0)
        i = 1
    while i < len(distinct):
        limit = as_fraction(distinct[i]) * (1 + eps)
        j = i
        while j + 1 < len(distinct) and distinct[j + 1] <= limit:
            j += 1
        tops.append(distinct[j])
        i = j + 1
    return tops


def sum_to_max_covering(f: SetFunction, g: SetFunction, eps: Any) -> CoveringFamily:
    """
    Build a sum-to-max covering of (f, g).

    One side is bucketed into (1+eps)-geometric classes with tops v; member v
    shifts the other side by v and keeps only the entries of the bucketed side
    that are at most v (as 0). The side with fewer buckets is the one bucketed.

    Args:
        f: Nonnegative set function, inf allowed
        g: Nonnegative set function of the same order
        eps: Positive accuracy

    Returns:
        CoveringFamily: kind "sumToMax"
    """
    eps = _check_inputs(f, g, eps)
    f_tops = _buckets(f.finite_values(), eps)
    g_tops = _buckets(g.finite_values(), eps)
    bucket_g = len(g_tops) <= len(f_tops)
    shifted, bucketed = (f, g) if bucket_g else (g, f)
    tops = g_tops if bucket_g else f_tops

    family = CoveringFamily(kind=SUM_TO_MAX, epsilon=eps)
    if not f.finite_values() or not g.finite_values():
        return family
    for v in tops:
        plus = shifted.map(lambda x: x + v if is_finite(x) else x)
        gate = bucketed.map(lambda x: 0 if is_finite(x) and x <= v else INF)
        family.pairs.append((plus, gate) if bucket_g else (gate, plus))
    logger.debug(f"Sum-to-max covering: {len(family)} members (eps={eps})")
    return family


def _distant_levels(values: List[Any], eps: Fraction) -> range:
    """Power-of-two levels l needed so every distant pair has a witnessing member."""
    positive = [v for v in values if v > 0]
    if not positive:
        return range(0)
    needed = set()
    for v in positive:
        needed.add(floor_log2(v) + 1)
        needed.add(floor_log2(as_fraction(v) * 2 * eps))
    return range(min(needed), max(needed) + 1)


def distant_covering(f: SetFunction, g: SetFunction, eps: Any) -> CoveringFamily:
    """
    Build a distant covering of (f, g).

    For each level l, member (f_l, g_l) keeps f(T) >= 2^l / (2eps) and g(U) < 2^l;
    the role-swapped member keeps g(U) >= 2^l / (2eps) and f(T) < 2^l.
    Members with an empty side are skipped.
    """
    eps = _check_inputs(f, g, eps)
    family = CoveringFamily(kind=DISTANT, epsilon=eps)
    levels = _distant_levels(f.finite_values() + g.finite_values(), eps)
    for level in levels:
        low = power_of_two(level)
        high = low / (2 * eps)
        for large, small, swapped in ((f, g, False), (g, f, True)):
            big = large.map(lambda x: x if is_finite(x) and x >= high else INF)
            little = small.map(lambda x: x if is_finite(x) and x < low else INF)
            if not big.finite_mask().any() or not little.finite_mask().any():
                continue
            family.pairs.append((little, big) if swapped else (big, little))
    logger.debug(f"Distant covering: {len(family)} members over {len(levels)} levels (eps={eps})")
    return family


def covering_bounds(family: CoveringFamily, i: int, j: int) -> Any:
    """min over members of max{f_l(i), g_l(j)} for one coordinate pair."""
    best: Any = INF
    for fl, gl in family.pairs:
        best = min(best, max(fl[i], gl[j]))
    return best
