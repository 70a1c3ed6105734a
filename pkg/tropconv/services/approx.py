"""
Approximate Min-Sum Convolution

(1+eps)-approximations of the min-sum subset convolution and a (1-eps)
approximation of max-sum:

- approx_minsum_weak: scaling over a descending power-of-two schedule with an
  exact bounded min-sum per round (running time grows with log M)
- approx_minsum_simple: sum-to-max covering, then exact min-max per member
- distant_conv / close_conv: the two halves of the strongly polynomial
  algorithm, each exact up to (1+eps) on optima of its kind
- approx_minsum_strong: pointwise min of distant_conv and close_conv
- approx_maxsum: floor scaling with an exact bounded max-sum per round

All arithmetic on values is exact: scaled values are integers and outputs
are ints or Fractions. ApproxFloat inputs are converted to their exact
rational value first.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, List, Optional, Tuple

import numpy as np

from tropconv.config import get_settings
from tropconv.exceptions import DomainError
from tropconv.models.params import ApproxParams, as_params
from tropconv.services.covering import distant_covering, sum_to_max_covering
from tropconv.services.lattice import (
    boolean_convolve_masks,
    bounded_minsum_convolution,
    bounded_tropical_int64,
    naive_convolution,
)
from tropconv.services.minmax import minmax_convolution
from tropconv.services.numerics import (
    ApproxFloat,
    RankTable,
    ceil_log2,
    floor_log2,
    power_of_two,
)
from tropconv.services.parallel import parallel_map
from tropconv.services.setfunction import (
    INF,
    MAX_SUM,
    NEG_INF,
    SetFunction,
    is_finite,
    pointwise_min_all,
)

# Configure logging
logger = logging.getLogger(__name__)

ASCENDING = "ascending"
DESCENDING = "descending"


def normalize(value: Any) -> Any:
    """Collapse integral Fractions to int; leave everything else alone."""
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


def exact_view(fn: SetFunction) -> SetFunction:
    """Replace ApproxFloat entries by their exact rational value."""
    def exact(v: Any) -> Any:
        if isinstance(v, ApproxFloat):
            return INF if v.infinite else normalize(v.to_fraction())
        return v
    return fn.map(exact)


def _prepare(f: SetFunction, g: SetFunction) -> Tuple[SetFunction, SetFunction]:
    f.check_same_order(g)
    f, g = exact_view(f), exact_view(g)
    f.require_nonnegative("f")
    g.require_nonnegative("g")
    return f, g


# Scaling schedules

@dataclass
class QSchedule:
    """
    Geometric list of power-of-two scales.

    Attributes:
        q_values (List[Any]): Scales in iteration order
        direction (str): "ascending" or "descending"
        M (Any): Largest finite input value
    """

    q_values: List[Any] = field(default_factory=list)
    direction: str = DESCENDING
    M: Any = 0

    @classmethod
    def build(cls, largest: Any, least_positive: Any, direction: str) -> "QSchedule":
        """
        Powers of two from min(1, 2^floor(log2 m)) up to 2^ceil(log2 2M).

        For integer inputs this is 1, 2, ..., 2^ceil(log2 2M); rational inputs
        below 1 extend the range downward.
        """
        if largest is None or least_positive is None or largest <= 0:
            return cls(direction=direction, M=largest or 0)
        top = ceil_log2(2 * Fraction(largest))
        bottom = min(0, floor_log2(least_positive))
        exponents = list(range(bottom, top + 1))
        if direction == DESCENDING:
            exponents.reverse()
        return cls([power_of_two(k) for k in exponents], direction, largest)

    def __len__(self) -> int:
        return len(self.q_values)

    def __iter__(self):
        return iter(self.q_values)


def _extremes(f: SetFunction, g: SetFunction) -> Tuple[Any, Any]:
    values = f.finite_values() + g.finite_values()
    positive = [v for v in values if v > 0]
    return (max(values) if values else None), (min(positive) if positive else None)


# Scale procedures

def weak_cap(eps: Fraction) -> int:
    return math.ceil(4 / Fraction(eps))


def scale_weak(f: SetFunction, q: Any, eps: Any) -> SetFunction:
    """S -> ceil(2 f(S) / (eps q)) when that is at most ceil(4/eps), else inf."""
    eps = as_params(eps).strict()
    if q <= 0:
        raise DomainError(f"Scale q must be positive, got {q}")
    cap = weak_cap(eps)
    factor = Fraction(2) / (eps * Fraction(q))

    def scale(v: Any) -> Any:
        if not is_finite(v):
            return v
        scaled = math.ceil(Fraction(v) * factor)
        return scaled if scaled <= cap else INF

    return exact_view(f).map(scale)


def scale_close(f: SetFunction, q: Any, eps: Any) -> SetFunction:
    """S -> ceil(4 f(S) / (eps q)) when eps q / 16 <= f(S) <= q, else inf."""
    eps = as_params(eps).strict()
    if q <= 0:
        raise DomainError(f"Scale q must be positive, got {q}")
    q = Fraction(q)
    low = eps * q / 16
    factor = 4 / (eps * q)

    def scale(v: Any) -> Any:
        if not is_finite(v) or v < low or v > q:
            return INF
        return math.ceil(Fraction(v) * factor)

    return exact_view(f).map(scale)


def scale_floor(f: SetFunction, q: Any, eps: Any) -> SetFunction:
    """S -> floor(2 f(S) / (eps q)) when that is at most ceil(4/eps), else -inf."""
    eps = as_params(eps).strict()
    cap = weak_cap(eps)
    factor = Fraction(2) / (eps * Fraction(q))

    def scale(v: Any) -> Any:
        if not is_finite(v):
            return v
        scaled = math.floor(Fraction(v) * factor)
        return scaled if scaled <= cap else NEG_INF

    return exact_view(f).map(scale)


def _int_table(fn: SetFunction, missing: Any) -> Tuple[np.ndarray, np.ndarray]:
    finite = np.array([v != missing for v in fn.values.tolist()], dtype=bool)
    table = np.array([v if ok else 0 for v, ok in zip(fn.values.tolist(), finite.tolist())],
                     dtype=np.int64)
    return table, finite


def _rescale(out: np.ndarray, ok: np.ndarray, unit: Fraction, fill: Any) -> SetFunction:
    return SetFunction(len(out).bit_length() - 1,
                       [normalize(int(v) * unit) if good else fill
                        for v, good in zip(out.tolist(), ok.tolist())])


def _zero_pins(f: SetFunction, g: SetFunction) -> np.ndarray:
    """Sets where a split with f(T) = g(S\\T) = 0 exists."""
    fz = np.array([v == 0 for v in f.values.tolist()], dtype=bool)
    gz = np.array([v == 0 for v in g.values.tolist()], dtype=bool)
    return boolean_convolve_masks(fz, gz, f.n)


def _pin_zeros(h: SetFunction, pins: np.ndarray) -> SetFunction:
    values = h.values.copy()
    values[pins] = 0
    return SetFunction(h.n, values)


def _exact_small(f: SetFunction, g: SetFunction) -> SetFunction:
    """Exact min-sum when every finite value is zero."""
    return bounded_minsum_convolution(f, g, 0)


# Weakly polynomial scaling

def approx_minsum_weak(f: SetFunction, g: SetFunction, p: Any) -> SetFunction:
    """
    (1+eps)-approximate min-sum convolution by scaling.

    For every q of the descending schedule, both inputs are scaled with
    scale_weak, convolved exactly with values capped at ceil(4/eps), and the
    result h_q is rescaled by eps q / 2. The answer is the pointwise minimum.

    Args:
        f: Nonnegative set function (inf allowed)
        g: Nonnegative set function of the same order
        p: ApproxParams or epsilon in (0, 1)

    Returns:
        SetFunction: h <= result <= (1+eps) h
    """
    eps = as_params(p).strict()
    f, g = _prepare(f, g)
    largest, least = _extremes(f, g)
    schedule = QSchedule.build(largest, least, DESCENDING)
    if not len(schedule):
        return _exact_small(f, g)
    cap = weak_cap(eps)

    def run(q: Any) -> Optional[SetFunction]:
        fa, ff = _int_table(scale_weak(f, q, eps), INF)
        ga, gf = _int_table(scale_weak(g, q, eps), INF)
        if not ff.any() or not gf.any():
            return None
        out, ok = bounded_tropical_int64(fa, ff, ga, gf, f.n)
        return _rescale(out, ok, eps * Fraction(q) / 2, INF)

    rounds = [h for h in parallel_map(run, schedule.q_values) if h is not None]
    logger.info(f"Weak scaling: {len(rounds)} of {len(schedule)} rounds ran, cap={cap}")
    return pointwise_min_all(rounds, f.n)


# Simple strongly polynomial algorithm

def ranked_minmax(fl: SetFunction, gl: SetFunction, **kwargs) -> SetFunction:
    """Min-max convolution run on the ranks of the merged entries, mapped back afterwards."""
    table = RankTable.from_functions(fl, gl)
    h = minmax_convolution(table.encode(fl), table.encode(gl), **kwargs)
    return table.decode(h)


def approx_minsum_simple(f: SetFunction, g: SetFunction, p: Any) -> SetFunction:
    """
    (1+eps)-approximate min-sum via a sum-to-max covering and exact min-max per member.

    Accepts eps = 1.
    """
    eps = as_params(p).epsilon
    f, g = _prepare(f, g)
    family = sum_to_max_covering(f, g, eps)
    members = parallel_map(lambda pair: ranked_minmax(*pair), family.pairs)
    logger.info(f"Simple algorithm: covering of {len(family)} members")
    return pointwise_min_all(members, f.n)


# Strongly polynomial algorithm

def distant_conv(f: SetFunction, g: SetFunction, p: Any) -> SetFunction:
    """
    Min-sum estimate that is never below h and within (1+eps) of h(S)
    whenever an optimal split of S has f(T)/g(S\\T) outside [eps/4, 4/eps].
    """
    eps = as_params(p).strict()
    f, g = _prepare(f, g)
    family = distant_covering(f, g, eps / 4)
    members = parallel_map(lambda pair: ranked_minmax(*pair), family.pairs)
    scale = 1 / (1 - eps / 2)
    logger.info(f"Distant convolution: covering of {len(family)} members")
    best = pointwise_min_all(members, f.n)
    best = best.map(lambda v: normalize(v * scale) if is_finite(v) else v)
    return _pin_zeros(best, _zero_pins(f, g))


def _active_exponents(fn: SetFunction, eps: Fraction) -> set:
    """Exponents k whose window [eps 2^k / 16, 2^k] holds some finite positive value of fn."""
    active = set()
    for v in fn.finite_values():
        if v > 0:
            active.update(range(ceil_log2(v), floor_log2(16 * Fraction(v) / eps) + 1))
    return active


def _sparse_round(fa: np.ndarray, ff: np.ndarray, ga: np.ndarray,
                  gf: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Pairwise evaluation over the finite supports of both sides."""
    size = len(fa)
    sentinel = np.iinfo(np.int64).max
    out = np.full(size, sentinel, dtype=np.int64)
    left = np.flatnonzero(ff)
    right = np.flatnonzero(gf)
    disjoint = (left[:, None] & right[None, :]) == 0
    rows, cols = np.nonzero(disjoint)
    np.minimum.at(out, left[rows] | right[cols], fa[left[rows]] + ga[right[cols]])
    return out, out != sentinel


def close_conv(f: SetFunction, g: SetFunction, p: Any) -> SetFunction:
    """
    Min-sum estimate that is never below h and within (1+eps) of h(S)
    whenever an optimal split of S has f(T)/g(S\\T) inside [eps/4, 4/eps].

    Only rounds q where both sides have values in [eps q / 16, q] are run.
    Each round picks the pairwise path when alpha * beta (the finite support
    sizes) is at most sparse_factor * 2^n * ceil(4/eps), else the bounded
    polynomial convolution. Sets with a zero-zero split are pinned to 0.
    """
    eps = as_params(p).strict()
    f, g = _prepare(f, g)
    n = f.n
    largest, least = _extremes(f, g)
    schedule = QSchedule.build(largest, least, ASCENDING)
    events = _active_exponents(f, eps) & _active_exponents(g, eps)
    active = [q for q in schedule if floor_log2(q) in events]
    threshold = get_settings().sparse_factor * (1 << n) * weak_cap(eps)

    def run(q: Any) -> SetFunction:
        fa, ff = _int_table(scale_close(f, q, eps), INF)
        ga, gf = _int_table(scale_close(g, q, eps), INF)
        alpha, beta = int(ff.sum()), int(gf.sum())
        if alpha * beta <= threshold:
            out, ok = _sparse_round(fa, ff, ga, gf)
            path = "sparse"
        else:
            out, ok = bounded_tropical_int64(fa, ff, ga, gf, n)
            path = "bounded"
        logger.debug(f"Close round q={q}: alpha={alpha} beta={beta} path={path}")
        return _rescale(out, ok, eps * q / 4, INF)

    rounds = parallel_map(run, active)
    logger.info(f"Close convolution: {len(rounds)} of {len(schedule)} rounds active")
    return _pin_zeros(pointwise_min_all(rounds, n), _zero_pins(f, g))


def approx_minsum_strong(f: SetFunction, g: SetFunction, p: Any) -> SetFunction:
    """(1+eps)-approximate min-sum: pointwise min of distant_conv and close_conv."""
    params = as_params(p)
    return distant_conv(f, g, params).pointwise_min(close_conv(f, g, params))


# Max-sum

def approx_maxsum(f: SetFunction, g: SetFunction, p: Any) -> SetFunction:
    """
    (1-eps)-approximate max-sum convolution by floor scaling.

    Values are nonnegative; -inf marks infeasible entries. Entries whose
    floored value exceeds ceil(4/eps) are dropped for that round.

    Returns:
        SetFunction: (1-eps) h <= result <= h, -inf where no split is feasible
    """
    eps = as_params(p).strict()
    f.check_same_order(g)
    f, g = exact_view(f), exact_view(g)
    for name, fn in (("f", f), ("g", g)):
        for mask, v in enumerate(fn.values.tolist()):
            if v == INF or (is_finite(v) and v < 0):
                raise DomainError(f"{name}({mask}) = {v} is outside the max-sum domain")
    largest, least = _extremes(f, g)
    schedule = QSchedule.build(largest, least, DESCENDING)
    if not len(schedule):
        return naive_convolution(f, g, MAX_SUM)

    def run(q: Any) -> Optional[SetFunction]:
        fa, ff = _int_table(scale_floor(f, q, eps), NEG_INF)
        ga, gf = _int_table(scale_floor(g, q, eps), NEG_INF)
        if not ff.any() or not gf.any():
            return None
        out, ok = bounded_tropical_int64(fa, ff, ga, gf, f.n, maximize=True)
        return _rescale(out, ok, eps * Fraction(q) / 2, NEG_INF)

    rounds = [h for h in parallel_map(run, schedule.q_values) if h is not None]
    logger.info(f"Max-sum scaling: {len(rounds)} of {len(schedule)} rounds ran")
    acc = np.full(1 << f.n, NEG_INF, dtype=object)
    for h in rounds:
        acc = np.maximum(acc, h.values)
    return SetFunction(f.n, acc)


MinSumSolver = Callable[[SetFunction, SetFunction, ApproxParams], SetFunction]

SOLVERS = {
    "approx-weak": approx_minsum_weak,
    "approx-simple": approx_minsum_simple,
    "approx-strong": approx_minsum_strong,
}
