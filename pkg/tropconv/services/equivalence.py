"""
Equivalence Reductions

Exact min-max subset convolution through any (1+eps)-approximate min-sum
solver: values are replaced by their ranks r, lifted to t^r with
t = ceil(4(1+eps)^2), convolved approximately, and decoded by floor(log_t).
Decoding is exact because t^h(S) <= h'(S) <= t^(h(S)+1/2) at every S, which
verify_claim1 checks with exact integer arithmetic.

The reverse direction (approximate min-sum from exact min-max) is
approx_minsum_simple in tropconv.services.approx.
"""

import logging
import math
from fractions import Fraction
from typing import Any

from tropconv.exceptions import IntegrityError
from tropconv.models.params import as_params
from tropconv.models.reports import DecodingBoundEntry, DecodingBoundReport
from tropconv.services.approx import MinSumSolver, approx_minsum_simple
from tropconv.services.minmax import minmax_convolution
from tropconv.services.numerics import ApproxFloat, RankTable, as_fraction, floor_log
from tropconv.services.setfunction import INF, SetFunction, as_exact_int, is_finite

# Configure logging
logger = logging.getLogger(__name__)


def lift_base(eps: Any) -> int:
    """t = ceil(4 (1+eps)^2)."""
    eps = as_params(eps).epsilon
    return math.ceil(4 * (1 + eps) ** 2)


def lift(fn: SetFunction, base: int) -> SetFunction:
    """S -> base^fn(S) as ApproxFloat; inf stays inf."""
    return fn.map(lambda r: ApproxFloat.from_power(base, as_exact_int(r)) if is_finite(r) else INF)


def verify_claim1(f: SetFunction, g: SetFunction, eps: Any, h_prime: SetFunction) -> DecodingBoundReport:
    """
    Check t^h(S) <= h'(S) <= t^(h(S)+1/2) at every S, with h the exact min-max of (f, g).

    f and g hold the integer exponents (ranks). An infinite h(S) requires an
    infinite h'(S). The upper bound is tested as h'(S)^2 <= t^(2h(S)+1).

    Returns:
        DecodingBoundReport: One entry per S
    """
    f.check_same_order(h_prime)
    base = lift_base(eps)
    h = minmax_convolution(f, g)
    report = DecodingBoundReport(base=base, epsilon=str(as_params(eps).epsilon))
    for mask, (exact, approx) in enumerate(zip(h.tolist(), h_prime.tolist())):
        if not is_finite(exact):
            ok = not is_finite(approx)
            report.entries.append(DecodingBoundEntry(
                mask=mask, h=None, h_prime=str(approx), lower_ok=ok, upper_ok=True,
            ))
            continue
        r = as_exact_int(exact)
        if not is_finite(approx):
            report.entries.append(DecodingBoundEntry(
                mask=mask, h=r, h_prime=str(approx), lower_ok=True, upper_ok=False,
            ))
            continue
        value = as_fraction(approx)
        lower = Fraction(base) ** r
        report.entries.append(DecodingBoundEntry(
            mask=mask,
            h=r,
            h_prime=str(value),
            lower_ok=lower <= value,
            upper_ok=value * value <= Fraction(base) ** (2 * r + 1),
        ))
    failed = report.failures()
    if failed:
        logger.warning(f"Decoding bounds failed at {len(failed)} of {len(report.entries)} sets")
    return report


def minmax_via_approx_minsum(f: SetFunction, g: SetFunction, eps: Any,
                             solver: MinSumSolver = approx_minsum_simple,
                             verify: bool = True) -> SetFunction:
    """
    Exact min-max convolution computed with an approximate min-sum solver.

    Args:
        f: Left operand (any totally ordered finite values, inf allowed)
        g: Right operand
        eps: Accuracy handed to the solver
        solver: (1+eps)-approximate min-sum operation
        verify: Check the decoding bounds and raise on violation

    Returns:
        SetFunction: min_{T⊆S} max{f(T), g(S\\T)}

    Raises:
        IntegrityError: If the solver broke its (1+eps) contract
    """
    f.check_same_order(g)
    params = as_params(eps)
    table = RankTable.from_functions(f, g)
    f_rank, g_rank = table.encode(f), table.encode(g)
    base = lift_base(params)
    logger.info(f"Lifting {len(table)} ranks to powers of t={base}")
    h_prime = solver(lift(f_rank, base), lift(g_rank, base), params)

    if verify:
        report = verify_claim1(f_rank, g_rank, params, h_prime)
        if not report.passed:
            masks = [e.mask for e in report.failures()]
            raise IntegrityError(
                "Approximate min-sum solver violated its guarantee",
                detail=f"failing sets: {masks[:16]}",
            )

    return decode_lifted(h_prime, table, base)


def decode_lifted(h_prime: SetFunction, table: RankTable, base: int) -> SetFunction:
    """floor(log_base h'(S)) mapped back through the rank table; inf stays inf."""

    def decode(value: Any) -> Any:
        if not is_finite(value):
            return INF
        rank = floor_log(value, base) if value >= 1 else -1
        if not 0 <= rank < len(table):
            raise IntegrityError(f"Solver output {value} decodes outside the rank table")
        return table.value(rank)

    return h_prime.map(decode)
