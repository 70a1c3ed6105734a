"""
Verification Service

Checks of algorithm outputs against the naive oracle and of covering
families against their defining inequalities. Everything here compares
exact values; ratios are reported as floats for display only.
"""

import logging
from fractions import Fraction
from typing import Any, List, Optional, Tuple

from tropconv.models.reports import VerificationReport
from tropconv.services.covering import CoveringFamily, covering_bounds
from tropconv.services.numerics import as_fraction
from tropconv.services.setfunction import SetFunction, is_finite, iter_submasks

# Configure logging
logger = logging.getLogger(__name__)

DISTANT = "distant"
CLOSE = "close"


def exact_report(algorithm: str, semiring: str, output: SetFunction,
                 oracle: SetFunction) -> VerificationReport:
    """Every entry must equal the oracle."""
    output.check_same_order(oracle)
    violations = [s for s, (a, b) in enumerate(zip(output.tolist(), oracle.tolist())) if a != b]
    return VerificationReport(algorithm=algorithm, semiring=semiring, n=output.n,
                              exact=True, violations=violations)


def _ratio(approx: Any, exact: Any) -> Optional[float]:
    if not is_finite(exact) or not is_finite(approx) or exact == 0:
        return None
    return float(as_fraction(approx) / as_fraction(exact))


def ratio_report(algorithm: str, semiring: str, output: SetFunction, oracle: SetFunction,
                 eps: Any, maximize: bool = False,
                 only: Optional[List[int]] = None) -> VerificationReport:
    """
    Check h <= out <= (1+eps) h (min-sum) or (1-eps) h <= out <= h (max-sum) at every S.

    Infinite oracle entries require the same infinity. With `only`, the upper
    (or, for max-sum, lower) bound is enforced on those sets alone while
    soundness is still checked everywhere.
    """
    output.check_same_order(oracle)
    eps = Fraction(eps)
    enforced = set(range(len(oracle))) if only is None else set(only)
    violations: List[int] = []
    ratios: List[float] = []
    for s, (a, h) in enumerate(zip(output.tolist(), oracle.tolist())):
        if not is_finite(h):
            if a != h:
                violations.append(s)
            continue
        if not is_finite(a):
            # +inf never undercuts a min-sum optimum, -inf never exceeds a max-sum one
            sound = (a > 0) != maximize
            if not sound or s in enforced:
                violations.append(s)
            continue
        a_exact, h_exact = as_fraction(a), as_fraction(h)
        if maximize:
            sound = a_exact <= h_exact
            tight = a_exact >= (1 - eps) * h_exact
        else:
            sound = a_exact >= h_exact
            tight = a_exact <= (1 + eps) * h_exact
        if not sound or (s in enforced and not tight):
            violations.append(s)
        r = _ratio(a, h)
        if r is not None:
            ratios.append(r)
    return VerificationReport(
        algorithm=algorithm,
        semiring=semiring,
        n=output.n,
        epsilon=str(eps),
        exact=False,
        max_ratio=max(ratios) if ratios else None,
        min_ratio=min(ratios) if ratios else None,
        violations=violations,
    )


# Split certification

def optimal_splits(f: SetFunction, g: SetFunction, s: int) -> List[Tuple[int, Any, Any]]:
    """All T ⊆ S attaining min f(T) + g(S\\T), as (T, f(T), g(S\\T))."""
    best: Any = None
    found: List[Tuple[int, Any, Any]] = []
    for t in iter_submasks(s):
        a, b = f[t], g[s ^ t]
        if not (is_finite(a) and is_finite(b)):
            continue
        total = a + b
        if best is None or total < best:
            best, found = total, [(t, a, b)]
        elif total == best:
            found.append((t, a, b))
    return found


def split_kind(a: Any, b: Any, eps: Any) -> str:
    """"close" when a/b lies in [eps/4, 4/eps] (0/0 counts as close), else "distant"."""
    eps = Fraction(eps)
    a, b = as_fraction(a), as_fraction(b)
    if a == 0 and b == 0:
        return CLOSE
    if a == 0 or b == 0:
        return DISTANT
    ratio = a / b
    return CLOSE if eps / 4 <= ratio <= 4 / eps else DISTANT


def certified_sets(f: SetFunction, g: SetFunction, eps: Any, kind: str) -> List[int]:
    """Sets with some optimal split of the given kind."""
    out = []
    for s in range(len(f)):
        if any(split_kind(a, b, eps) == kind for _, a, b in optimal_splits(f, g, s)):
            out.append(s)
    return out


# Covering properties

def sum_to_max_violations(family: CoveringFamily, f: SetFunction,
                          g: SetFunction) -> List[Tuple[int, int]]:
    """Pairs (i, j) of finite entries where A+B <= min max <= (1+eps)(A+B) fails."""
    eps = family.epsilon
    bad = []
    for i, a in enumerate(f.tolist()):
        if not is_finite(a):
            continue
        for j, b in enumerate(g.tolist()):
            if not is_finite(b):
                continue
            total = as_fraction(a) + as_fraction(b)
            covered = covering_bounds(family, i, j)
            if not is_finite(covered) or not total <= covered <= (1 + eps) * total:
                bad.append((i, j))
    return bad


def distant_violations(family: CoveringFamily, f: SetFunction,
                       g: SetFunction) -> List[Tuple[int, int]]:
    """
    Pairs violating either distant-covering property.

    (i) every member: max{A_l[i], B_l[j]} >= (1-2eps)(A[i]+B[j]);
    (ii) if A[i]/B[j] is outside [eps, 1/eps], some member has max <= A[i]+B[j].
    """
    eps = family.epsilon
    bad = []
    for i, a in enumerate(f.tolist()):
        if not is_finite(a):
            continue
        for j, b in enumerate(g.tolist()):
            if not is_finite(b):
                continue
            total = as_fraction(a) + as_fraction(b)
            floor_ok = all(max(fl[i], gl[j]) >= (1 - 2 * eps) * total for fl, gl in family)
            a_, b_ = as_fraction(a), as_fraction(b)
            distant = (a_ > 0 or b_ > 0) and (b_ == 0 or a_ == 0
                                             or not eps <= a_ / b_ <= 1 / eps)
            witness_ok = not distant or covering_bounds(family, i, j) <= total
            if not (floor_ok and witness_ok):
                bad.append((i, j))
    return bad
