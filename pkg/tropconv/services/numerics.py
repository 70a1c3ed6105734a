"""
Numerics

Wide-exponent floating values and rank tables.

ApproxFloat stores value = mantissa * 2^(exponent - 63) with a normalized
64-bit mantissa (top bit set unless zero) and an exponent bounded by 2^63 in
magnitude. Every inexact operation rounds toward +inf, so a computed value
never under-estimates the exact one. Comparison is exact.
"""

import logging
import math
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Tuple, Union

from tropconv.exceptions import ArithmeticOverflowError, DomainError

# Configure logging
logger = logging.getLogger(__name__)

MANTISSA_BITS = 64
EXPONENT_LIMIT = 1 << 63
_TOP = 1 << (MANTISSA_BITS - 1)
_FULL = 1 << MANTISSA_BITS
# additions whose exponents differ by more than this only nudge the larger operand
_GAP_SHORTCUT = 2 * MANTISSA_BITS + 2

Rational = Union[int, Fraction]


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _round_up(num: int, den: int, exp2: int) -> Tuple[int, int]:
    """Normalized (mantissa, exponent) of the least representable value >= num/den * 2^exp2."""
    if num == 0:
        return 0, 0
    # choose s with num * 2^s / den in [2^63, 2^64)
    s = (MANTISSA_BITS - 1) - (num.bit_length() - den.bit_length())
    while True:
        if s >= 0:
            q, r = divmod(num << s, den)
        else:
            q, r = divmod(num, den << -s)
        if q < _TOP:
            s += 1
        elif q >= _FULL:
            s -= 1
        else:
            break
    mantissa = q + (1 if r else 0)
    if mantissa == _FULL:
        mantissa = _TOP
        s -= 1
    # value = mantissa * 2^(exp2 - s) = mantissa * 2^(exponent - 63)
    exponent = exp2 - s + (MANTISSA_BITS - 1)
    if abs(exponent) >= EXPONENT_LIMIT:
        raise ArithmeticOverflowError(f"ApproxFloat exponent {exponent} out of range")
    return mantissa, exponent


class ApproxFloat:
    """
    Nonnegative wide-exponent float with an infinity flag.

    Instances are immutable. Mixed arithmetic with int, Fraction and
    math.inf is supported; results involving math.inf are math.inf.
    """

    __slots__ = ("mantissa", "exponent", "infinite")

    def __init__(self, mantissa: int = 0, exponent: int = 0, infinite: bool = False):
        if infinite:
            mantissa, exponent = 0, 0
        elif mantissa < 0:
            raise DomainError("ApproxFloat values are nonnegative")
        elif mantissa and not (_TOP <= mantissa < _FULL):
            mantissa, exponent = _round_up(mantissa, 1, exponent - (MANTISSA_BITS - 1))
        elif mantissa == 0:
            exponent = 0
        object.__setattr__(self, "mantissa", mantissa)
        object.__setattr__(self, "exponent", exponent)
        object.__setattr__(self, "infinite", infinite)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("ApproxFloat is immutable")

    # Construction

    @classmethod
    def infinity(cls) -> "ApproxFloat":
        return cls(infinite=True)

    @classmethod
    def from_rational(cls, value: Any) -> "ApproxFloat":
        """Round a nonnegative int / Fraction up to the nearest ApproxFloat."""
        if isinstance(value, ApproxFloat):
            return value
        if value == math.inf:
            return cls.infinity()
        frac = Fraction(value)
        if frac < 0:
            raise DomainError(f"ApproxFloat values are nonnegative, got {value}")
        m, e = _round_up(frac.numerator, frac.denominator, 0)
        return cls(m, e)

    @classmethod
    def from_power(cls, base: int, power: int) -> "ApproxFloat":
        """base^power rounded up; exact whenever the odd part of base^power fits 64 bits."""
        if base <= 0:
            raise DomainError(f"Power base must be positive, got {base}")
        if power >= 0:
            m, e = _round_up(base ** power, 1, 0)
        else:
            m, e = _round_up(1, base ** (-power), 0)
        return cls(m, e)

    # Conversion

    def to_fraction(self) -> Fraction:
        if self.infinite:
            raise DomainError("Infinite ApproxFloat has no rational value")
        shift = self.exponent - (MANTISSA_BITS - 1)
        if shift >= 0:
            return Fraction(self.mantissa << shift)
        return Fraction(self.mantissa, 1 << (-shift))

    def __float__(self) -> float:
        if self.infinite:
            return math.inf
        try:
            return math.ldexp(float(self.mantissa), self.exponent - (MANTISSA_BITS - 1))
        except OverflowError:
            return math.inf

    def __repr__(self) -> str:
        if self.infinite:
            return "ApproxFloat(inf)"
        return f"ApproxFloat({self.mantissa}*2^{self.exponent - (MANTISSA_BITS - 1)})"

    def __str__(self) -> str:
        return "inf" if self.infinite else repr(float(self))

    # Comparison

    def _cmp(self, other: Any) -> int:
        if isinstance(other, ApproxFloat):
            if self.infinite or other.infinite:
                return int(self.infinite) - int(other.infinite)
            if self.mantissa == 0 or other.mantissa == 0:
                return (self.mantissa > 0) - (other.mantissa > 0)
            if self.exponent != other.exponent:
                return 1 if self.exponent > other.exponent else -1
            return (self.mantissa > other.mantissa) - (self.mantissa < other.mantissa)
        if isinstance(other, float) and math.isinf(other):
            if self.infinite:
                return 1 if other < 0 else 0
            return -1 if other > 0 else 1
        if self.infinite:
            return 1
        a = self.to_fraction()
        b = Fraction(other)
        return (a > b) - (a < b)

    def __eq__(self, other: object) -> bool:
        try:
            return self._cmp(other) == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other: Any) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: Any) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: Any) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: Any) -> bool:
        return self._cmp(other) >= 0

    def __hash__(self) -> int:
        return hash(math.inf) if self.infinite else hash(self.to_fraction())

    # Arithmetic

    def __add__(self, other: Any) -> Any:
        if isinstance(other, float) and math.isinf(other):
            return other
        if self.infinite:
            return self
        if isinstance(other, ApproxFloat):
            if other.infinite:
                return other
            return self._add_dyadic(other)
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        frac = self.to_fraction() + other
        m, e = _round_up(frac.numerator, frac.denominator, 0)
        return ApproxFloat(m, e)

    __radd__ = __add__

    def _add_dyadic(self, other: "ApproxFloat") -> "ApproxFloat":
        a, b = (self, other) if self.exponent >= other.exponent else (other, self)
        if b.mantissa == 0:
            return a
        if a.mantissa == 0:
            return b
        gap = a.exponent - b.exponent
        if gap > _GAP_SHORTCUT:
            # the smaller operand only moves the result to the next representable value
            m = a.mantissa + 1
            e = a.exponent
            if m == _FULL:
                m, e = _TOP, e + 1
            return ApproxFloat(m, e)
        num = (a.mantissa << gap) + b.mantissa
        m, e = _round_up(num, 1, b.exponent - (MANTISSA_BITS - 1))
        return ApproxFloat(m, e)

    def __mul__(self, other: Any) -> Any:
        if isinstance(other, float) and math.isinf(other):
            return other
        if self.infinite:
            return self
        if isinstance(other, ApproxFloat):
            if other.infinite:
                return other
            m, e = _round_up(self.mantissa * other.mantissa, 1,
                             self.exponent + other.exponent - 2 * (MANTISSA_BITS - 1))
            return ApproxFloat(m, e)
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        frac = Fraction(other)
        if frac < 0:
            raise DomainError("ApproxFloat values are nonnegative")
        m, e = _round_up(self.mantissa * frac.numerator, frac.denominator,
                         self.exponent - (MANTISSA_BITS - 1))
        return ApproxFloat(m, e)

    __rmul__ = __mul__

    def floor_log(self, base: int) -> int:
        """Largest k with base^k <= self (exact)."""
        if self.infinite or self.mantissa == 0:
            raise DomainError(f"floor_log needs a positive finite value, got {self!r}")
        return floor_log(self, base)


# Exact logarithms on int / Fraction / ApproxFloat

def as_fraction(value: Any) -> Fraction:
    if isinstance(value, ApproxFloat):
        return value.to_fraction()
    return Fraction(value)


def power_of_two(k: int) -> Rational:
    return 1 << k if k >= 0 else Fraction(1, 1 << (-k))


def floor_log2(value: Any) -> int:
    """Largest k with 2^k <= value, for positive finite values."""
    if isinstance(value, ApproxFloat):
        if value.infinite or value.mantissa == 0:
            raise DomainError(f"floor_log2 needs a positive finite value, got {value!r}")
        return value.exponent
    frac = Fraction(value)
    if frac <= 0:
        raise DomainError(f"floor_log2 needs a positive value, got {value}")
    k = frac.numerator.bit_length() - frac.denominator.bit_length()
    if frac < power_of_two(k):
        k -= 1
    return k


def ceil_log2(value: Any) -> int:
    """Least k with value <= 2^k, for positive finite values."""
    k = floor_log2(value)
    return k if value == power_of_two(k) else k + 1


def floor_log(value: Any, base: int) -> int:
    """Largest k with base^k <= value (exact), base >= 2."""
    if base < 2:
        raise DomainError(f"Logarithm base must be at least 2, got {base}")
    frac = as_fraction(value)
    if frac <= 0:
        raise DomainError(f"floor_log needs a positive value, got {value}")
    # float estimate, corrected by exact comparisons
    log2_value = floor_log2(value)
    k = math.floor(log2_value / math.log2(base)) if log2_value else 0

    def power(j: int) -> Fraction:
        return Fraction(base ** j) if j >= 0 else Fraction(1, base ** (-j))

    while power(k) > frac:
        k -= 1
    while power(k + 1) <= frac:
        k += 1
    return k


# Rank replacement

class RankTable:
    """
    Dense 0-based ranks of the distinct finite values of one or more set functions.

    Equal values (of any numeric flavor) share a rank; infinities keep their
    value through encode/decode.
    """

    def __init__(self, values: Iterable[Any]):
        from tropconv.services.setfunction import is_finite

        distinct = sorted({v for v in values if is_finite(v)})
        self.values: List[Any] = distinct
        self._ranks: Dict[Any, int] = {v: i for i, v in enumerate(distinct)}

    @classmethod
    def from_functions(cls, *functions) -> "RankTable":
        pool: List[Any] = []
        for fn in functions:
            pool.extend(fn.finite_values())
        return cls(pool)

    def __len__(self) -> int:
        return len(self.values)

    def rank(self, value: Any) -> Any:
        from tropconv.services.setfunction import is_finite

        if not is_finite(value):
            return value
        try:
            return self._ranks[value]
        except KeyError:
            raise DomainError(f"Value {value!r} is not in the rank table")

    def value(self, rank: Any) -> Any:
        from tropconv.services.setfunction import is_finite

        if not is_finite(rank):
            return rank
        return self.values[int(rank)]

    def encode(self, fn):
        return fn.map(self.rank)

    def decode(self, fn):
        return fn.map(self.value)
