"""
Set Functions on the Subset Lattice

This module holds the data model shared by every convolution engine:
subset indices (bitmasks), extended values with infinities, dense set
functions, and the semirings the naive oracle evaluates over.

Values are plain Python numbers (int, Fraction, ApproxFloat) kept in numpy
object arrays; +inf is math.inf and -inf is -math.inf.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from tropconv.exceptions import DimensionError, DomainError

# Configure logging
logger = logging.getLogger(__name__)

MAX_ORDER = 30
INF = math.inf
NEG_INF = -math.inf

# int64 stand-in for +inf inside exact engines; never enters ring arithmetic
INF_SENTINEL = np.iinfo(np.int64).max


def is_finite(value: Any) -> bool:
    """True unless value is +inf or -inf (works for every value flavor)."""
    return not (value == INF or value == NEG_INF)


def is_integral(value: Any) -> bool:
    """True for finite values with an exact integer value."""
    if isinstance(value, (bool, np.bool_)):
        return True
    if isinstance(value, (int, np.integer)):
        return True
    if isinstance(value, Fraction):
        return value.denominator == 1
    if hasattr(value, "to_fraction") and is_finite(value):
        return value.to_fraction().denominator == 1
    return False


def as_exact_int(value: Any) -> int:
    """Convert an integral value to a Python int (raises DomainError otherwise)."""
    if not is_finite(value) or not is_integral(value):
        raise DomainError(f"Expected a finite integer value, got {value!r}")
    if hasattr(value, "to_fraction"):
        return int(value.to_fraction())
    return int(value)


# Subset indices

def check_order(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise DimensionError(f"Lattice order must be a nonnegative integer, got {n!r}")
    if n > MAX_ORDER:
        raise DimensionError(f"Lattice order {n} exceeds the supported maximum {MAX_ORDER}")


def mask_of(elements: Iterable[int]) -> int:
    """Bitmask of a set of 1-based ground-set elements (element i -> bit i-1)."""
    mask = 0
    for element in elements:
        if element < 1:
            raise DomainError(f"Ground-set elements are 1-based, got {element}")
        mask |= 1 << (element - 1)
    return mask


def iter_submasks(mask: int) -> Iterable[int]:
    """All submasks of mask, largest first, ending with 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@lru_cache(maxsize=None)
def popcounts(n: int) -> np.ndarray:
    """|S| for every S in [0, 2^n), built by doubling."""
    pc = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        half = 1 << b
        pc[half:2 * half] = pc[:half] + 1
    pc.setflags(write=False)
    return pc


@lru_cache(maxsize=2)
def subset_pairs(n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Every pair (S, T) with T ⊆ S, grouped by S in ascending order.

    Returns:
        Tuple of (S, T, starts): the 3^n pairs and the offset of each S-group,
        ready for ufunc.reduceat.
    """
    s = np.zeros(1, dtype=np.int64)
    t = np.zeros(1, dtype=np.int64)
    for b in range(n):
        bit = 1 << b
        s = np.concatenate([s, s | bit, s | bit])
        t = np.concatenate([t, t, t | bit])
    order = np.argsort(s, kind="stable")
    s = s[order]
    t = t[order]
    starts = np.flatnonzero(np.r_[True, s[1:] != s[:-1]])
    for arr in (s, t, starts):
        arr.setflags(write=False)
    return s, t, starts


# Set functions

class SetFunction:
    """
    Dense table of 2^n extended values indexed by subset bitmask.

    Attributes:
        n (int): Lattice order
        values (np.ndarray): Object array of length 2^n
    """

    __slots__ = ("n", "values")

    def __init__(self, n: int, values: Sequence[Any]):
        check_order(n)
        arr = np.empty(1 << n, dtype=object)
        seq = list(values) if not isinstance(values, np.ndarray) else values
        if len(seq) != 1 << n:
            raise DimensionError(
                f"A set function of order {n} needs {1 << n} values, got {len(seq)}"
            )
        arr[:] = seq
        self.n = int(n)
        self.values = arr

    # Constructors

    @classmethod
    def from_values(cls, values: Sequence[Any]) -> "SetFunction":
        size = len(values)
        if size == 0 or size & (size - 1):
            raise DimensionError(f"Table length must be a power of two, got {size}")
        return cls(size.bit_length() - 1, values)

    @classmethod
    def constant(cls, n: int, value: Any) -> "SetFunction":
        check_order(n)
        return cls(n, [value] * (1 << n))

    @classmethod
    def delta(cls, n: int, one: Any = 0, zero: Any = INF) -> "SetFunction":
        """Identity element: `one` at the empty set, `zero` elsewhere."""
        check_order(n)
        values = [zero] * (1 << n)
        values[0] = one
        return cls(n, values)

    @classmethod
    def from_int64(cls, n: int, arr: np.ndarray, finite: Optional[np.ndarray] = None,
                   fill: Any = INF) -> "SetFunction":
        """Wrap an int64 table; entries outside `finite` (or equal to the sentinel) become `fill`."""
        if finite is None:
            finite = arr != INF_SENTINEL
        values = [int(v) if ok else fill for v, ok in zip(arr.tolist(), finite.tolist())]
        return cls(n, values)

    # Container protocol

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, mask: int) -> Any:
        return self.values[mask]

    def __iter__(self):
        return iter(self.values.tolist())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetFunction):
            return NotImplemented
        return self.n == other.n and all(a == b for a, b in zip(self.values, other.values))

    def __repr__(self) -> str:
        shown = ", ".join(str(v) for v in self.values[:8].tolist())
        more = ", ..." if len(self.values) > 8 else ""
        return f"SetFunction(n={self.n}, values=[{shown}{more}])"

    def tolist(self) -> List[Any]:
        return self.values.tolist()

    # Inspection

    def finite_mask(self) -> np.ndarray:
        return np.fromiter((is_finite(v) for v in self.values), dtype=bool, count=len(self.values))

    def finite_values(self) -> List[Any]:
        return [v for v in self.values.tolist() if is_finite(v)]

    def max_finite(self) -> Optional[Any]:
        vals = self.finite_values()
        return max(vals) if vals else None

    def is_integral(self) -> bool:
        return all(is_integral(v) for v in self.finite_values())

    def require_nonnegative(self, name: str = "f") -> None:
        for mask, v in enumerate(self.values.tolist()):
            if v == NEG_INF or (is_finite(v) and v < 0):
                raise DomainError(f"{name}({mask}) = {v} is negative")

    def check_same_order(self, other: "SetFunction") -> None:
        if self.n != other.n:
            raise DimensionError(f"Lattice orders differ: {self.n} vs {other.n}")

    # Pointwise operations

    def map(self, fn: Callable[[Any], Any]) -> "SetFunction":
        return SetFunction(self.n, [fn(v) for v in self.values.tolist()])

    def pointwise_min(self, other: "SetFunction") -> "SetFunction":
        self.check_same_order(other)
        return SetFunction(self.n, np.minimum(self.values, other.values))



def pointwise_min_all(functions: Sequence[SetFunction], n: int) -> SetFunction:
    """Pointwise minimum of a list of set functions (all +inf if the list is empty)."""
    acc = np.full(1 << n, INF, dtype=object)
    for fn in functions:
        if fn.n != n:
            raise DimensionError(f"Lattice orders differ: {fn.n} vs {n}")
        acc = np.minimum(acc, fn.values)
    return SetFunction(n, acc)


# Semirings

@dataclass(frozen=True)
class Semiring:
    """
    Operator pair (add, mul) with identities, evaluated as numpy ufuncs.

    Attributes:
        name (str): Identifier used by the CLI
        add (np.ufunc): Aggregation over splits
        mul (np.ufunc): Combination of the two halves of a split
        zero (Any): Identity of add (absorbing for mul)
        one (Any): Identity of mul
    """

    name: str
    add: np.ufunc
    mul: np.ufunc
    zero: Any
    one: Any

    def identity(self, n: int) -> SetFunction:
        return SetFunction.delta(n, one=self.one, zero=self.zero)


MIN_SUM = Semiring("minsum", np.minimum, np.add, INF, 0)
MAX_SUM = Semiring("maxsum", np.maximum, np.add, NEG_INF, 0)
MIN_MAX = Semiring("minmax", np.minimum, np.maximum, INF, 0)
SUM_PRODUCT = Semiring("sumprod", np.add, np.multiply, 0, 1)
BOOLEAN = Semiring("boolean", np.bitwise_or, np.bitwise_and, 0, 1)

SEMIRINGS = {sr.name: sr for sr in (MIN_SUM, MAX_SUM, MIN_MAX, SUM_PRODUCT, BOOLEAN)}


def get_semiring(name: str) -> Semiring:
    try:
        return SEMIRINGS[name]
    except KeyError:
        raise DomainError(f"Unknown semiring '{name}'; expected one of {sorted(SEMIRINGS)}")
