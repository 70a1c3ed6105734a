"""
Lattice Core

Subset-lattice transforms and exact convolutions:
naive semiring convolution (the ground-truth oracle), zeta / Moebius
transforms, fast sum-product convolution through ranked transforms, and
bounded min-sum / max-sum convolution through the polynomial embedding.

All ring arithmetic runs on int64 arrays. When a magnitude bound proves
plain int64 arithmetic exact it is used directly; otherwise arithmetic is
done modulo the Mersenne prime 2^61 - 1, which is exact as long as the true
result is below the modulus (zero-detection in the polynomial engine only
needs counts, which are at most 2^n).
"""

import logging
from typing import Tuple

import numpy as np

from tropconv.exceptions import ArithmeticOverflowError, DomainError
from tropconv.services.setfunction import (
    INF,
    NEG_INF,
    Semiring,
    SetFunction,
    as_exact_int,
    is_finite,
    popcounts,
    subset_pairs,
)

# Configure logging
logger = logging.getLogger(__name__)

MODULUS = (1 << 61) - 1
PLAIN_LIMIT = 1 << 62
_MASK31 = (1 << 31) - 1
_MASK30 = (1 << 30) - 1
# FFT rounding stays exact while the error bound is below 2^48 * 2^-53
_FFT_SAFE = 1 << 48
# complex entries per FFT block
_FFT_BLOCK = 1 << 22


# Naive oracle

def naive_convolution(f: SetFunction, g: SetFunction, sr: Semiring) -> SetFunction:
    """
    Evaluate h(S) = ⊕_{T⊆S} f(T) ⊗ g(S\\T) by enumerating all 3^n submask pairs.

    Args:
        f: Left operand
        g: Right operand
        sr: Semiring supplying (add, mul)

    Returns:
        SetFunction: The convolution, computed by direct definition
    """
    f.check_same_order(g)
    s, t, starts = subset_pairs(f.n)
    products = sr.mul(f.values[t], g.values[s ^ t])
    if products.dtype != object:
        products = products.astype(object)
    return SetFunction(f.n, sr.add.reduceat(products, starts))


# Modular helpers

def mulmod(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise a*b mod 2^61-1 for int64 residues in [0, 2^61-1)."""
    a_hi = a >> 31
    a_lo = a & _MASK31
    b_hi = b >> 31
    b_lo = b & _MASK31
    lo = a_lo * b_lo
    mid = a_hi * b_lo + a_lo * b_hi
    hi = a_hi * b_hi
    # 2^61 ≡ 1, so a*b = hi*2^62 + mid*2^31 + lo folds into four terms
    r = (lo & MODULUS) + (lo >> 61) + ((mid & _MASK30) << 31) + (mid >> 30) + (hi << 1)
    r = (r & MODULUS) + (r >> 61)
    return np.where(r >= MODULUS, r - MODULUS, r)


def addmod(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    r = a + b
    return np.where(r >= MODULUS, r - MODULUS, r)


def _sweep(a: np.ndarray, n: int, inverse: bool, modular: bool) -> None:
    """In-place zeta (or Moebius) sweep along the last axis, one dimension at a time."""
    lead = a.shape[:-1]
    for i in range(n):
        view = a.reshape(lead + (-1, 2, 1 << i))
        low = view[..., 0, :]
        high = view[..., 1, :]
        if not modular:
            if inverse:
                high -= low
            else:
                high += low
        elif inverse:
            high[...] = np.mod(high - low, MODULUS)
        else:
            high[...] = addmod(high, low)


# Transforms

def _exact_table(f: SetFunction) -> np.ndarray:
    out = np.empty(len(f), dtype=object)
    for mask, v in enumerate(f.values.tolist()):
        out[mask] = as_exact_int(v)
    return out


def _transform(f: SetFunction, inverse: bool) -> SetFunction:
    table = _exact_table(f)
    bound = max((abs(v) for v in table.tolist()), default=0) << f.n
    if bound >= PLAIN_LIMIT:
        raise ArithmeticOverflowError(
            f"Transform magnitudes up to {bound} exceed the exact int64 regime"
        )
    a = table.astype(np.int64)
    _sweep(a, f.n, inverse=inverse, modular=False)
    return SetFunction(f.n, [int(v) for v in a.tolist()])


def zeta_transform(f: SetFunction) -> SetFunction:
    """(ζf)(S) = Σ_{T⊆S} f(T) over exact integers."""
    return _transform(f, inverse=False)


def moebius_transform(f: SetFunction) -> SetFunction:
    """Inverse of zeta_transform."""
    return _transform(f, inverse=True)


# Fast sum-product convolution

def _ranked(a: np.ndarray, n: int) -> np.ndarray:
    ranked = np.zeros((n + 1, 1 << n), dtype=np.int64)
    ranked[popcounts(n), np.arange(1 << n)] = a
    return ranked


def convolve_int64(a: np.ndarray, b: np.ndarray, n: int, modular: bool) -> np.ndarray:
    """
    Sum-product subset convolution of nonnegative int64 tables.

    In plain mode the caller guarantees every intermediate stays below 2^62;
    in modular mode inputs must be residues and the result is mod 2^61-1.
    """
    pc = popcounts(n)
    fa = _ranked(a, n)
    gb = _ranked(b, n)
    _sweep(fa, n, inverse=False, modular=modular)
    _sweep(gb, n, inverse=False, modular=modular)
    h = np.zeros_like(fa)
    for r in range(n + 1):
        acc = h[r]
        for i in range(r + 1):
            if modular:
                acc = addmod(acc, mulmod(fa[i], gb[r - i]))
            else:
                acc = acc + fa[i] * gb[r - i]
        h[r] = acc
    _sweep(h, n, inverse=True, modular=modular)
    return h[pc, np.arange(1 << n)]


def plain_is_exact(n: int, max_a: int, max_b: int, terms: int = 1) -> bool:
    """Whether (n+1) * terms * 8^n * max_a * max_b stays below 2^62."""
    return (n + 1) * terms * (max_a * max_b) << (3 * n) < PLAIN_LIMIT


def fast_sumproduct_convolution(f: SetFunction, g: SetFunction) -> SetFunction:
    """
    Exact sum-product subset convolution in O(2^n n^2) ring operations.

    Inputs must be nonnegative integers. The result is exact whenever every
    output value is below 2^61 - 1; larger results raise instead of wrapping.
    """
    f.check_same_order(g)
    n = f.n
    fa = _exact_table(f)
    gb = _exact_table(g)
    max_a = max(fa.tolist(), default=0)
    max_b = max(gb.tolist(), default=0)
    if min(fa.tolist()) < 0 or min(gb.tolist()) < 0:
        raise DomainError("fast_sumproduct_convolution expects nonnegative integers")
    if max(max_a, max_b) >= MODULUS:
        raise ArithmeticOverflowError(
            f"Input magnitude {max(max_a, max_b)} exceeds the exact modulus"
        )
    if (max_a * max_b) << n >= MODULUS:
        raise ArithmeticOverflowError(
            f"Sum-product results may reach {(max_a * max_b) << n}, beyond the exact modulus"
        )
    modular = not plain_is_exact(n, max_a, max_b)
    logger.debug(f"Fast sum-product convolution n={n} modular={modular}")
    out = convolve_int64(fa.astype(np.int64), gb.astype(np.int64), n, modular)
    return SetFunction(n, [int(v) for v in out.tolist()])


def boolean_convolve_masks(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """OR-AND subset convolution of boolean arrays; True where some split has a(T) and b(S\\T)."""
    if not a.any() or not b.any():
        return np.zeros(1 << n, dtype=bool)
    modular = not plain_is_exact(n, 1, 1)
    out = convolve_int64(a.astype(np.int64), b.astype(np.int64), n, modular)
    return out != 0


# Bounded min-sum / max-sum

def _encode_degrees(values: np.ndarray, finite: np.ndarray, offset: int, depth: int,
                    n: int) -> np.ndarray:
    """(rank, degree, mask) indicator tensor: x^(v - offset) at rank |S|, zero polynomial for inf."""
    poly = np.zeros((n + 1, depth, 1 << n), dtype=np.int64)
    masks = np.flatnonzero(finite)
    poly[popcounts(n)[masks], values[masks] - offset, masks] = 1
    return poly


def fft_is_exact(fp: np.ndarray, gp: np.ndarray, n: int, length: int) -> bool:
    """
    Whether float64 FFT products of the transformed tensors round back to the exact counts.

    Each rank of the product sums at most n+1 degree convolutions whose
    rounding error is below max|f| * max|g| * L * log2(L) * 2^-53 up to a small
    constant; the bound is kept under 2^-5.
    """
    nfft = _fft_length(length)
    bound = (n + 1) * int(fp.max(initial=0)) * int(gp.max(initial=0)) * nfft * nfft.bit_length()
    return bound < _FFT_SAFE


def _fft_length(length: int) -> int:
    return 1 << max(0, (length - 1).bit_length())


def _rank_product_fft(fp: np.ndarray, gp: np.ndarray, r: int, length: int) -> np.ndarray:
    """Degree polynomial of rank r, sum over i of fp[i] * gp[r-i], for every mask (float64 FFT)."""
    size = fp.shape[2]
    nfft = _fft_length(length)
    block = max(1, min(size, _FFT_BLOCK // ((r + 1) * (nfft // 2 + 1))))
    h = np.empty((length, size), dtype=np.int64)
    for start in range(0, size, block):
        cols = slice(start, start + block)
        fhat = np.fft.rfft(fp[: r + 1, :, cols], n=nfft, axis=1)
        ghat = np.fft.rfft(gp[r::-1, :, cols], n=nfft, axis=1)
        prod = np.fft.irfft((fhat * ghat).sum(axis=0), n=nfft, axis=0)
        h[:, cols] = np.rint(prod[:length]).astype(np.int64)
    return h


def _rank_product_exact(fp: np.ndarray, gp: np.ndarray, r: int, length: int,
                        modular: bool) -> np.ndarray:
    """Integer counterpart of _rank_product_fft (plain int64 or mod 2^61-1)."""
    g_depth = gp.shape[1]
    h = np.zeros((length, fp.shape[2]), dtype=np.int64)
    for i in range(r + 1):
        right = gp[r - i]
        for a in np.flatnonzero(fp[i].any(axis=1)).tolist():
            window = h[a:a + g_depth]
            if modular:
                window[...] = addmod(window, mulmod(fp[i, a][None, :], right))
            else:
                window += fp[i, a] * right
    return h


def bounded_tropical_int64(fa: np.ndarray, f_finite: np.ndarray, gb: np.ndarray,
                           g_finite: np.ndarray, n: int,
                           maximize: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """
    Exact min-sum (or max-sum) subset convolution of integer tables via the polynomial embedding.

    Values are shifted by their minimum so polynomial degrees span only the
    finite value range. For every output rank r the whole degree polynomial
    is built at once, Moebius-inverted, and read at the sets of size r: the
    lowest (or highest) nonzero degree is the optimum.

    Returns:
        Tuple of (values, finite): int64 results and the mask of feasible S
    """
    size = 1 << n
    out = np.zeros(size, dtype=np.int64)
    resolved = np.zeros(size, dtype=bool)
    feasible = boolean_convolve_masks(f_finite, g_finite, n)
    if not feasible.any():
        return out, resolved

    f_lo = int(fa[f_finite].min())
    g_lo = int(gb[g_finite].min())
    f_depth = int(fa[f_finite].max()) - f_lo + 1
    g_depth = int(gb[g_finite].max()) - g_lo + 1
    fp = _encode_degrees(fa, f_finite, f_lo, f_depth, n)
    gp = _encode_degrees(gb, g_finite, g_lo, g_depth, n)

    modular = not plain_is_exact(n, 1, 1, terms=min(f_depth, g_depth))
    _sweep(fp, n, inverse=False, modular=modular)
    _sweep(gp, n, inverse=False, modular=modular)

    length = f_depth + g_depth - 1
    use_fft = not modular and fft_is_exact(fp, gp, n, length)
    logger.debug(
        f"Bounded {'max' if maximize else 'min'}-sum n={n} degrees={length} "
        f"modular={modular} fft={use_fft}"
    )
    pc = popcounts(n)
    for r in range(n + 1):
        targets = np.flatnonzero((pc == r) & feasible)
        if not len(targets):
            continue
        if use_fft:
            h = _rank_product_fft(fp, gp, r, length)
        else:
            h = _rank_product_exact(fp, gp, r, length, modular)
        _sweep(h, n, inverse=True, modular=modular)
        nonzero = h[:, targets] != 0
        if maximize:
            degree = length - 1 - nonzero[::-1].argmax(axis=0)
        else:
            degree = nonzero.argmax(axis=0)
        out[targets] = degree + f_lo + g_lo
        resolved[targets] = True
    return out, resolved


def _bounded_inputs(f: SetFunction, bound: int, infeasible) -> Tuple[np.ndarray, np.ndarray]:
    values = np.zeros(len(f), dtype=np.int64)
    finite = np.zeros(len(f), dtype=bool)
    for mask, v in enumerate(f.values.tolist()):
        if v == infeasible:
            continue
        if not is_finite(v):
            raise DomainError(f"Value {v} at {mask} is not allowed here")
        x = as_exact_int(v)
        if x < 0 or x > bound:
            raise DomainError(f"Value {x} at {mask} lies outside [0, {bound}]")
        values[mask] = x
        finite[mask] = True
    return values, finite


def _check_bound(bound: int) -> int:
    if not isinstance(bound, (int, np.integer)) or bound < 0:
        raise DomainError(f"Value bound M must be a nonnegative integer, got {bound!r}")
    return int(bound)


def bounded_minsum_convolution(f: SetFunction, g: SetFunction, bound: int) -> SetFunction:
    """
    Exact min-sum subset convolution for integer values in [0, M] (inf allowed).

    Args:
        f: Left operand
        g: Right operand
        bound: The value cap M

    Returns:
        SetFunction: min_{T⊆S} f(T) + g(S\\T), inf where no split is finite
    """
    f.check_same_order(g)
    bound = _check_bound(bound)
    fa, ff = _bounded_inputs(f, bound, INF)
    gb, gf = _bounded_inputs(g, bound, INF)
    out, ok = bounded_tropical_int64(fa, ff, gb, gf, f.n, maximize=False)
    return SetFunction.from_int64(f.n, out, ok, fill=INF)


def bounded_maxsum_convolution(f: SetFunction, g: SetFunction, bound: int) -> SetFunction:
    """Exact max-sum counterpart of bounded_minsum_convolution; -inf marks infeasible entries."""
    f.check_same_order(g)
    bound = _check_bound(bound)
    fa, ff = _bounded_inputs(f, bound, NEG_INF)
    gb, gf = _bounded_inputs(g, bound, NEG_INF)
    out, ok = bounded_tropical_int64(fa, ff, gb, gf, f.n, maximize=True)
    return SetFunction.from_int64(f.n, out, ok, fill=NEG_INF)
