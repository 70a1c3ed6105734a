import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_fn
from tropconv.exceptions import ArithmeticOverflowError, DimensionError, DomainError
from tropconv.services.lattice import (
    MODULUS,
    bounded_maxsum_convolution,
    bounded_minsum_convolution,
    fast_sumproduct_convolution,
    fft_is_exact,
    moebius_transform,
    mulmod,
    naive_convolution,
    zeta_transform,
)
from tropconv.services.setfunction import (
    BOOLEAN,
    INF,
    MAX_SUM,
    MIN_MAX,
    MIN_SUM,
    NEG_INF,
    SUM_PRODUCT,
    SetFunction,
)


def test_naive_minsum_identity():
    f = SetFunction(1, [0, INF])
    g = SetFunction(1, [5, 7])
    assert naive_convolution(f, g, MIN_SUM).tolist() == [5, 7]


def test_naive_sumproduct_counts_splits():
    ones = SetFunction(2, [1, 1, 1, 1])
    assert naive_convolution(ones, ones, SUM_PRODUCT).tolist() == [1, 2, 2, 4]


def test_naive_minmax():
    f = SetFunction(1, [1, 5])
    g = SetFunction(1, [2, 3])
    assert naive_convolution(f, g, MIN_MAX).tolist() == [2, 3]


def test_naive_rejects_mismatched_orders():
    with pytest.raises(DimensionError):
        naive_convolution(SetFunction(1, [0, 0]), SetFunction(2, [0] * 4), MIN_SUM)


@pytest.mark.parametrize("sr", [MIN_SUM, MAX_SUM, MIN_MAX, SUM_PRODUCT, BOOLEAN])
def test_identity_element_per_semiring(sr):
    g = random_fn(3, bound=1 if sr is BOOLEAN else 9, seed=4)
    assert naive_convolution(sr.identity(3), g, sr) == g


def test_zeta_example():
    assert zeta_transform(SetFunction(2, [1, 2, 3, 4])).tolist() == [1, 3, 4, 10]


def test_zeta_order_zero():
    assert zeta_transform(SetFunction(0, [7])).tolist() == [7]


@given(st.integers(min_value=0, max_value=10), st.integers(min_value=0, max_value=2 ** 32))
@settings(max_examples=40, deadline=None)
def test_moebius_inverts_zeta(n, seed):
    rng = np.random.default_rng(seed)
    f = SetFunction(n, rng.integers(-1000, 1000, size=1 << n).tolist())
    assert moebius_transform(zeta_transform(f)) == f


def test_transform_overflow_is_reported():
    with pytest.raises(ArithmeticOverflowError):
        zeta_transform(SetFunction(2, [2 ** 61, 0, 0, 0]))


def test_mulmod_matches_python():
    rng = np.random.default_rng(1)
    a = rng.integers(0, MODULUS, size=200, dtype=np.int64)
    b = rng.integers(0, MODULUS, size=200, dtype=np.int64)
    expected = [(int(x) * int(y)) % MODULUS for x, y in zip(a.tolist(), b.tolist())]
    assert mulmod(a, b).tolist() == expected


def test_fast_sumproduct_example_and_identity():
    ones = SetFunction(2, [1, 1, 1, 1])
    assert fast_sumproduct_convolution(ones, ones).tolist() == [1, 2, 2, 4]
    g = random_fn(4, bound=100, seed=2)
    assert fast_sumproduct_convolution(SUM_PRODUCT.identity(4), g) == g


@pytest.mark.parametrize("n", range(0, 9))
def test_fast_sumproduct_matches_naive(n):
    for seed in range(5):
        f = random_fn(n, bound=1000, seed=seed)
        g = random_fn(n, bound=1000, seed=seed + 100)
        assert fast_sumproduct_convolution(f, g) == naive_convolution(f, g, SUM_PRODUCT)


def test_fast_sumproduct_modular_path_is_exact():
    # 8^n * M^2 leaves the plain int64 regime while every result stays below the modulus
    n = 6
    f = random_fn(n, bound=2 ** 22, seed=3)
    g = random_fn(n, bound=2 ** 22, seed=4)
    assert fast_sumproduct_convolution(f, g) == naive_convolution(f, g, SUM_PRODUCT)


def test_fast_sumproduct_domain_and_overflow():
    with pytest.raises(DomainError):
        fast_sumproduct_convolution(SetFunction(1, [1, -1]), SetFunction(1, [1, 1]))
    with pytest.raises(ArithmeticOverflowError):
        fast_sumproduct_convolution(SetFunction(1, [2 ** 40, 1]), SetFunction(1, [2 ** 40, 1]))


def test_bounded_minsum_example():
    f = SetFunction(1, [0, 3])
    g = SetFunction(1, [0, 2])
    assert bounded_minsum_convolution(f, g, 3).tolist() == [0, 2]


def test_bounded_minsum_all_infinite():
    f = SetFunction.constant(3, INF)
    g = random_fn(3, seed=1)
    assert bounded_minsum_convolution(f, g, 16).tolist() == [INF] * 8


@pytest.mark.parametrize("n", range(1, 9))
def test_bounded_minsum_matches_naive(n):
    for seed in range(5):
        f = random_fn(n, bound=16, inf_frac=0.3, seed=seed)
        g = random_fn(n, bound=16, inf_frac=0.3, seed=seed + 50)
        assert bounded_minsum_convolution(f, g, 16) == naive_convolution(f, g, MIN_SUM)


@pytest.mark.parametrize("n", range(1, 8))
def test_bounded_maxsum_matches_naive(n):
    for seed in range(5):
        f = random_fn(n, bound=16, seed=seed).map(lambda v: v if v % 5 else NEG_INF)
        g = random_fn(n, bound=16, seed=seed + 9).map(lambda v: v if v % 7 else NEG_INF)
        assert bounded_maxsum_convolution(f, g, 16) == naive_convolution(f, g, MAX_SUM)


def test_bounded_minsum_domain():
    with pytest.raises(DomainError):
        bounded_minsum_convolution(SetFunction(1, [0, 5]), SetFunction(1, [0, 0]), 4)
    with pytest.raises(DomainError):
        bounded_minsum_convolution(SetFunction(1, [0, 1]), SetFunction(1, [0, 0]), -1)


@pytest.fixture(params=["fft", "integer", "modular", "small-blocks"])
def bounded_kernel(request, monkeypatch):
    import tropconv.services.lattice as lattice

    if request.param == "integer":
        monkeypatch.setattr(lattice, "_FFT_SAFE", 0)
    elif request.param == "modular":
        monkeypatch.setattr(lattice, "plain_is_exact", lambda *args, **kwargs: False)
    elif request.param == "small-blocks":
        monkeypatch.setattr(lattice, "_FFT_BLOCK", 64)
    return request.param


@pytest.mark.parametrize("n", [1, 4, 7])
def test_bounded_kernels_agree_with_naive(bounded_kernel, n):
    f = random_fn(n, bound=300, inf_frac=0.2, seed=n)
    g = random_fn(n, bound=40, inf_frac=0.2, seed=n + 1)
    assert bounded_minsum_convolution(f, g, 300) == naive_convolution(f, g, MIN_SUM)
    f = f.map(lambda v: NEG_INF if v == INF else v)
    g = g.map(lambda v: NEG_INF if v == INF else v)
    assert bounded_maxsum_convolution(f, g, 300) == naive_convolution(f, g, MAX_SUM)


def test_fft_guard_rejects_huge_counts():
    small = np.ones((3, 4, 4), dtype=np.int64)
    assert fft_is_exact(small, small, 2, 7)
    huge = np.full((3, 4, 4), 1 << 30, dtype=np.int64)
    assert not fft_is_exact(huge, huge, 2, 7)


def test_bounded_wide_value_range_at_n8():
    f = random_fn(8, bound=800, inf_frac=0.1, seed=31)
    g = random_fn(8, bound=800, inf_frac=0.1, seed=32)
    assert bounded_minsum_convolution(f, g, 800) == naive_convolution(f, g, MIN_SUM)


orders = st.integers(min_value=0, max_value=8)
seeds = st.integers(min_value=0, max_value=2 ** 32)


def semiring_fn(sr, n, seed):
    if sr is SUM_PRODUCT:
        return random_fn(n, bound=9, seed=seed)
    return random_fn(n, bound=50, inf_frac=0.2, seed=seed)


@pytest.mark.parametrize("sr", [MIN_SUM, MIN_MAX, SUM_PRODUCT])
@given(orders, seeds)
@settings(max_examples=20, deadline=None)
def test_naive_is_commutative(sr, n, seed):
    f, g = semiring_fn(sr, n, seed), semiring_fn(sr, n, seed + 1)
    assert naive_convolution(f, g, sr) == naive_convolution(g, f, sr)


@pytest.mark.parametrize("sr", [MIN_SUM, MIN_MAX, SUM_PRODUCT])
@given(orders, seeds)
@settings(max_examples=10, deadline=None)
def test_naive_is_associative(sr, n, seed):
    f, g, h = (semiring_fn(sr, n, seed + i) for i in range(3))
    left = naive_convolution(naive_convolution(f, g, sr), h, sr)
    right = naive_convolution(f, naive_convolution(g, h, sr), sr)
    assert left == right


@given(orders, seeds)
@settings(max_examples=30, deadline=None)
def test_naive_minsum_is_monotone(n, seed):
    f = random_fn(n, bound=50, inf_frac=0.2, seed=seed)
    g = random_fn(n, bound=50, inf_frac=0.2, seed=seed + 1)
    rng = np.random.default_rng(seed)
    bumps = rng.integers(0, 20, size=1 << n).tolist()
    raised = SetFunction(n, [INF if b == 19 else v + b for v, b in zip(f.tolist(), bumps)])
    low = naive_convolution(f, g, MIN_SUM).tolist()
    high = naive_convolution(raised, g, MIN_SUM).tolist()
    assert all(a <= b for a, b in zip(low, high))
