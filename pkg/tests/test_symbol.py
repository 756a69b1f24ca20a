import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubicgauss.eisenstein import EI, LAMBDA, OMEGA, enumerate_primary, factor, gcd, split_rational_prime
from cubicgauss.symbol import (
    CubicValue,
    cubic_symbol,
    supplement_exponents,
    symbol_by_factoring,
    symbol_euler_prime,
    symbol_exponent,
)
from oracles import symbol_inert, symbol_split

pi7 = EI(1, 3)
coef = st.integers(-3000, 3000)
elems = st.builds(EI, coef, coef)
primary = st.builds(lambda i, j: EI(1 + 3 * i, 3 * j), st.integers(-300, 300), st.integers(-300, 300))


def _oracle(a, pi):
    if pi.b == 0:
        return symbol_inert(a.a, a.b, -pi.a)
    return symbol_split(a.a, a.b, pi.a, pi.b)


def _oracle_composite(a, b):
    k = 0
    for pi, e in factor(b).factors:
        kp = _oracle(a, pi)
        if kp is None:
            return None
        k += e * kp
    return k % 3


def test_cubic_value_group():
    vals = [CubicValue.ONE, CubicValue.OMEGA, CubicValue.OMEGA_SQ]
    for v in vals:
        assert v**3 is CubicValue.ONE
        assert v * v.conj() is CubicValue.ONE
    assert CubicValue.OMEGA * CubicValue.OMEGA is CubicValue.OMEGA_SQ
    assert CubicValue.ZERO * CubicValue.OMEGA is CubicValue.ZERO
    assert str(CubicValue.OMEGA_SQ) == "ω²"
    assert complex(CubicValue.OMEGA) ** 3 == pytest.approx(1)


def test_euler_examples():
    assert symbol_euler_prime(2, pi7) is CubicValue.OMEGA_SQ
    assert symbol_euler_prime(pi7 * EI(5, 2), pi7) is CubicValue.ZERO
    assert symbol_euler_prime(EI(2, 5) ** 3, pi7) is CubicValue.ONE
    with pytest.raises(ValueError):
        symbol_euler_prime(2, EI(4, 0) * EI(1, 3))
    with pytest.raises(ValueError):
        symbol_euler_prime(2, EI(2, 3))


def test_fast_symbol_examples():
    assert cubic_symbol(OMEGA, 7) is CubicValue.OMEGA
    assert cubic_symbol(LAMBDA, 7) is CubicValue.ONE
    for a in (EI(5, 9), EI(-7, 2), LAMBDA):
        assert cubic_symbol(a, 1) is CubicValue.ONE
    assert cubic_symbol(2, pi7) is CubicValue.OMEGA_SQ
    with pytest.raises(ValueError):
        cubic_symbol(2, EI(2, 3))


def test_supplement_examples():
    assert supplement_exponents(7) == (1, 0)
    assert supplement_exponents(1) == (0, 0)


def test_supplement_laws_on_primes():
    rng = random.Random(1)
    primes = list(enumerate_primary(3, 5000, "prime"))
    for d in rng.sample(primes, 50):
        a2, a3 = supplement_exponents(d)
        assert symbol_euler_prime(OMEGA, d) is CubicValue.from_exponent(a2)
        assert symbol_euler_prime(LAMBDA, d) is CubicValue.from_exponent(-a3)


@given(elems, primary)
def test_fast_equals_oracle(a, b):
    k = _oracle_composite(a, b)
    got = cubic_symbol(a, b)
    assert got.exponent == k
    assert got == symbol_by_factoring(a, b)


@given(primary, primary)
def test_reciprocity(a, b):
    assert cubic_symbol(a, b) == cubic_symbol(b, a)


@given(elems, elems, primary)
def test_multiplicative_in_numerator(a1, a2, b):
    assert cubic_symbol(a1 * a2, b) == cubic_symbol(a1, b) * cubic_symbol(a2, b)


@given(elems, primary, primary)
def test_multiplicative_in_denominator(a, b1, b2):
    assert cubic_symbol(a, b1 * b2) == cubic_symbol(a, b1) * cubic_symbol(a, b2)


@given(elems, primary, elems)
def test_periodic(a, b, t):
    assert cubic_symbol(a, b) == cubic_symbol(a + t * b, b)


@given(elems, primary)
def test_zero_iff_not_coprime(a, b):
    zero = cubic_symbol(a, b) is CubicValue.ZERO
    assert zero == (gcd(a, b).norm() != 1 if a else b.norm() != 1)


def test_tuple_entry_point():
    assert symbol_exponent((2, 0), (1, 3)) == 2
    assert symbol_exponent((7, 0), (1, 3)) is None


def test_both_primes_above_seven():
    p, pb = split_rational_prime(7)
    assert (cubic_symbol(LAMBDA, p) * cubic_symbol(LAMBDA, pb)) is CubicValue.ONE
