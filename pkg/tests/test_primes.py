import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubicgauss.primes import (
    factor_int,
    is_prime,
    primes_1_mod_3,
    primes_upto,
    primitive_root,
    segmented_sieve,
    simple_sieve,
    sqrt_mod,
)
from oracles import is_prime_int


def test_sieve_matches_trial_division():
    ref = [n for n in range(2000) if is_prime_int(n)]
    assert simple_sieve(1999).tolist() == ref
    assert primes_upto(1999).tolist() == ref


def test_segmented_sieve_window():
    lo, hi = 10**6, 10**6 + 5000
    got = segmented_sieve(lo, hi, segment=777).tolist()
    assert got == [n for n in range(lo + 1, hi + 1) if is_prime(n)]


def test_primes_1_mod_3_small():
    assert primes_1_mod_3(0, 50).tolist() == [7, 13, 19, 31, 37, 43]


def test_count_below_a_million():
    # pi(10^6; 3, 1) = 39231
    assert primes_1_mod_3(0, 10**6).shape[0] == 39231


@given(st.integers(2, 10**6))
def test_is_prime_agrees_with_trial(n):
    assert is_prime(n) == is_prime_int(n)


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime((2**31 - 1) * (2**29 - 3))


@given(st.integers(2, 10**15))
def test_factor_int_reassembles(n):
    f = factor_int(n)
    prod = 1
    for p, e in f.items():
        assert is_prime(p)
        prod *= p**e
    assert prod == n


def test_factor_int_pollard_range():
    n = 1000003 * 1000033
    assert factor_int(n) == {1000003: 1, 1000033: 1}


@pytest.mark.parametrize("p", [7, 13, 97, 10007, 999979])
def test_sqrt_mod(p):
    for a in (-3, 2, 5):
        if pow(a % p, (p - 1) // 2, p) != 1:
            continue
        r = sqrt_mod(a, p)
        assert (r * r - a) % p == 0


@pytest.mark.parametrize("p", [7, 13, 19, 1009])
def test_primitive_root(p):
    g = primitive_root(p)
    assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1


def test_sieve_dtype():
    assert primes_upto(100).dtype == np.int64
