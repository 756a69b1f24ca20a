"""Rational-integer number theory used underneath the Z[omega] layer.

Sieving, primality, factorisation of norms, modular square roots and
primitive roots. Everything here works on plain Python ints or numpy int64
arrays.
"""

from __future__ import annotations

import math
import random
from functools import lru_cache

import numpy as np

TRIAL_LIMIT = 10**6
_RHO_SEED = 0x5EED
_SPF_LIMIT = 2 * 10**6


def simple_sieve(limit: int) -> np.ndarray:
    """Primes <= limit by a plain Eratosthenes sieve."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def segmented_sieve(lo: int, hi: int, segment: int = 1 << 20) -> np.ndarray:
    """Primes p with lo < p <= hi, sieved in segments of ``segment`` integers."""
    if hi <= max(lo, 1):
        return np.array([], dtype=np.int64)
    base = simple_sieve(math.isqrt(hi) + 1)
    out = []
    start = max(lo + 1, 2)
    while start <= hi:
        stop = min(start + segment, hi + 1)  # exclusive
        mask = np.ones(stop - start, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= stop:
                break
            first = max(p * p, ((start + p - 1) // p) * p)
            mask[first - start :: p] = False
        out.append(start + np.flatnonzero(mask))
        start = stop
    return np.concatenate(out).astype(np.int64) if out else np.array([], dtype=np.int64)


def primes_upto(hi: int) -> np.ndarray:
    return segmented_sieve(0, hi)


def primes_1_mod_3(lo: int, hi: int) -> np.ndarray:
    """Rational primes p = 1 (mod 3) with lo < p <= hi."""
    ps = segmented_sieve(lo, hi)
    return ps[ps % 3 == 1]


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=1)
def _spf_table() -> np.ndarray:
    spf = np.zeros(_SPF_LIMIT + 1, dtype=np.int32)
    for p in simple_sieve(math.isqrt(_SPF_LIMIT) + 1):
        p = int(p)
        block = spf[p * p :: p]
        block[block == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    return spf


def _pollard_rho(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        c = rng.randrange(1, n)
        y = rng.randrange(0, n)
        m, g, r, q = 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factor_int(n: int) -> dict[int, int]:
    """Prime factorisation of a positive integer as {prime: exponent}.

    Small n use a smallest-prime-factor table; otherwise trial division to
    ``TRIAL_LIMIT`` followed by Pollard rho with a fixed seed.
    """
    if n < 1:
        raise ValueError(f"factor_int needs n >= 1, got {n}")
    out: dict[int, int] = {}
    if n <= _SPF_LIMIT:
        spf = _spf_table()
        while n > 1:
            p = int(spf[n])
            while n % p == 0:
                n //= p
                out[p] = out.get(p, 0) + 1
        return out
    for p in (2, 3, 5):
        while n % p == 0:
            n //= p
            out[p] = out.get(p, 0) + 1
    # wheel mod 6
    p, step = 7, 4
    while p <= TRIAL_LIMIT and p * p <= n:
        while n % p == 0:
            n //= p
            out[p] = out.get(p, 0) + 1
        p += step
        step = 6 - step
    if n == 1:
        return dict(sorted(out.items()))
    rng = random.Random(_RHO_SEED)
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        if math.isqrt(m) ** 2 == m:
            r = math.isqrt(m)
            stack.extend([r, r])
            continue
        d = _pollard_rho(m, rng)
        stack.extend([d, m // d])
    return dict(sorted(out.items()))


def sqrt_mod(a: int, p: int) -> int:
    """A square root of a modulo an odd prime p (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        raise ValueError(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def primitive_root(p: int) -> int:
    """Smallest primitive root modulo the prime p."""
    if p == 2:
        return 1
    qs = list(factor_int(p - 1))
    g = 2
    while True:
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
        g += 1
