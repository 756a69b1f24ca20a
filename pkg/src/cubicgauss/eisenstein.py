"""Exact arithmetic in the Eisenstein integers Z[w], w = exp(2 pi i / 3).

Elements are ``a + b w`` with integer coordinates; ``w^2 = -1 - w``.
Coordinates are held as Python ints but bounded to the signed 128-bit range
so that anything that would overflow a fixed-width port raises instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .primes import factor_int, is_prime, segmented_sieve, sqrt_mod

COEFF_BOUND = 1 << 127
_SQRT3_2 = math.sqrt(3.0) / 2.0


def _check(v: int) -> int:
    if -COEFF_BOUND <= v < COEFF_BOUND:
        return v
    raise OverflowError(f"Eisenstein coefficient {v} outside the 128-bit range")


class EisensteinInt:
    """The element ``a + b*w`` of Z[w]."""

    __slots__ = ("a", "b")

    def __init__(self, a: int = 0, b: int = 0) -> None:
        self.a = _check(int(a))
        self.b = _check(int(b))

    @classmethod
    def coerce(cls, x: "EisensteinInt | int") -> "EisensteinInt":
        if isinstance(x, EisensteinInt):
            return x
        if isinstance(x, (int, np.integer)):
            return cls(int(x), 0)
        raise TypeError(f"cannot interpret {x!r} as an Eisenstein integer")

    @classmethod
    def parse(cls, text: str) -> "EisensteinInt":
        """Parse strings such as ``"1+3w"``, ``"-2-3w"``, ``"w"`` or ``"7"``."""
        s = text.replace(" ", "").replace("ω", "w").replace("*", "")
        if not s:
            raise ValueError("empty Eisenstein literal")
        a = b = 0
        for term in s.replace("-", "+-").split("+"):
            if not term:
                continue
            if term.endswith("w"):
                coef = term[:-1]
                b += int(coef) if coef not in ("", "-") else (-1 if coef == "-" else 1)
            else:
                a += int(term)
        return cls(a, b)

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        o = EisensteinInt.coerce(other)
        return EisensteinInt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = EisensteinInt.coerce(other)
        return EisensteinInt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return EisensteinInt.coerce(other) - self

    def __neg__(self):
        return EisensteinInt(-self.a, -self.b)

    def __mul__(self, other):
        o = EisensteinInt.coerce(other)
        a, b, c, d = self.a, self.b, o.a, o.b
        bd = b * d
        return EisensteinInt(a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not ring elements")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, np.integer)):
            return self.b == 0 and self.a == other
        if isinstance(other, EisensteinInt):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def __repr__(self) -> str:
        return f"EisensteinInt({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        bpart = {1: "w", -1: "-w"}.get(self.b, f"{self.b}w")
        if self.a == 0:
            return bpart
        return f"{self.a}{'' if bpart.startswith('-') else '+'}{bpart}"

    # -- invariants ------------------------------------------------------
    def norm(self) -> int:
        a, b = self.a, self.b
        return a * a - a * b + b * b

    def conj(self) -> "EisensteinInt":
        return EisensteinInt(self.a - self.b, -self.b)

    def trace(self) -> int:
        return 2 * self.a - self.b

    def __complex__(self) -> complex:
        return complex(self.a - 0.5 * self.b, _SQRT3_2 * self.b)

    def to_complex(self) -> complex:
        return complex(self)

    def abs(self) -> float:
        return math.sqrt(self.norm())

    def is_primary(self) -> bool:
        return self.a % 3 == 1 and self.b % 3 == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def sort_key(self) -> tuple[int, int, int]:
        return (self.norm(), self.a, self.b)


ZERO = EisensteinInt(0, 0)
ONE = EisensteinInt(1, 0)
OMEGA = EisensteinInt(0, 1)
OMEGA2 = EisensteinInt(-1, -1)
LAMBDA = EisensteinInt(1, 2)  # 1 + 2w = sqrt(-3)
UNITS = (ONE, -ONE, OMEGA, -OMEGA, OMEGA2, -OMEGA2)

EI = EisensteinInt


def unit_power(u: EisensteinInt) -> tuple[int, int]:
    """Write a unit as ``sign * w^j``; returns (sign, j)."""
    for j, w in enumerate((ONE, OMEGA, OMEGA2)):
        if u == w:
            return 1, j
        if u == -w:
            return -1, j
    raise ValueError(f"{u} is not a unit")


# -- Euclidean structure --------------------------------------------------

def _round_div(u: int, n: int) -> int:
    # nearest integer to u/n (n > 0), ties toward -inf
    return -((n - 2 * u) // (2 * n))


def divrem(x, m) -> tuple[EisensteinInt, EisensteinInt]:
    """Euclidean division: x = q*m + r with N(r) < N(m)."""
    x = EisensteinInt.coerce(x)
    m = EisensteinInt.coerce(m)
    n = m.norm()
    if n == 0:
        raise ZeroDivisionError("divrem by zero")
    num = x * m.conj()
    q = EisensteinInt(_round_div(num.a, n), _round_div(num.b, n))
    r = x - q * m
    return q, r


def exact_div(x, m) -> EisensteinInt:
    q, r = divrem(x, m)
    if r:
        raise ArithmeticError(f"{m} does not divide {x}")
    return q


def divides(m, x) -> bool:
    m = EisensteinInt.coerce(m)
    x = EisensteinInt.coerce(x)
    n = m.norm()
    if n == 0:
        return not x
    num = x * m.conj()
    return num.a % n == 0 and num.b % n == 0


def mod(x, m) -> EisensteinInt:
    return divrem(x, m)[1]


def primary_normalize(c) -> tuple[EisensteinInt, EisensteinInt]:
    """Split c (coprime to 3) as unit * primary, primary = 1 mod 3."""
    c = EisensteinInt.coerce(c)
    if not c:
        raise ValueError("zero has no primary associate")
    if c.norm() % 3 == 0:
        raise ValueError(f"{c} is divisible by lambda; no primary associate")
    for u in UNITS:
        cand = c * u.conj()  # u^{-1} = conj(u)
        if cand.is_primary():
            return u, cand
    raise AssertionError("unreachable: some associate is primary")


def strip_lambda(c) -> tuple[int, EisensteinInt]:
    """Return (k, c') with c = lambda^k c' and lambda not dividing c'."""
    c = EisensteinInt.coerce(c)
    if not c:
        raise ValueError("zero is divisible by every power of lambda")
    k = 0
    while (c.a + c.b) % 3 == 0:
        c = exact_div(c, LAMBDA)
        k += 1
    return k, c


def normalize(c) -> EisensteinInt:
    """Canonical associate: lambda^k times the primary part."""
    k, rest = strip_lambda(c)
    _, prim = primary_normalize(rest)
    return LAMBDA**k * prim


def gcd(x, y) -> EisensteinInt:
    """Greatest common divisor, normalised to lambda^k * primary."""
    x = EisensteinInt.coerce(x)
    y = EisensteinInt.coerce(y)
    if not x and not y:
        raise ValueError("gcd(0, 0) is undefined")
    while y:
        x, y = y, divrem(x, y)[1]
    return normalize(x)


def coprime(x, y) -> bool:
    return gcd(x, y).norm() == 1


# -- primes ---------------------------------------------------------------

def split_rational_prime(p: int) -> tuple[EisensteinInt, EisensteinInt]:
    """The two primary primes above a rational prime p = 1 (mod 3).

    The first returned element has positive imaginary part (b > 0).
    """
    if p % 3 != 1:
        raise ValueError(f"{p} is not 1 mod 3; it does not split")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    t = sqrt_mod(-3, p)
    # (t - lambda)(t + lambda) = t^2 + 3 = 0 mod p
    g = gcd(EisensteinInt(p), EisensteinInt(t) - LAMBDA)
    if g.norm() != p:
        raise ArithmeticError(f"prime splitting failed for {p}")
    pi = g if g.b > 0 else g.conj()
    return pi, pi.conj()


def split_by_search(p: int) -> tuple[EisensteinInt, EisensteinInt]:
    """Brute-force solution of a^2 - ab + b^2 = p; independent of Tonelli-Shanks."""
    r = math.isqrt(4 * p // 3) + 2
    for b in range(1, r):
        for a in range(-r, r + 1):
            if a * a - a * b + b * b == p:
                x = EisensteinInt(a, b)
                if x.norm() % 3:
                    _, prim = primary_normalize(x)
                    pi = prim if prim.b > 0 else prim.conj()
                    return pi, pi.conj()
    raise ValueError(f"no element of norm {p}")


def inert_prime(q: int) -> EisensteinInt:
    """Primary generator (-q) of the inert prime above q = 2 mod 3."""
    if q % 3 != 2:
        raise ValueError(f"{q} is not 2 mod 3")
    return EisensteinInt(-q, 0)


# -- factorisation --------------------------------------------------------

@dataclass
class PrimaryFactorization:
    unit: EisensteinInt
    lambda_exp: int
    factors: list[tuple[EisensteinInt, int]] = field(default_factory=list)

    def reassemble(self) -> EisensteinInt:
        x = self.unit * LAMBDA**self.lambda_exp
        for pi, e in self.factors:
            x = x * pi**e
        return x

    @property
    def primes(self) -> list[EisensteinInt]:
        return [pi for pi, _ in self.factors]

    def is_squarefree(self) -> bool:
        return self.lambda_exp <= 1 and all(e == 1 for _, e in self.factors)


def _valuation(c: EisensteinInt, pi: EisensteinInt) -> tuple[int, EisensteinInt]:
    e = 0
    while True:
        q, r = divrem(c, pi)
        if r:
            return e, c
        c = q
        e += 1


def factor(c) -> PrimaryFactorization:
    """Factor c into unit * lambda^k * product of primary primes."""
    c = EisensteinInt.coerce(c)
    if not c:
        raise ValueError("cannot factor zero")
    n = c.norm()
    found: list[tuple[EisensteinInt, int]] = []
    lam = 0
    rest = c
    for q, e in factor_int(n).items():
        if q == 3:
            lam, rest = _valuation(rest, LAMBDA)
        elif q % 3 == 1:
            for pi in split_rational_prime(q):
                k, rest = _valuation(rest, pi)
                if k:
                    found.append((pi, k))
        else:
            k, rest = _valuation(rest, inert_prime(q))
            found.append((inert_prime(q), k))
    if rest.norm() != 1:
        raise ArithmeticError(f"incomplete factorisation of {c}")
    found.sort(key=lambda t: t[0].sort_key())
    return PrimaryFactorization(unit=rest, lambda_exp=lam, factors=found)


@dataclass(frozen=True)
class ArithmeticFunctions:
    mobius: int
    euler_phi: int
    omega: int
    is_squarefree: bool


def arithmetic_functions(fac: PrimaryFactorization) -> ArithmeticFunctions:
    norm = fac.reassemble().norm()
    sqf = fac.is_squarefree()
    mu = (-1) ** (len(fac.factors) + fac.lambda_exp) if sqf else 0
    phi = norm
    primes = list(fac.primes) + ([LAMBDA] if fac.lambda_exp else [])
    for pi in primes:
        npi = pi.norm()
        phi = phi // npi * (npi - 1)
    return ArithmeticFunctions(mu, phi, len(primes), sqf)


def multiplicative_functions(c) -> ArithmeticFunctions:
    """Mobius, Euler phi, number of distinct primes and squarefreeness of c."""
    c = EisensteinInt.coerce(c)
    if not c.is_primary():
        raise ValueError(f"{c} is not primary")
    return arithmetic_functions(factor(c))


def mobius(c) -> int:
    return multiplicative_functions(c).mobius


def euler_phi(c) -> int:
    return multiplicative_functions(c).euler_phi


def is_squarefree(c) -> bool:
    return factor(c).is_squarefree()


def is_rough(c, w: float) -> bool:
    """True if every prime factor of c has norm > w."""
    fac = factor(c)
    if fac.lambda_exp and 3 <= w:
        return False
    return all(pi.norm() > w for pi in fac.primes)


# -- enumeration ----------------------------------------------------------

def primary_arrays(lo: int, hi: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coordinates (a, b) and norms of all primary c with lo < N(c) <= hi.

    Sorted canonically: by norm, then a, then b.
    """
    if hi <= lo or hi < 1:
        e = np.array([], dtype=np.int64)
        return e, e.copy(), e.copy()
    # N = (a - b/2)^2 + 3 b^2 / 4 <= hi  =>  |b| <= sqrt(4 hi / 3)
    bmax = math.isqrt(4 * hi // 3) + 1
    bs = np.arange(-(bmax // 3) - 1, bmax // 3 + 2, dtype=np.int64) * 3
    out_a, out_b = [], []
    for b in bs.tolist():
        disc = 4 * hi - 3 * b * b
        if disc < 0:
            continue
        s = math.isqrt(disc)
        amin, amax = (b - s) // 2 - 1, (b + s) // 2 + 1
        i0 = -((1 - amin) // 3)  # first i with 1 + 3i >= amin
        i1 = (amax - 1) // 3
        a = 1 + 3 * np.arange(i0, i1 + 1, dtype=np.int64)
        n = a * a - a * b + b * b
        keep = (n > lo) & (n <= hi)
        out_a.append(a[keep])
        out_b.append(np.full(int(keep.sum()), b, dtype=np.int64))
    a = np.concatenate(out_a)
    b = np.concatenate(out_b)
    n = a * a - a * b + b * b
    order = np.lexsort((b, a, n))
    return a[order], b[order], n[order]


def _predicate(kind: str, w: float | None) -> Callable[[EisensteinInt], bool] | None:
    if kind == "all":
        return None
    if kind == "squarefree":
        return is_squarefree
    if kind == "rough":
        if w is None:
            raise ValueError("the rough predicate needs w")
        return lambda c: is_rough(c, w)
    raise ValueError(f"unknown predicate {kind!r}")


def primary_primes(lo: int, hi: int) -> list[EisensteinInt]:
    """Primary primes with lo < N <= hi in canonical order (sieve backed)."""
    out: list[EisensteinInt] = []
    for p in segmented_sieve(lo, hi).tolist():
        if p % 3 == 1:
            out.extend(split_rational_prime(p))
    qmax = math.isqrt(hi)
    for q in segmented_sieve(0, qmax).tolist():
        if q % 3 == 2 and lo < q * q <= hi:
            out.append(inert_prime(q))
    out.sort(key=EisensteinInt.sort_key)
    return out


def enumerate_primary(lo: int, hi: int, predicate: str = "all",
                      w: float | None = None) -> Iterator[EisensteinInt]:
    """Yield every primary c with lo < N(c) <= hi satisfying ``predicate``.

    ``predicate`` is one of ``"all"``, ``"prime"``, ``"squarefree"`` or
    ``"rough"`` (the last needs ``w``).
    """
    if predicate == "prime":
        yield from primary_primes(lo, hi)
        return
    test = _predicate(predicate, w)
    a, b, _ = primary_arrays(lo, hi)
    for x, y in zip(a.tolist(), b.tolist()):
        c = EisensteinInt(x, y)
        if test is None or test(c):
            yield c
