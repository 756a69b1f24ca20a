"""The cubic residue symbol (a/b)_3 on Z[w].

Two evaluators: ``symbol_euler_prime`` is the definition (Euler's criterion
at a prime modulus) and ``cubic_symbol`` is a Euclidean, factorisation-free
algorithm built on cubic reciprocity and the supplementary laws for w and
lambda. Each serves as the other's oracle in the tests.
"""

from __future__ import annotations

import cmath
import enum

from .eisenstein import (
    EI,
    LAMBDA,
    OMEGA,
    OMEGA2,
    ONE,
    EisensteinInt,
    divrem,
    factor,
    mod,
)
from .primes import is_prime

_OMEGA_C = cmath.exp(2j * cmath.pi / 3)


class CubicValue(enum.Enum):
    """Exact value of a cubic symbol: 0 or a cube root of unity w^k."""

    ZERO = None
    ONE = 0
    OMEGA = 1
    OMEGA_SQ = 2

    @classmethod
    def from_exponent(cls, k: int) -> "CubicValue":
        return (cls.ONE, cls.OMEGA, cls.OMEGA_SQ)[k % 3]

    @property
    def exponent(self) -> int | None:
        return self.value

    def __mul__(self, other: "CubicValue") -> "CubicValue":
        if self is CubicValue.ZERO or other is CubicValue.ZERO:
            return CubicValue.ZERO
        return CubicValue.from_exponent(self.value + other.value)

    def __pow__(self, n: int) -> "CubicValue":
        if self is CubicValue.ZERO:
            return CubicValue.ONE if n == 0 else CubicValue.ZERO
        return CubicValue.from_exponent(self.value * n)

    def conj(self) -> "CubicValue":
        if self is CubicValue.ZERO:
            return self
        return CubicValue.from_exponent(-self.value)

    def __complex__(self) -> complex:
        if self is CubicValue.ZERO:
            return 0j
        return (1 + 0j, _OMEGA_C, _OMEGA_C.conjugate())[self.value]

    def to_eisenstein(self) -> EisensteinInt:
        if self is CubicValue.ZERO:
            return EI(0, 0)
        return (ONE, OMEGA, OMEGA2)[self.value]

    def __str__(self) -> str:
        return {None: "0", 0: "1", 1: "ω", 2: "ω²"}[self.value]


def _powmod(x: EisensteinInt, e: int, m: EisensteinInt) -> EisensteinInt:
    result = ONE
    x = mod(x, m)
    while e:
        if e & 1:
            result = mod(result * x, m)
        x = mod(x * x, m)
        e >>= 1
    return result


def _is_prime_element(pi: EisensteinInt) -> bool:
    n = pi.norm()
    if is_prime(n):
        return True
    r = int(round(n**0.5))
    return r * r == n and r % 3 == 2 and is_prime(r) and pi.b == 0


def symbol_euler_prime(a, pi) -> CubicValue:
    """(a/pi)_3 for a primary prime pi, straight from Euler's criterion."""
    a = EisensteinInt.coerce(a)
    pi = EisensteinInt.coerce(pi)
    if not pi.is_primary():
        raise ValueError(f"{pi} is not primary")
    if not _is_prime_element(pi):
        raise ValueError(f"{pi} is not prime")
    r = _powmod(a, (pi.norm() - 1) // 3, pi)
    if not r:
        return CubicValue.ZERO
    for k, w in enumerate((ONE, OMEGA, OMEGA2)):
        if not mod(r - w, pi):
            return CubicValue.from_exponent(k)
    raise ArithmeticError(f"a^((N-1)/3) mod {pi} is not a cube root of unity")


def supplement_exponents(d) -> tuple[int, int]:
    """(alpha2, alpha3) in {-1,0,1}^2 with d = 1 + alpha2 l^2 + alpha3 l^3 mod 9."""
    d = EisensteinInt.coerce(d)
    if not d.is_primary():
        raise ValueError(f"{d} is not primary")
    l2, l3 = LAMBDA * LAMBDA, LAMBDA * LAMBDA * LAMBDA
    for a2 in (-1, 0, 1):
        for a3 in (-1, 0, 1):
            diff = d - (ONE + l2 * a2 + l3 * a3)
            if diff.a % 9 == 0 and diff.b % 9 == 0:
                return a2, a3
    raise AssertionError("unreachable for primary d")


def _alphas(a: int, b: int) -> tuple[int, int]:
    # closed form of supplement_exponents for primary a + b w (mod 3 exponents)
    alpha3 = (b // 3) % 3
    alpha2 = (-((a - 1) // 3) - alpha3) % 3
    return alpha2, alpha3


def _mul(a: int, b: int, c: int, d: int) -> tuple[int, int]:
    bd = b * d
    return a * c - bd, a * d + b * c - bd


def _rem(xa: int, xb: int, ma: int, mb: int) -> tuple[int, int]:
    # x mod m by nearest-integer rounding (ties toward -inf)
    n = ma * ma - ma * mb + mb * mb
    ua, ub = _mul(xa, xb, ma - mb, -mb)
    qa = -((n - 2 * ua) // (2 * n))
    qb = -((n - 2 * ub) // (2 * n))
    pa, pb = _mul(qa, qb, ma, mb)
    return xa - pa, xb - pb


# unit w^j * (+-1) -> j, given as the associate multiplier table
_UNIT_EXP = {(1, 0): 0, (-1, 0): 0, (0, 1): 1, (0, -1): 1, (-1, -1): 2, (1, 1): 2}


def _symbol_exp(xa: int, xb: int, ma: int, mb: int) -> int | None:
    """Exponent k with (x/m)_3 = w^k, or None when gcd(x, m) != 1. m primary."""
    k = 0
    while True:
        if ma == 1 and mb == 0:
            return k % 3
        xa, xb = _rem(xa, xb, ma, mb)
        if xa == 0 and xb == 0:
            return None
        alpha2, alpha3 = _alphas(ma, mb)
        # strip lambda: lambda | x iff a + b = 0 mod 3
        nl = 0
        while (xa + xb) % 3 == 0:
            # x / lambda = x * conj(lambda) / 3, conj(lambda) = -1 - 2w
            ya, yb = _mul(xa, xb, -1, -2)
            xa, xb = ya // 3, yb // 3
            nl += 1
        # x = u * x' with x' primary; find u = +-w^j
        for (ua, ub), j in _UNIT_EXP.items():
            # x' = x * conj(u)
            pa, pb = _mul(xa, xb, ua - ub, -ub)
            if pa % 3 == 1 and pb % 3 == 0:
                break
        else:  # pragma: no cover
            raise AssertionError("no primary associate")
        k += j * alpha2 - nl * alpha3
        # reciprocity: (x'/m) = (m/x')
        xa, xb, ma, mb = ma, mb, pa, pb


def cubic_symbol(a, b) -> CubicValue:
    """(a/b)_3 for primary b without factoring b.

    Each round reduces a mod b, strips the unit and lambda-power via the
    supplementary laws (read from b mod 9) and swaps by cubic reciprocity.
    Norms strictly decrease so the loop terminates. Returns ZERO when
    gcd(a, b) != 1.
    """
    a = EisensteinInt.coerce(a)
    b = EisensteinInt.coerce(b)
    if not b.is_primary():
        raise ValueError(f"{b} is not primary")
    k = _symbol_exp(a.a, a.b, b.a, b.b)
    return CubicValue.ZERO if k is None else CubicValue.from_exponent(k)


def symbol_exponent(a: tuple[int, int], b: tuple[int, int]) -> int | None:
    """Tuple-level entry point for hot loops: (a/b)_3 = w^k, or None."""
    return _symbol_exp(a[0], a[1], b[0], b[1])


def symbol_by_factoring(a, b) -> CubicValue:
    """(a/b)_3 as the product of Euler-criterion symbols over the primes of b."""
    b = EisensteinInt.coerce(b)
    if not b.is_primary():
        raise ValueError(f"{b} is not primary")
    out = CubicValue.ONE
    for pi, e in factor(b).factors:
        out = out * symbol_euler_prime(a, pi) ** e
    return out


def reduce_rational(c: EisensteinInt, pi: EisensteinInt) -> int:
    """Image of c in Z/p for a split prime pi of norm p (w -> -a/b mod p)."""
    p = pi.norm()
    w0 = (-pi.a * pow(pi.b, -1, p)) % p
    return (c.a + c.b * w0) % p


__all__ = [
    "CubicValue",
    "cubic_symbol",
    "divrem",
    "supplement_exponents",
    "symbol_by_factoring",
    "symbol_euler_prime",
    "symbol_exponent",
]
