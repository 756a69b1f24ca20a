"""Analytic tools: smooth windows, Mellin and radial Bessel transforms,
Ramanujan sums, Poisson summation checks on Z[w], partial Dedekind zeta
values and sieve weights.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy import integrate, special

from .eisenstein import (
    EI,
    ONE,
    EisensteinInt,
    enumerate_primary,
    exact_div,
    factor,
    gcd,
    multiplicative_functions,
    primary_arrays,
    primary_primes,
)
from .gauss import (
    divisible_mask,
    gtilde,
    residue_index,
    residue_system,
    root_table,
    symbol_exponents,
)
from .symbol import cubic_symbol

BESSEL_SCALE = 4 * math.pi / (3 * math.sqrt(3))
_OMEGA_POWERS = np.array([1.0 + 0j, cmath.exp(2j * math.pi / 3), cmath.exp(-2j * math.pi / 3)])


# -- constants ---------------------------------------------------------------

@dataclass(frozen=True)
class Constants:
    c_smooth: float
    c_sharp: float
    sigma: float


def constants() -> Constants:
    """(2 pi)^{2/3} / (3 Gamma(2/3)), 2 (2 pi)^{2/3} / (5 Gamma(2/3)) and 3^{5/2}/2."""
    base = (2 * math.pi) ** (2 / 3) / math.gamma(2 / 3)
    return Constants(base / 3, 2 * base / 5, 3**2.5 / 2)


# -- windows -----------------------------------------------------------------

@dataclass(frozen=True)
class SmoothWindow:
    """A bump exp(1 - 1/(1 - t^2)) on (l, r) (maximum 1), or the indicator of (l, r]."""

    kind: str = "bump"
    l: float = 1.0
    r: float = 2.0
    abs_tol: float = 1e-10
    max_depth: int = 500

    def __post_init__(self):
        if self.kind not in ("bump", "sharp"):
            raise ValueError(f"unknown window kind {self.kind!r}")
        if not self.r > self.l >= 0:
            raise ValueError("window needs 0 <= l < r")

    @classmethod
    def bump(cls, l: float = 1.0, r: float = 2.0) -> "SmoothWindow":
        return cls("bump", l, r)

    @classmethod
    def sharp(cls, l: float = 0.0, r: float = 1.0) -> "SmoothWindow":
        return cls("sharp", l, r)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "sharp":
            out = ((x > self.l) & (x <= self.r)).astype(np.float64)
        else:
            t = (2 * x - (self.l + self.r)) / (self.r - self.l)
            inside = np.abs(t) < 1
            out = np.zeros_like(x)
            ti = t[inside]
            out[inside] = np.exp(1.0 - 1.0 / (1.0 - ti * ti))
        return out if out.ndim else float(out)

    def integral(self) -> float:
        return mellin(self, 1.0).real


def _quad(f, a: float, b: float, win: SmoothWindow) -> float:
    val, err = integrate.quad(f, a, b, epsabs=win.abs_tol, epsrel=0.0, limit=win.max_depth)
    if err > win.abs_tol:
        raise ArithmeticError(f"quadrature reached only {err:.3g} (tolerance {win.abs_tol:.3g})")
    return val


def mellin(W: SmoothWindow, s) -> complex:
    """int_0^inf W(x) x^{s-1} dx."""
    s = complex(s)
    if W.kind == "sharp":
        if W.l == 0 and s.real <= 0:
            raise ValueError("Mellin transform of a window touching 0 needs Re s > 0")
        if s == 0:
            return complex(math.log(W.r / W.l))
        return (W.r**s - (W.l**s if W.l > 0 else 0)) / s
    re = _quad(lambda x: W(x) * (x ** (s - 1)).real, W.l, W.r, W)
    im = 0.0
    if s.imag:
        im = _quad(lambda x: W(x) * (x ** (s - 1)).imag, W.l, W.r, W)
    return complex(re, im)


# -- radial Bessel transform --------------------------------------------------

@lru_cache(maxsize=64)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = special.roots_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _node_grid(n: int) -> int:
    # round up to a quarter-octave grid so node sets are shared between calls
    k = math.ceil(4 * math.log2(n))
    return int(math.ceil(2 ** (k / 4)))


def _vddot_fixed(V: SmoothWindow, u: np.ndarray, n: int) -> np.ndarray:
    a, b = math.sqrt(V.l), math.sqrt(V.r)
    x, w = _gauss_legendre(n)
    r = 0.5 * (b - a) * x + 0.5 * (b + a)
    w = 0.5 * (b - a) * w
    base = w * r * V(r * r)
    out = np.empty(u.shape)
    for i0 in range(0, u.size, 512):
        uu = u[i0 : i0 + 512]
        out[i0 : i0 + 512] = special.j0(BESSEL_SCALE * np.outer(uu, r)) @ base
    return out


def bessel_transform_Vddot(V: SmoothWindow, u, tol: float = 1e-13):
    """V''(u) = int_0^inf r V(r^2) J_0(4 pi r |u| / (3 sqrt 3)) dr.

    Gauss-Legendre on the support in r, with the node count doubled until
    two consecutive rules agree to ``tol``.
    """
    if V.kind != "bump":
        raise ValueError("the radial transform needs a smooth window")
    arr = np.abs(np.atleast_1d(np.asarray(u, dtype=np.float64)))
    if arr.size == 0:
        return arr
    width = math.sqrt(V.r) - math.sqrt(V.l)
    n = _node_grid(64 + int(BESSEL_SCALE * float(arr.max()) * width))
    prev = _vddot_fixed(V, arr, n)
    for _ in range(8):
        n *= 2
        cur = _vddot_fixed(V, arr, n)
        if np.max(np.abs(cur - prev)) <= tol:
            return cur if np.ndim(u) else float(cur[0])
        prev = cur
    raise ArithmeticError("radial transform quadrature did not converge")


def bessel_transform_quad(V: SmoothWindow, u: float) -> float:
    """Adaptive-quadrature evaluation of the radial transform (reference path)."""
    a, b = math.sqrt(V.l), math.sqrt(V.r)
    f = lambda r: r * V(r * r) * special.j0(BESSEL_SCALE * r * abs(u))
    val, _ = integrate.quad(f, a, b, epsabs=1e-13, epsrel=0.0, limit=V.max_depth)
    return val


# -- Ramanujan sums -----------------------------------------------------------

def ramanujan_sum(d, k) -> int:
    """c_d(k) = sum over x mod d, (x, d) = 1, of e(Tr(k x / d)), in closed form."""
    d = EisensteinInt.coerce(d)
    k = EisensteinInt.coerce(k)
    fd = multiplicative_functions(d)
    if not fd.is_squarefree:
        raise ValueError(f"{d} is not squarefree")
    if not k:
        return fd.euler_phi
    m = exact_div(d, gcd(d, k))
    fm = multiplicative_functions(m)
    return fm.mobius * fd.euler_phi // fm.euler_phi


def coprime_mask(x: np.ndarray, y: np.ndarray, d: EisensteinInt) -> np.ndarray:
    keep = np.ones(np.shape(x), dtype=bool)
    for pi, _ in factor(d).factors:
        keep &= ~divisible_mask(x, y, pi)
    return keep


def ramanujan_sum_direct(d, k) -> complex:
    """c_d(k) by summing the additive character over reduced residues."""
    d = EisensteinInt.coerce(d)
    k = EisensteinInt.coerce(k)
    n = d.norm()
    x, y = residue_system(d)
    keep = coprime_mask(x, y, d)
    m = k * d.conj()
    t = (x * ((2 * m.a - m.b) % n) + y * ((-m.a - m.b) % n)) % n
    vals = root_table(n)[t[keep]]
    return complex(np.sum(vals.real), np.sum(vals.imag))


def _ramanujan_vec(d: EisensteinInt, kx: np.ndarray, ky: np.ndarray) -> np.ndarray:
    out = np.ones(kx.shape, dtype=np.float64)
    for pi, _ in factor(d).factors:
        hit = divisible_mask(kx, ky, pi)
        out *= np.where(hit, pi.norm() - 1, -1)
    return out


def third_phase(ky: np.ndarray) -> np.ndarray:
    """e(-Tr(k / (3 lambda))) = e(-y/3) for k = x + y w."""
    return _OMEGA_POWERS[(-np.asarray(ky)) % 3]


def tilde_c(d, k) -> complex:
    """e(-Tr(k/(3 lambda))) times the Ramanujan sum c_d(-k)."""
    d = EisensteinInt.coerce(d)
    k = EisensteinInt.coerce(k)
    return complex(third_phase(np.array([k.b]))[0]) * ramanujan_sum(d, -k)


# -- Poisson summation ----------------------------------------------------------

@dataclass(frozen=True)
class PoissonCheck:
    lhs: complex
    rhs: complex
    discrepancy: float  # |lhs - rhs| / (|lhs| + 1)
    n_dual_terms: int
    tail_estimate: float


def _lattice_ring(lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    """All k = x + y w with lo < N(k) <= hi."""
    ymax = int(math.isqrt(int(4 * hi / 3) + 1)) + 1
    ys = np.arange(-ymax, ymax + 1, dtype=np.int64)
    xs = np.arange(-2 * ymax - 2, 2 * ymax + 3, dtype=np.int64)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    n = X * X - X * Y + Y * Y
    keep = (n > lo) & (n <= hi)
    return X[keep], Y[keep]


def _vddot_by_norm(V: SmoothWindow, nk: np.ndarray, scale: float) -> np.ndarray:
    # V'' depends on |k| only: evaluate once per distinct norm
    uniq, inv = np.unique(nk, return_inverse=True)
    return bessel_transform_Vddot(V, np.sqrt(uniq.astype(np.float64)) * scale)[inv]


def _dual_sum(coef, scale: float, V: SmoothWindow, K: float | None, target: float):
    """sum_k coef(k) V''(|k| * scale) with ring-by-ring truncation.

    ``coef`` maps coordinate arrays to complex coefficients. Returns
    (total, number of terms, tail estimate). With ``K`` given, sums N(k) <= K
    and estimates the tail by the next ring; otherwise rings are added until
    two consecutive rings fall below ``target``.
    """
    total = 0j
    terms = 0
    lo, hi = -1.0, 4.0
    quiet = 0
    while True:
        if K is not None and lo >= K:
            kx, ky = _lattice_ring(K, 4 * K + 16)
            vd = _vddot_by_norm(V, kx * kx - kx * ky + ky * ky, scale)
            tail = float(np.sum(np.abs(coef(kx, ky) * vd)))
            return total, terms, tail
        top = hi if K is None else min(hi, K)
        kx, ky = _lattice_ring(lo, top)
        vd = _vddot_by_norm(V, kx * kx - kx * ky + ky * ky, scale)
        contrib = coef(kx, ky) * vd
        ring_mag = float(np.sum(np.abs(contrib)))
        total += complex(np.sum(contrib.real), np.sum(contrib.imag))
        terms += kx.size
        if K is None:
            quiet = quiet + 1 if ring_mag < target else 0
            if quiet >= 2:
                return total, terms, ring_mag
        lo, hi = top, 2 * top + 16


def _lhs_sum(values_fn, V: SmoothWindow, M: float) -> complex:
    a, b, n = primary_arrays(math.floor(V.l * M), math.ceil(V.r * M))
    w = V(n / M)
    vals = values_fn(a, b) * w
    return complex(np.sum(vals.real), np.sum(np.imag(vals)))


def poisson_radial_check(psi: np.ndarray, q, V: SmoothWindow, M: float,
                         K: float | None = None, tol: float = 1e-6) -> PoissonCheck:
    """Radial Poisson summation for a q-periodic psi, both sides evaluated.

    ``psi`` lists the values on ``residue_system(q)``. The left side is
    sum over primary m of psi(m) V(N(m)/M); the right side is
    4 pi M / (9 sqrt3 N(q)) sum_k psi''(k) V''(k sqrt(M)/q) with
    psi''(k) = e(-Tr(k/(3 lambda))) sum_{x mod q} psi(3 lambda x) e(-Tr(k x / q)).
    """
    q = EisensteinInt.coerce(q)
    if not q.is_primary():
        raise ValueError(f"{q} is not primary")
    nq = q.norm()
    psi = np.asarray(psi, dtype=np.complex128)
    xr, yr = residue_system(q)
    if psi.shape != xr.shape:
        raise ValueError("psi must list one value per residue class")
    lhs = _lhs_sum(lambda a, b: psi[residue_index(a, b, q)], V, M)

    # psi(3 lambda x) on the residue system; 3 lambda = 3 + 6 w
    tx = 3 * xr - 6 * yr
    ty = 6 * xr + 3 * yr - 6 * yr
    psi3 = psi[residue_index(tx, ty, q)]
    qc = q.conj()

    def coef(kx, ky):
        # Tr(k x conj(q)) with k x = (kx xr - ky yr) + (kx yr + ky xr - ky yr) w
        px = np.outer(kx, xr) - np.outer(ky, yr)
        py = np.outer(kx, yr) + np.outer(ky, xr) - np.outer(ky, yr)
        tr = (px * (2 * qc.a - qc.b) - py * (qc.a + qc.b)) % nq
        inner = root_table(nq)[(-tr) % nq] @ psi3
        return third_phase(ky) * inner

    pref = 4 * math.pi * M / (9 * math.sqrt(3) * nq)
    target = 1e-3 * tol * (abs(lhs) + 1) / pref
    s, terms, tail = _dual_sum(coef, math.sqrt(M / nq), V, K, target)
    tail *= pref
    if tail > tol * (abs(lhs) + 1):
        raise ArithmeticError(f"truncation tail {tail:.3g} exceeds tolerance")
    rhs = pref * s
    return PoissonCheck(lhs, rhs, abs(lhs - rhs) / (abs(lhs) + 1), terms, tail)


def character_pair_table(n1, n2) -> tuple[EisensteinInt, np.ndarray]:
    """psi(m) = (m/n1)_3 conj((m/n2)_3) listed on residues mod n1 n2 / d."""
    n1 = EisensteinInt.coerce(n1)
    n2 = EisensteinInt.coerce(n2)
    q = exact_div(n1 * n2, gcd(n1, n2))
    x, y = residue_system(q)
    return q, _pair_values(x, y, n1, n2)


def _pair_values(x, y, n1: EisensteinInt, n2: EisensteinInt) -> np.ndarray:
    e1 = symbol_exponents(x, y, n1)
    e2 = symbol_exponents(x, y, n2)
    vals = _OMEGA_POWERS[e1 % 3] * np.conj(_OMEGA_POWERS[e2 % 3])
    vals[(e1 < 0) | (e2 < 0)] = 0
    return vals


def poisson_twisted_check(n1, n2, V: SmoothWindow, M: float, K: float | None = None,
                          tol: float = 1e-6) -> PoissonCheck:
    """Poisson summation for m -> (m/n1)_3 conj((m/n2)_3), closed-form dual side.

    With d = (n1, n2) the right side is
    4 pi (d/(n1/d)) conj((d/(n2/d))) M g(n1/d) conj(g(n2/d)) / (9 sqrt3 N(n1 n2/d))
    times sum_k c~_d(k) conj((k/(n1/d))) (k/(n2/d)) V''(k d sqrt(M) / (n1 n2)).
    """
    n1 = EisensteinInt.coerce(n1)
    n2 = EisensteinInt.coerce(n2)
    for n in (n1, n2):
        if not n.is_primary() or not multiplicative_functions(n).is_squarefree:
            raise ValueError(f"{n} must be primary and squarefree")
    d = gcd(n1, n2)
    m1, m2 = exact_div(n1, d), exact_div(n2, d)
    lhs = _lhs_sum(lambda a, b: _pair_values(a, b, n1, n2), V, M)

    g1 = gtilde(m1).value * m1.abs()
    g2 = gtilde(m2).value * m2.abs()
    sym = complex(cubic_symbol(d, m1)) * complex(cubic_symbol(d, m2)).conjugate()
    nq = exact_div(n1 * n2, d).norm()
    pref = 4 * math.pi * M * sym * g1 * g2.conjugate() / (9 * math.sqrt(3) * nq)

    def coef(kx, ky):
        c = third_phase(ky) * _ramanujan_vec(d, kx, ky)
        return c * np.conj(_pair_values(kx, ky, m1, ONE)) * _pair_values(kx, ky, m2, ONE)

    scale = d.abs() * math.sqrt(M) / (n1.abs() * n2.abs())
    apref = max(abs(pref), 1e-300)
    target = 1e-3 * tol * (abs(lhs) + 1) / apref
    s, terms, tail = _dual_sum(coef, scale, V, K, target)
    tail *= apref
    if tail > tol * (abs(lhs) + 1):
        raise ArithmeticError(f"truncation tail {tail:.3g} exceeds tolerance")
    rhs = pref * s
    return PoissonCheck(lhs, rhs, abs(lhs - rhs) / (abs(lhs) + 1), terms, tail)


# -- partial Dedekind zeta --------------------------------------------------------

def _zeta_primary(s: float) -> float:
    # sum over primary d of N(d)^-s = (1 - 3^-s) zeta(s) L(s, chi_{-3})
    l_chi = 3.0**-s * (special.zeta(s, 1 / 3) - special.zeta(s, 2 / 3))
    return (1 - 3.0**-s) * float(special.zeta(s)) * float(l_chi)


def dedekind_zeta_partial(s: float, excluded=1, method: str = "closed",
                          cutoff: int = 10**6) -> float:
    """sum over primary d coprime to ``excluded`` of N(d)^{-s}, s > 1.

    ``method="closed"`` uses zeta(s) L(s, chi_{-3}) with the 3-factor removed;
    ``method="euler"`` multiplies Euler factors of primary primes up to
    ``cutoff`` (tail below cutoff^{1-s} / ((s-1) log cutoff) in log size).
    """
    if s <= 1:
        raise ValueError("the series needs s > 1")
    r = EisensteinInt.coerce(excluded)
    drop = factor(r).primes if r.norm() > 1 else []
    if method == "closed":
        val = _zeta_primary(s)
    elif method == "euler":
        logv = 0.0
        for pi in primary_primes(0, cutoff):
            logv -= math.log1p(-pi.norm() ** -s)
        val = math.exp(logv)
    else:
        raise ValueError(f"unknown method {method!r}")
    for pi in drop:
        val *= 1 - pi.norm() ** -s
    return val


def dedekind_zeta_direct(s: float, excluded=1, nmax: int = 10**6) -> float:
    """Truncated Dirichlet series over primary d with N(d) <= nmax."""
    r = EisensteinInt.coerce(excluded)
    a, b, n = primary_arrays(0, nmax)
    keep = np.ones(n.shape, dtype=bool)
    if r.norm() > 1:
        keep = coprime_mask(a, b, r)
    return float(np.sum(n[keep].astype(np.float64) ** -s))


# -- sieve weights ---------------------------------------------------------------

@dataclass
class SieveWeights:
    """lambda_d for primary squarefree d with N(d) <= y^2.

    Keys are frozensets of primary primes; ``elements`` maps each key to d.
    """

    y: float
    flavor: str
    w: float | None
    weights: dict[frozenset, float] = field(default_factory=dict)
    elements: dict[frozenset, EisensteinInt] = field(default_factory=dict)

    def __getitem__(self, d) -> float:
        d = EisensteinInt.coerce(d)
        if not d.is_primary():
            return 0.0
        if d.norm() == 1:
            return self.weights.get(frozenset(), 0.0)
        fac = factor(d)
        if not fac.is_squarefree():
            return 0.0
        return self.weights.get(frozenset(fac.primes), 0.0)

    def items(self):
        for key, val in self.weights.items():
            yield self.elements[key], val

    def majorant_rough(self, n) -> float:
        """sum over d | n, d | P(w) of lambda_d."""
        fac = factor(EisensteinInt.coerce(n))
        ps = [pi for pi in fac.primes if pi.norm() <= self.w]
        return self._subset_sum(ps)

    def majorant_squarefree(self, n) -> float:
        """sum over d with d^2 | n of lambda_d."""
        fac = factor(EisensteinInt.coerce(n))
        ps = [pi for pi, e in fac.factors if e >= 2]
        return self._subset_sum(ps)

    def _subset_sum(self, ps) -> float:
        total = 0.0
        for k in range(len(ps) + 1):
            for sub in combinations(ps, k):
                total += self.weights.get(frozenset(sub), 0.0)
        return total

    def dual_sum(self, power: float = 1.0, coprime_to=None) -> float:
        """sum lambda_d / N(d)^power over d coprime to ``coprime_to``."""
        avoid = set()
        if coprime_to is not None and EisensteinInt.coerce(coprime_to).norm() > 1:
            avoid = set(factor(EisensteinInt.coerce(coprime_to)).primes)
        terms = [v / self.elements[k].norm() ** power
                 for k, v in self.weights.items() if not (k & avoid)]
        return math.fsum(terms)


def sieve_weights(y: float, flavor: str = "rough", w: float | None = None) -> SieveWeights:
    """Selberg-type weights lambda_d = sum over [e, f] = d, N(e), N(f) <= y.

    ``rough``: terms mu(e) mu(f) (1 - log N(e)/log y)(1 - log N(f)/log y);
    these majorise the indicator of (n, P(w)) = 1 when every prime of norm
    <= y also has norm <= w (w = y^2 by default).
    ``squarefree``: terms mu(e) mu(f); these majorise mu^2(n) via d^2 | n.
    """
    if y < 2:
        raise ValueError("sieve weights need y >= 2")
    if flavor not in ("rough", "squarefree"):
        raise ValueError(f"unknown flavor {flavor!r}")
    if flavor == "rough" and w is None:
        w = y * y
    logy = math.log(y)
    base: list[tuple[frozenset, float]] = []
    elements: dict[frozenset, EisensteinInt] = {frozenset(): EI(1, 0)}
    for e in [EI(1, 0)] + list(enumerate_primary(1, int(y), "squarefree")):
        ps = frozenset(factor(e).primes) if e.norm() > 1 else frozenset()
        mu = -1 if len(ps) % 2 else 1
        if flavor == "rough":
            mu *= 1 - math.log(e.norm()) / logy
        base.append((ps, mu))
        elements[ps] = e
    weights: dict[frozenset, float] = {}
    acc: dict[frozenset, list[float]] = {}
    for ke, ve in base:
        for kf, vf in base:
            acc.setdefault(ke | kf, []).append(ve * vf)
    for key, vals in acc.items():
        weights[key] = math.fsum(vals)
        if key not in elements:
            d = EI(1, 0)
            for pi in key:
                d = d * pi
            elements[key] = d
    return SieveWeights(y, flavor, w, weights, elements)
