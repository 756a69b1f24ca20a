"""Desk-scale numerical experiments.

Each experiment returns a report pairing observed sums with the predicted
main terms. Every predicted number carries the formula it came from. Sums
over primes use ``math.fsum``, so results do not depend on summation order
or on how a sweep was sharded.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .analytic import SmoothWindow, constants, mellin
from .eisenstein import (
    EI,
    EisensteinInt,
    factor,
    inert_prime,
    is_squarefree,
    primary_arrays,
    primary_primes,
)
from .gauss import (
    EPS,
    PrimeGaussTable,
    gauss_sum_direct,
    gtilde,
    gtilde_prime,
    prime_gauss_table,
    symbol_exponents,
)
from .primes import primes_upto
from .symbol import symbol_exponent

OMEGA_POWERS = np.array([1.0 + 0j, cmath.exp(2j * math.pi / 3), cmath.exp(-2j * math.pi / 3)])
GRAM_LIMIT = 4096  # largest dimension for which the Gram matrix is stored
SIDE_LIMIT = 20000  # largest support per side accepted by the large sieve routines


# -- reports ---------------------------------------------------------------

@dataclass
class ExperimentReport:
    """Observed values next to predictions; ``provenance`` names each formula."""

    command: str
    params: dict
    observed: dict
    predicted: dict
    ratio: dict
    err_bounds: dict
    provenance: dict
    runtime: float = 0.0
    rows: list = field(default_factory=list)
    columns: list = field(default_factory=list)

    def __post_init__(self):
        missing = [k for k in self.predicted if k not in self.provenance]
        if missing:
            raise ValueError(f"predicted values without provenance: {missing}")


@dataclass
class SieveSequence:
    """Finitely supported coefficients beta_b on squarefree primary b."""

    support: list
    values: np.ndarray
    range_tag: tuple = ()

    def __post_init__(self):
        self.support = [EisensteinInt.coerce(b) for b in self.support]
        self.values = np.asarray(self.values, dtype=np.complex128)
        if len(self.support) != self.values.shape[0]:
            raise ValueError("support and values differ in length")
        if len(set(self.support)) != len(self.support):
            raise ValueError("duplicate support element")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite coefficient")
        for b in self.support:
            if not b.is_primary() or not is_squarefree(b):
                raise ValueError(f"{b} is not squarefree primary")

    def __len__(self) -> int:
        return len(self.support)

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2))

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        bx = np.array([b.a for b in self.support], dtype=np.int64)
        by = np.array([b.b for b in self.support], dtype=np.int64)
        return bx, by

    def norms(self) -> np.ndarray:
        return np.array([b.norm() for b in self.support], dtype=np.float64)

    @classmethod
    def from_function(cls, lo: float, hi: float, fn, tag=None) -> "SieveSequence":
        """beta_b = fn(b) over squarefree primary lo < N(b) <= hi, zeros dropped."""
        supp, vals = [], []
        for b in squarefree_primary(lo, hi):
            v = complex(fn(b))
            if v != 0:
                supp.append(b)
                vals.append(v)
        return cls(supp, np.array(vals, dtype=np.complex128), tag or (lo, hi))


def squarefree_primary(lo: float, hi: float) -> list[EisensteinInt]:
    """Squarefree primary c with lo < N(c) <= hi, canonical order."""
    a, b, _ = primary_arrays(int(math.floor(lo)), int(math.floor(hi)))
    out = []
    for x, y in zip(a.tolist(), b.tolist()):
        c = EI(x, y)
        if is_squarefree(c):
            out.append(c)
    return out


# -- prime tables ---------------------------------------------------------

def prime_table(hi: int, cache=None) -> PrimeGaussTable:
    """Sweep table for p <= hi, read through ``cache`` when one is given."""
    if cache is not None:
        return cache.table(hi)
    return prime_gauss_table(0, hi)


def prime_value_map(hi: int, cache=None) -> dict:
    """(a, b) -> (g~, err) for every primary prime of norm <= hi.

    Both conjugates of each split prime are included, using
    g~(conj pi) = conj g~(pi).
    """
    t = prime_table(hi, cache)
    out = {}
    for a, b, v, e in zip(t.a.tolist(), t.b.tolist(), t.value.tolist(), t.err.tolist()):
        out[(a, b)] = (v, e)
        out[(a - b, -b)] = (v.conjugate(), e)
    for q in primes_upto(math.isqrt(hi)).tolist():
        if q % 3 == 2:
            g = gtilde_prime(inert_prime(q))
            out[(-q, 0)] = (g.value, g.err_bound)
    return out


# -- Kummer ------------------------------------------------------------------

KUMMER_LABELS = ("I1", "I2", "I3")


def kummer_interval(c: float) -> int:
    """0, 1, 2 for [1/2, 1], [-1/2, 1/2), [-1, -1/2); ties go up."""
    if c >= 0.5:
        return 0
    if c >= -0.5:
        return 1
    return 2


def kummer_histogram(X: int, cache=None) -> ExperimentReport:
    """Counts of cos(2 pi theta_p) = S_p / (2 sqrt p) over p = 1 mod 3, p <= X."""
    if X < 7:
        raise ValueError("X must be at least 7")
    t0 = time.perf_counter()
    t = prime_table(X, cache)
    counts = [0, 0, 0]
    rows = []
    for p, v in zip(t.p.tolist(), t.value.tolist()):
        theta = (cmath.phase(v) / (2 * math.pi)) % 1.0
        c = v.real
        k = kummer_interval(c)
        counts[k] += 1
        rows.append({"p": p, "theta": theta, "cos": c, "interval": KUMMER_LABELS[k]})
    total = sum(counts)
    observed = {f"count_{n}": counts[i] for i, n in enumerate(KUMMER_LABELS)}
    observed.update({f"freq_{n}": counts[i] / total for i, n in enumerate(KUMMER_LABELS)})
    observed["total"] = total
    predicted = {f"freq_{n}": 1 / 3 for n in KUMMER_LABELS}
    prov = {k: "equidistribution of theta_p: each third of the circle has mass 1/3"
            for k in predicted}
    ratio = {k: observed[k] / predicted[k] for k in predicted}
    err = {"max_cos_err": float(np.max(t.err)) if len(t) else 0.0}
    return ExperimentReport("kummer", {"X": X}, observed, predicted, ratio, err, prov,
                            time.perf_counter() - t0, rows, ["p", "theta", "cos", "interval"])


# -- Patterson -----------------------------------------------------------

def _decades(X: int) -> list[int]:
    out, d = [], 10
    while d < X:
        out.append(d)
        d *= 10
    return out + [X]


def patterson_predicted(X: float, window: SmoothWindow) -> tuple[float, str]:
    c = constants()
    main = X ** (5 / 6) / math.log(X)
    if window.kind == "sharp" and window.l == 0.0 and window.r == 1.0:
        return c.c_sharp * main, "2 (2 pi)^(2/3) / (5 Gamma(2/3)) * X^(5/6) / log X"
    m = mellin(window, 5 / 6).real
    return c.c_smooth * m * main, (
        "(2 pi)^(2/3) / (3 Gamma(2/3)) * int W(x) x^(-1/6) dx * X^(5/6) / log X")


def patterson_sum(X: int, window: SmoothWindow | None = None, cache=None) -> ExperimentReport:
    """sum_{p = 1 mod 3} S_p / (2 sqrt p) W(p / X) with ratios at each decade.

    A window other than the sharp cut-off on [0, 1] is evaluated at every
    decade by rescaling, so its support may extend past X.
    """
    window = window or SmoothWindow.sharp()
    t0 = time.perf_counter()
    top = int(math.floor(window.r * X))
    t = prime_table(top, cache)
    p = t.p.astype(np.float64)
    terms = t.s_p / (2 * np.sqrt(p))
    errs = t.err
    observed, predicted, ratio, err, prov = {}, {}, {}, {}, {}
    for d in _decades(X):
        w = window(p / d)
        key = str(d)
        obs = math.fsum((terms * w).tolist())
        pred, formula = patterson_predicted(d, window)
        observed[key] = obs
        predicted[key] = pred
        ratio[key] = obs / pred
        err[key] = math.fsum((errs * np.abs(w)).tolist()) + len(t) * EPS
        prov[key] = formula
    params = {"X": X, "window": window.kind, "l": window.l, "r": window.r}
    return ExperimentReport("patterson", params, observed, predicted, ratio, err, prov,
                            time.perf_counter() - t0)


def patterson_bruteforce(X: int, window: SmoothWindow | None = None) -> float:
    """The same sum with S_p from the defining exponential sum, term by term."""
    window = window or SmoothWindow.sharp()
    total = 0.0
    for p in primes_upto(int(window.r * X)).tolist():
        if p % 3 != 1:
            continue
        s = sum(cmath.exp(2j * math.pi * (n**3 % p) / p) for n in range(p))
        total += s.real / (2 * math.sqrt(p)) * float(window(p / X))
    return total


# -- power sums ------------------------------------------------------------

def _primes_with_values(hi: int, cache=None):
    vals = prime_value_map(hi, cache)
    keys = sorted(vals, key=lambda ab: (ab[0] ** 2 - ab[0] * ab[1] + ab[1] ** 2, ab))
    return keys, vals


def power_sum_k(k: int, X: int, window: SmoothWindow | None = None,
                cache=None) -> ExperimentReport:
    """sum over all primary primes pi of g~(pi)^k W(N(pi) / X).

    Both conjugates of every split prime and the inert primes -q are
    included. For k = 0 mod 3 the sum is also formed from g~^3 = -pi/|pi|
    and the two evaluations are reported side by side.
    """
    if k == 0:
        raise ValueError("k = 0 is the prime counting function")
    window = window or SmoothWindow.sharp()
    t0 = time.perf_counter()
    keys, vals = _primes_with_values(int(math.floor(window.r * X)), cache)
    re_terms, im_terms, re_alt, im_alt = [], [], [], []
    err = 0.0
    for a, b in keys:
        n = a * a - a * b + b * b
        w = float(window(n / X))
        if w == 0.0:
            continue
        g, e = vals[(a, b)]
        z = g**k * w
        re_terms.append(z.real)
        im_terms.append(z.imag)
        err += abs(k) * e * w + abs(k) * EPS
        if k % 3 == 0:
            u = -complex(a - b / 2, b * math.sqrt(3) / 2) / math.sqrt(n)
            y = u ** (k // 3) * w
            re_alt.append(y.real)
            im_alt.append(y.imag)
    total = complex(math.fsum(re_terms), math.fsum(im_terms))
    scale = X ** (5 / 6) / math.log(X)
    observed = {"sum": total, "normalized": abs(total) / scale}
    if k % 3 == 0:
        observed["sum_via_cube"] = complex(math.fsum(re_alt), math.fsum(im_alt))
    params = {"k": k, "X": X, "window": window.kind, "l": window.l, "r": window.r}
    return ExperimentReport("powersum", params, observed, {}, {}, {"sum": err}, {},
                            time.perf_counter() - t0)


# -- Type-I sums -----------------------------------------------------------

def _unit_power(u: EisensteinInt, ell: int) -> complex:
    if ell == 0:
        return 1.0 + 0j
    z = complex(u)
    return (z / abs(z)) ** ell


def type1_predicted(r: EisensteinInt, U: float, window: SmoothWindow) -> float:
    """c N(r)^{-1/6} sum_{(u, r) = 1} mu^2(u) N(u)^{-1/6} W(N(u) / U)."""
    c = constants().c_smooth
    terms = []
    for u in squarefree_primary(window.l * U, window.r * U):
        if symbol_exponent((u.a, u.b), (r.a, r.b)) is None:
            continue
        n = u.norm()
        terms.append(n ** (-1 / 6) * float(window(n / U)))
    return c * r.norm() ** (-1 / 6) * math.fsum(terms)


def type1_sum(r, ell: int, U: float, window: SmoothWindow | None = None,
              cache=None, bruteforce: bool = False) -> ExperimentReport:
    """sum_u g~(u r) (u/|u|)^ell W(N(u) / U) over primary u.

    With ``bruteforce`` every g~(ur) is a direct residue-class sum; otherwise
    it is assembled from prime values by twisted multiplicativity.
    """
    r = EisensteinInt.coerce(r)
    if not r.is_primary() or not is_squarefree(r):
        raise ValueError(f"{r} must be squarefree primary")
    window = window or SmoothWindow.bump(1.0, 2.0)
    t0 = time.perf_counter()
    nr = r.norm()
    lo, hi = window.l * U, window.r * U
    vals = None if bruteforce else prime_value_map(int(math.floor(hi * nr)), cache)
    a, b, n = primary_arrays(int(math.floor(lo)), int(math.floor(hi)))
    re_t, im_t = [], []
    err = 0.0
    for x, y, nu in zip(a.tolist(), b.tolist(), n.tolist()):
        w = float(window(nu / U))
        if w == 0.0:
            continue
        u = EI(x, y)
        ur = u * r
        if bruteforce:
            g = gauss_sum_direct(ur, budget=max(10**6, ur.norm()))
        else:
            fac = factor(ur)
            if not fac.is_squarefree():
                continue
            g = gtilde(ur, vals, fac)
        z = g.value * _unit_power(u, ell) * w
        re_t.append(z.real)
        im_t.append(z.imag)
        err += g.err_bound * w
    obs = complex(math.fsum(re_t), math.fsum(im_t))
    pred = type1_predicted(r, U, window)
    formula = ("(2 pi)^(2/3) / (3 Gamma(2/3)) N(r)^(-1/6) "
               "sum_{(u,r)=1} mu^2(u) N(u)^(-1/6) W(N(u)/U); main term present only for ell = 0")
    params = {"r": str(r), "ell": ell, "U": U, "window": window.kind,
              "l": window.l, "r_window": window.r}
    return ExperimentReport(
        "type1", params, {"sum": obs}, {"main_term_ell0": pred},
        {"sum": obs.real / pred, "abs": abs(obs) / pred}, {"sum": err},
        {"main_term_ell0": formula}, time.perf_counter() - t0)


# -- cubic large sieve -------------------------------------------------------

def symbol_matrix(rows: list[EisensteinInt], bx: np.ndarray, by: np.ndarray) -> np.ndarray:
    """M[i, j] = (b_j / a_i)_3 as complex numbers (0 when not coprime)."""
    m = np.empty((len(rows), bx.shape[0]), dtype=np.complex128)
    for i, a in enumerate(rows):
        e = symbol_exponents(bx, by, a)
        m[i] = np.where(e < 0, 0.0, OMEGA_POWERS[np.maximum(e, 0)])
    return m


def _check_side(n: int, what: str):
    if n > SIDE_LIMIT:
        raise ValueError(f"{what} has {n} elements, above the budget {SIDE_LIMIT}")


def large_sieve_form(A: float, B: float, beta: SieveSequence) -> float:
    """Sigma(A, B, beta) = sum_{A < N(a) <= 2A} mu^2(a) |sum_b beta_b (b/a)_3|^2."""
    rows = squarefree_primary(A, 2 * A)
    _check_side(len(rows), "the a-range")
    _check_side(len(beta), "the support of beta")
    if not len(beta):
        return 0.0
    bx, by = beta.coords()
    total = []
    for start in range(0, len(rows), 512):
        m = symbol_matrix(rows[start:start + 512], bx, by)
        total.extend((np.abs(m @ beta.values) ** 2).tolist())
    return math.fsum(total)


def gram_matrix(A: float, B: float) -> np.ndarray:
    """G[b1, b2] = sum_a mu^2(a) (b1/a)_3 conj((b2/a)_3)."""
    rows = squarefree_primary(A, 2 * A)
    cols = squarefree_primary(B, 2 * B)
    bx = np.array([b.a for b in cols], dtype=np.int64)
    by = np.array([b.b for b in cols], dtype=np.int64)
    m = symbol_matrix(rows, bx, by)
    return m.T @ m.conj()


@dataclass
class OperatorNorm:
    value: float
    rayleigh: list
    residual: float
    iterations: int
    dimension: tuple


def _start_vector(n: int) -> np.ndarray:
    j = np.arange(n, dtype=np.float64)
    v = (1.0 + 0.25 * np.cos(j) + 0.125j * np.sin(0.5 * j)).astype(np.complex128)
    return v / np.linalg.norm(v)


def operator_norm(A: float, B: float, iters: int = 20000, tol: float = 1e-12) -> OperatorNorm:
    """Largest eigenvalue of the Gram matrix on squarefree b in (B, 2B].

    Power iteration from a fixed start vector. Stops once successive
    Rayleigh quotients agree to ``tol`` relatively and the residual
    |G v - rho v| is below sqrt(tol) rho. The Gram matrix is stored when the
    dimension is at most GRAM_LIMIT; otherwise symbols are recomputed on
    every application.
    """
    rows = squarefree_primary(A, 2 * A)
    cols = squarefree_primary(B, 2 * B)
    _check_side(len(rows), "the a-range")
    _check_side(len(cols), "the b-range")
    n = len(cols)
    if n == 0 or not rows:
        return OperatorNorm(0.0, [0.0], 0.0, 0, (len(rows), n))
    bx = np.array([b.a for b in cols], dtype=np.int64)
    by = np.array([b.b for b in cols], dtype=np.int64)
    if n <= GRAM_LIMIT:
        m = symbol_matrix(rows, bx, by)
        g = m.T @ m.conj()

        def apply(v):
            return g @ v
    else:
        def apply(v):
            out = np.zeros(n, dtype=np.complex128)
            for s in range(0, len(rows), 256):
                m = symbol_matrix(rows[s:s + 256], bx, by)
                out += m.T @ (m.conj() @ v)
            return out
    v = _start_vector(n)
    history: list[float] = []
    gv = apply(v)
    for it in range(1, iters + 1):
        rho = float(np.vdot(v, gv).real)
        history.append(rho)
        res = float(np.linalg.norm(gv - rho * v))
        if len(history) > 1 and abs(rho - history[-2]) <= tol * rho and res <= math.sqrt(tol) * rho:
            return OperatorNorm(rho, history, res, it, (len(rows), n))
        v = gv / np.linalg.norm(gv)
        gv = apply(v)
    last = history[-2:] if len(history) > 1 else history
    raise ArithmeticError(
        f"power iteration did not converge in {iters} steps; last Rayleigh quotients {last}")


def gtilde_witness(B: float, window: SmoothWindow | None = None, conj: bool = True,
                   cache=None) -> SieveSequence:
    """beta_b = conj(g~(b)) W(N(b) / B) (or without the conjugate)."""
    window = window or SmoothWindow.bump(1.0, 2.0)
    lo, hi = window.l * B, window.r * B
    vals = prime_value_map(int(math.floor(hi)), cache)
    supp, coef = [], []
    for b in squarefree_primary(lo, hi):
        w = float(window(b.norm() / B))
        if w == 0.0:
            continue
        g = gtilde(b, vals).value
        supp.append(b)
        coef.append((g.conjugate() if conj else g) * w)
    return SieveSequence(supp, np.array(coef, dtype=np.complex128), (lo, hi))


@dataclass
class SharpnessReport:
    Ns: list
    values: list
    norms2: list
    supports: list
    slope: float
    intercept: float


def sharpness_probe(Ns, window: SmoothWindow | None = None, cache=None) -> SharpnessReport:
    """Least-squares slope of log(Sigma(N, N, beta) / |beta|^2) against log(N^2).

    beta_b = conj(g~(b)) W(N(b)/N). The default W is the indicator of (1, 2],
    which keeps beta inside the dyadic range and unimodular on its support.
    """
    window = window or SmoothWindow.sharp(1.0, 2.0)
    Ns = list(Ns)
    vals_map = prime_value_map(int(math.floor(window.r * max(Ns))), cache)
    values, norms, sizes = [], [], []
    for N in Ns:
        supp, coef = [], []
        for b in squarefree_primary(window.l * N, window.r * N):
            w = float(window(b.norm() / N))
            if w:
                supp.append(b)
                coef.append(gtilde(b, vals_map).value.conjugate() * w)
        beta = SieveSequence(supp, np.array(coef), (window.l * N, window.r * N))
        s = large_sieve_form(N, N, beta)
        values.append(s / beta.norm2())
        norms.append(beta.norm2())
        sizes.append(len(beta))
    x = np.log(np.array(Ns, dtype=np.float64) ** 2)
    slope, intercept = np.polyfit(x, np.log(values), 1)
    return SharpnessReport(Ns, values, norms, sizes, float(slope), float(intercept))


def corrected_sieve_sum(A: float, B: float, beta: SieveSequence,
                        window: SmoothWindow | None = None, cache=None) -> tuple[float, float]:
    """(corrected, uncorrected) weighted large sieve sums with the g~ twist.

    uncorrected = sum_a mu^2(a) V(N(a)/A) |sum_b beta_b g~(b) conj((b/a)_3)|^2,
    corrected subtracts c conj(g~(a)) N(a)^{-1/6} sum_{(b,a)=1} beta_b N(b)^{-1/6}
    inside the square.
    """
    V = window or SmoothWindow.bump(1.0, 2.0)
    rows = [a for a in squarefree_primary(V.l * A, V.r * A) if V(a.norm() / A) > 0]
    _check_side(len(rows), "the a-range")
    if not len(beta) or not rows:
        return 0.0, 0.0
    hi = max(max(a.norm() for a in rows), max(b.norm() for b in beta.support))
    vals = prime_value_map(hi, cache)
    bx, by = beta.coords()
    gb = np.array([gtilde(b, vals).value for b in beta.support])
    nb = beta.norms() ** (-1 / 6)
    c = constants().c_smooth
    corr_terms, unc_terms = [], []
    for s in range(0, len(rows), 512):
        chunk = rows[s:s + 512]
        m = symbol_matrix(chunk, bx, by)
        inner = m.conj() @ (beta.values * gb)
        coprime = (m != 0).astype(np.float64)
        ga = np.array([gtilde(a, vals).value for a in chunk])
        na = np.array([a.norm() for a in chunk], dtype=np.float64)
        corr = c * ga.conj() * na ** (-1 / 6) * (coprime @ (beta.values * nb))
        wa = V(na / A)
        unc_terms.extend((wa * np.abs(inner) ** 2).tolist())
        corr_terms.extend((wa * np.abs(inner - corr) ** 2).tolist())
    return math.fsum(corr_terms), math.fsum(unc_terms)


def sequence_diagnostic(beta: SieveSequence, k, ell: int = 0, t: float = 0.0, u=1) -> complex:
    """sum_{u | a} alpha_a (a/|a|)^ell N(a)^{it} (k/a)_3 over the support."""
    k = EisensteinInt.coerce(k)
    u = EisensteinInt.coerce(u)
    total = 0j
    for a, alpha in zip(beta.support, beta.values.tolist()):
        if u.norm() > 1 and not _divides(u, a):
            continue
        e = symbol_exponent((k.a, k.b), (a.a, a.b))
        if e is None:
            continue
        n = a.norm()
        total += alpha * _unit_power(a, ell) * cmath.exp(1j * t * math.log(n)) * OMEGA_POWERS[e]
    return total


def _divides(u: EisensteinInt, a: EisensteinInt) -> bool:
    # a / u = a conj(u) / N(u)
    n = u.norm()
    p = a * u.conj()
    return p.a % n == 0 and p.b % n == 0


# -- combinatorial identity ------------------------------------------------

class _Series:
    """Dirichlet series over primary elements with norm <= cap, exact coefficients."""

    def __init__(self, cap: int, coef: dict | None = None):
        self.cap = cap
        self.coef: dict = coef or {}

    def __sub__(self, other: "_Series") -> "_Series":
        out = dict(self.coef)
        for k, v in other.coef.items():
            out[k] = out.get(k, 0) - v
        return _Series(self.cap, {k: v for k, v in out.items() if v})

    def scale(self, s) -> "_Series":
        return _Series(self.cap, {k: v * s for k, v in self.coef.items()})

    def __add__(self, other: "_Series") -> "_Series":
        return self - other.scale(-1)

    def __mul__(self, other: "_Series") -> "_Series":
        out: dict = {}
        right = sorted(other.coef.items(), key=lambda kv: _norm(kv[0]))
        for (xa, xb), xv in self.coef.items():
            nx = _norm((xa, xb))
            for (ya, yb), yv in right:
                if nx * _norm((ya, yb)) > self.cap:
                    break
                key = (xa * ya - xb * yb, xa * yb + xb * ya - xb * yb)
                out[key] = out.get(key, 0) + xv * yv
        return _Series(self.cap, {k: v for k, v in out.items() if v})


def _norm(ab: tuple[int, int]) -> int:
    a, b = ab
    return a * a - a * b + b * b


@dataclass
class CombCheck:
    max_discrepancy: Fraction
    worst: tuple | None
    n_checked: int
    nonzero: int
    lhs: dict
    rhs: dict


def comb_identity_check(Nmax: int, w: float, z: float, literal: bool = False) -> CombCheck:
    """Exact coefficient comparison of the prime-power expansion of log zeta_{>z}.

    Left side: 1/L on pi^L for primary primes with N(pi) > z. Right side:
    the k-fold sum over distinct primes with w < N <= z times a w-rough
    cofactor c, minus (zeta_{>z} - 1)^2 / 2, plus the terms j >= 3 of the
    logarithm series. The k-fold sum omits the single pair k = 0, c = 1,
    which is exactly the constant 1 removed from zeta_{>z}. ``literal``
    instead drops c = 1 for every k, which breaks the identity at products
    of primes in (w, z].
    """
    if not (w < z <= Nmax):
        raise ValueError("need w < z <= Nmax")
    a, b, n = primary_arrays(0, Nmax)
    elems = [(x, y) for x, y in zip(a.tolist(), b.tolist())]
    primes = primary_primes(0, Nmax)
    pnorm = {(p.a, p.b): p.norm() for p in primes}
    # smallest prime-factor norm of each element, by factoring once
    min_norm = {}
    for x, y in elems:
        if (x, y) == (1, 0):
            continue
        min_norm[(x, y)] = min(q.norm() for q in factor(EI(x, y)).primes)

    lhs: dict = {}
    for (pa, pb), pn in pnorm.items():
        if pn <= z:
            continue
        L, q, qn = 1, (pa, pb), pn
        while qn <= Nmax:
            lhs[q] = Fraction(1, L)
            L += 1
            q = (q[0] * pa - q[1] * pb, q[0] * pb + q[1] * pa - q[1] * pb)
            qn *= pn

    rough_w = {e: Fraction(1) for e in elems if e == (1, 0) or min_norm[e] > w}
    mids = sorted((k for k, v in pnorm.items() if w < v <= z), key=lambda k: (pnorm[k], k))
    ksum: dict = {}
    # subsets of distinct medium primes, each with sign (-1)^k (k! orderings / k!)
    stack = [((1, 0), 1, 0, 0)]
    while stack:
        prod, pn, start, k = stack.pop()
        for (cx, cy), cv in rough_w.items():
            if (cx, cy) == (1, 0) and (k == 0 or literal):
                continue
            if pn * _norm((cx, cy)) > Nmax:
                continue
            key = (prod[0] * cx - prod[1] * cy, prod[0] * cy + prod[1] * cx - prod[1] * cy)
            ksum[key] = ksum.get(key, 0) + (-1) ** k * cv
        for i in range(start, len(mids)):
            q = mids[i]
            qn = pnorm[q]
            if pn * qn > Nmax:
                continue
            nxt = (prod[0] * q[0] - prod[1] * q[1], prod[0] * q[1] + prod[1] * q[0] - prod[1] * q[1])
            stack.append((nxt, pn * qn, i + 1, k + 1))

    zeta_z1 = _Series(Nmax, {e: Fraction(1) for e in elems if e != (1, 0) and min_norm[e] > z})
    rhs = _Series(Nmax, {k: v for k, v in ksum.items() if v})
    power = zeta_z1
    j = 1
    while power.coef:
        j += 1
        power = power * zeta_z1
        rhs = rhs + power.scale(Fraction((-1) ** (j + 1), j))

    worst, maxd, nonzero = None, Fraction(0), 0
    for e in elems:
        d = abs(lhs.get(e, Fraction(0)) - rhs.coef.get(e, Fraction(0)))
        if d:
            nonzero += 1
        if d > maxd:
            maxd, worst = d, e
    return CombCheck(maxd, worst, len(elems), nonzero, lhs, rhs.coef)


__all__ = [
    "CombCheck",
    "ExperimentReport",
    "OperatorNorm",
    "SharpnessReport",
    "SieveSequence",
    "comb_identity_check",
    "corrected_sieve_sum",
    "gram_matrix",
    "gtilde_witness",
    "kummer_histogram",
    "large_sieve_form",
    "operator_norm",
    "patterson_bruteforce",
    "patterson_sum",
    "power_sum_k",
    "prime_table",
    "prime_value_map",
    "sequence_diagnostic",
    "sharpness_probe",
    "squarefree_primary",
    "symbol_matrix",
    "type1_sum",
]
