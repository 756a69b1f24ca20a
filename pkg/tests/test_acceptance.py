"""The ten acceptance criteria at their stated sizes and tolerances.

Each test records one PASS/FAIL line, printed in the terminal summary.
Criteria that are not met at these sizes stay failing and are marked as
strict expected failures, so a change that makes them pass is reported.
"""

import math
import random
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE
from cubicgauss.analytic import (
    SmoothWindow,
    character_pair_table,
    dedekind_zeta_partial,
    poisson_radial_check,
    poisson_twisted_check,
    sieve_weights,
)
from cubicgauss.eisenstein import (
    EI,
    LAMBDA,
    OMEGA,
    factor,
    is_rough,
    mobius,
    primary_arrays,
    split_rational_prime,
)
from cubicgauss.experiments import (
    comb_identity_check,
    gram_matrix,
    kummer_histogram,
    operator_norm,
    patterson_bruteforce,
    patterson_sum,
    sharpness_probe,
    squarefree_primary,
    type1_sum,
)
from cubicgauss.gauss import gauss_sum_direct, gtilde, gtilde_prime
from cubicgauss.primes import primes_1_mod_3
from cubicgauss.store import GaussCache
from cubicgauss.symbol import CubicValue, cubic_symbol, supplement_exponents, symbol_by_factoring
from oracles import cubic_sum

pytestmark = pytest.mark.slow

pi7 = EI(1, 3)


@pytest.fixture
def verdict(request):
    def record(n, ok, detail, runtime):
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}  [{runtime:.1f}s]"
        print(line)
        request.config.stash[ACCEPTANCE][n] = line
        assert ok, line
    return record


@pytest.fixture(scope="module")
def sweep(tmp_path_factory):
    """Gauss sum cache filled once up to 10^6; the fill time is the fast-path sweep time."""
    cache = GaussCache(tmp_path_factory.mktemp("sweep") / "gauss.csv")
    t0 = time.perf_counter()
    cache.ensure(10**6)
    return cache, time.perf_counter() - t0


def random_primary(rng, bound, maxnorm):
    while True:
        c = EI(3 * rng.randint(-bound, bound) + 1, 3 * rng.randint(-bound, bound))
        if 0 < c.norm() <= maxnorm:
            return c


def test_criterion_01_algebraic_identities(verdict):
    t0 = time.perf_counter()
    cube = 0.0
    for c in squarefree_primary(0, 10**4):
        g = gauss_sum_direct(c).value
        z = complex(c)
        cube = max(cube, abs(g**3 - mobius(c) * z / abs(z)))
    rng = random.Random(11)
    small = squarefree_primary(1, 10**5 // 7)
    tw, pairs = 0.0, 0
    while pairs < 1000:
        a = rng.choice(small)
        cap = 10**5 // a.norm()
        if cap < 7:
            continue
        b = random_primary(rng, math.isqrt(cap) // 2 + 1, cap)
        if b.norm() == 1 or not factor(b).is_squarefree():
            continue
        s = cubic_symbol(a, b)
        if s is CubicValue.ZERO:
            continue
        lhs = gauss_sum_direct(a * b).value
        rhs = complex(s).conjugate() * gtilde(a).value * gtilde(b).value
        tw = max(tw, abs(lhs - rhs))
        pairs += 1
    dt = time.perf_counter() - t0
    ok = cube < 1e-8 and tw < 1e-9 and dt <= 120
    verdict(1, ok, f"cube relation max err {cube:.1e}; twisted multiplicativity max err "
                   f"{tw:.1e} on {pairs} pairs", dt)


def test_criterion_02_symbols(verdict):
    t0 = time.perf_counter()
    rng = random.Random(12)
    mism = 0
    for _ in range(10**4):
        b = random_primary(rng, 340, 10**6)
        a = EI(rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6))
        mism += cubic_symbol(a, b) != symbol_by_factoring(a, b)
    recip = supp = 0
    for _ in range(1000):
        a = random_primary(rng, 300, 10**6)
        b = random_primary(rng, 300, 10**6)
        recip += cubic_symbol(a, b) != cubic_symbol(b, a)
        a2, a3 = supplement_exponents(a)
        supp += symbol_by_factoring(OMEGA, a) is not CubicValue.from_exponent(a2)
        supp += symbol_by_factoring(LAMBDA, a) is not CubicValue.from_exponent(-a3)
    dt = time.perf_counter() - t0
    ok = mism == 0 and recip == 0 and supp == 0 and dt <= 60
    verdict(2, ok, f"oracle mismatches {mism}/10000; reciprocity {recip}/1000; "
                   f"supplements {supp}/2000", dt)


def test_criterion_03_sp_identity(verdict):
    t0 = time.perf_counter()
    worst = 0.0
    for p in primes_1_mod_3(0, 10**4).tolist():
        pi, _ = split_rational_prime(p)
        err = abs(cubic_sum(p) - 2 * math.sqrt(p) * gtilde_prime(pi).value.real) / math.sqrt(p)
        worst = max(worst, err)
    dt = time.perf_counter() - t0
    verdict(3, worst < 1e-6 and dt <= 60, f"max |S_p - 2 sqrt(p) Re g~| / sqrt(p) = {worst:.1e}", dt)


@pytest.mark.xfail(strict=True, reason="at X = 10^6 the frequencies are 0.392/0.329/0.279; "
                   "I1 and I3 lie outside [0.31, 0.36]")
def test_criterion_04_kummer(verdict, sweep):
    cache, fill = sweep
    t0 = time.perf_counter()
    small = kummer_histogram(500).observed
    big = kummer_histogram(10**6, cache=cache).observed
    dt = time.perf_counter() - t0 + fill
    order = small["count_I1"] > small["count_I2"] > small["count_I3"]
    freqs = [big[f"freq_I{i}"] for i in (1, 2, 3)]
    band = all(0.31 <= f <= 0.36 for f in freqs)
    largest = freqs[0] == max(freqs)
    ok = order and band and largest and dt <= 120
    verdict(4, ok, f"X=500 counts {small['count_I1']}/{small['count_I2']}/{small['count_I3']}; "
                   f"X=10^6 freqs {freqs[0]:.4f}/{freqs[1]:.4f}/{freqs[2]:.4f} "
                   f"(band {'ok' if band else 'missed'}, I1 largest {largest})", dt)


def test_criterion_05_patterson(verdict, sweep):
    cache, _ = sweep
    t0 = time.perf_counter()
    rep = patterson_sum(10**6, cache=cache)
    r = rep.ratio
    pos = all(r[str(10**k)] > 0 for k in (4, 5, 6))
    band = 0.3 <= r[str(10**6)] <= 2.0
    brute = abs(patterson_sum(100).observed["100"] - patterson_bruteforce(100))
    dt = time.perf_counter() - t0
    ok = pos and band and brute < 1e-12
    verdict(5, ok, f"ratios 10^4: {r['10000']:.3f}, 10^5: {r['100000']:.3f}, "
                   f"10^6: {r['1000000']:.3f}; brute force at 10^2 differs by {brute:.1e}", dt)


def test_criterion_06_poisson(verdict):
    t0 = time.perf_counter()
    V = SmoothWindow.bump(1.0, 2.0)
    worst = 0.0
    for M in (1e3, 1e4):
        for n1, n2 in ((1, 1), (pi7, 1), (pi7, pi7)):
            q, psi = character_pair_table(n1, n2)
            for chk in (poisson_radial_check(psi, q, V, M), poisson_twisted_check(n1, n2, V, M)):
                worst = max(worst, abs(chk.lhs - chk.rhs) / abs(chk.lhs))
    dt = time.perf_counter() - t0
    verdict(6, worst < 1e-6 and dt <= 60, f"max relative discrepancy {worst:.1e} over 12 checks", dt)


@pytest.mark.xfail(strict=True, reason="fitted sharpness slope is 0.598 over 2^7..2^11, "
                   "just below the 0.60 floor")
def test_criterion_07_large_sieve(verdict):
    t0 = time.perf_counter()
    dual = abs(operator_norm(16, 32).value - operator_norm(32, 16).value)
    eig = 0.0
    for A, B in ((16, 16), (16, 32), (32, 16), (32, 32)):
        g = gram_matrix(A, B)
        assert g.shape[0] <= 64
        ev = np.linalg.eigvalsh(g).max()
        eig = max(eig, abs(operator_norm(A, B).value - ev) / ev)
    sh = sharpness_probe([2**k for k in range(7, 12)])
    dt = time.perf_counter() - t0
    slope_ok = 0.60 <= sh.slope <= 0.75
    ok = dual < 1e-6 and eig < 1e-6 and slope_ok and dt <= 600
    verdict(7, ok, f"duality diff {dual:.1e}; power vs eigh {eig:.1e}; "
                   f"sharpness slope {sh.slope:.4f} ({'in' if slope_ok else 'outside'} [0.60, 0.75])",
            dt)


def test_criterion_08_type1(verdict):
    t0 = time.perf_counter()
    main = type1_sum(1, 0, 1e5)
    twist = type1_sum(1, 5, 1e5)
    dt = time.perf_counter() - t0
    ratio = main.ratio["sum"]
    rel = abs(twist.observed["sum"]) / main.predicted["main_term_ell0"]
    ok = 0.7 <= ratio <= 1.3 and rel <= 0.2 and dt <= 300
    verdict(8, ok, f"ell=0 ratio {ratio:.4f}; |ell=5 sum| / ell=0 prediction {rel:.4f}", dt)


def test_criterion_09_comb_identity(verdict):
    t0 = time.perf_counter()
    r = comb_identity_check(10**4, 10, 50)
    dt = time.perf_counter() - t0
    verdict(9, r.max_discrepancy == 0 and dt <= 60,
            f"max coefficient discrepancy {r.max_discrepancy} over {r.n_checked} elements", dt)


def test_criterion_10_sieve_weights(verdict):
    t0 = time.perf_counter()
    rng = random.Random(10)
    a, b, _ = primary_arrays(0, 10**6)
    idx = rng.sample(range(a.size), 1000)
    sample = [EI(int(a[i]), int(b[i])) for i in idx]
    rough = sieve_weights(100.0, "rough")
    sqf = sieve_weights(100.0, "squarefree")
    lam1 = rough[1] == 1.0 and sqf[1] == 1.0
    bad = 0
    for n in sample:
        bad += (1.0 if is_rough(n, rough.w) else 0.0) > rough.majorant_rough(n) + 1e-12
        bad += (1.0 if factor(n).is_squarefree() else 0.0) > sqf.majorant_squarefree(n) + 1e-12
    target = 1 / dedekind_zeta_partial(2, pi7)
    gaps = {}
    for y in (1e2, 1e3):
        s = sieve_weights(y, "squarefree").dual_sum(2.0, coprime_to=pi7)
        gaps[y] = (abs(s - target), 5 * y**-0.5)
    dt = time.perf_counter() - t0
    ok = lam1 and bad == 0 and all(g <= band for g, band in gaps.values()) and dt <= 60
    verdict(10, ok, f"lambda_1 = 1: {lam1}; majorant violations {bad}/2000; dual sum gaps "
                    + ", ".join(f"y={int(y)}: {g:.1e} (band {band:.2e})" for y, (g, band) in gaps.items()),
            dt)
