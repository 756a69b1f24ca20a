import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicgauss.analytic import SmoothWindow, constants
from cubicgauss.eisenstein import EI
from cubicgauss.experiments import (
    ExperimentReport,
    SieveSequence,
    comb_identity_check,
    corrected_sieve_sum,
    gram_matrix,
    gtilde_witness,
    kummer_histogram,
    kummer_interval,
    large_sieve_form,
    operator_norm,
    patterson_bruteforce,
    patterson_sum,
    power_sum_k,
    sequence_diagnostic,
    sharpness_probe,
    squarefree_primary,
    type1_sum,
)
from cubicgauss.gauss import gauss_sum_direct
from cubicgauss.symbol import symbol_by_factoring

KAPPA = 0.3  # measured once: max B(A,B) / (A + B + (AB)^(2/3)) = 0.258 over A, B in {16..128}


# -- reports and sequences -----------------------------------------------------

def test_report_requires_provenance():
    with pytest.raises(ValueError):
        ExperimentReport("x", {}, {}, {"a": 1.0}, {}, {}, {})


def test_sieve_sequence_validation():
    with pytest.raises(ValueError):
        SieveSequence([EI(1, 3), EI(1, 3)], [1, 1])
    with pytest.raises(ValueError):
        SieveSequence([EI(1, 3)], [math.inf])
    with pytest.raises(ValueError):
        SieveSequence([EI(1, 3) * EI(1, 3)], [1])
    with pytest.raises(ValueError):
        SieveSequence([EI(2, 3)], [1])
    s = SieveSequence([EI(1, 3), EI(-2, 0)], [1, 1j])
    assert s.norm2() == 2 and len(s) == 2


# -- Kummer ----------------------------------------------------------------------

def test_kummer_intervals():
    assert kummer_interval(1.0) == 0 and kummer_interval(0.5) == 0
    assert kummer_interval(0.49) == 1 and kummer_interval(-0.5) == 1
    assert kummer_interval(-0.51) == 2 and kummer_interval(-1.0) == 2


def test_kummer_seven():
    r = kummer_histogram(7)
    assert r.observed["total"] == 1 and r.observed["count_I1"] == 1
    assert r.rows[0]["cos"] == pytest.approx(0.896, abs=1e-3)
    with pytest.raises(ValueError):
        kummer_histogram(5)


def test_kummer_500():
    o = kummer_histogram(500).observed
    assert o["count_I1"] > o["count_I2"] > o["count_I3"]
    assert o["count_I1"] + o["count_I2"] + o["count_I3"] == o["total"] == 45


# -- Patterson ---------------------------------------------------------------------

def test_patterson_small_bruteforce():
    r = patterson_sum(100)
    assert r.observed["100"] == pytest.approx(patterson_bruteforce(100), abs=1e-12)
    w = SmoothWindow.bump(0.5, 1.5)
    r = patterson_sum(100, w)
    assert r.observed["100"] == pytest.approx(patterson_bruteforce(100, w), abs=1e-12)


def test_patterson_reports_decades():
    r = patterson_sum(10**4)
    assert set(r.observed) == {"10", "100", "1000", "10000"}
    for k in r.predicted:
        assert r.provenance[k]
        assert r.ratio[k] == pytest.approx(r.observed[k] / r.predicted[k])
    assert r.ratio["10000"] > 0


def test_patterson_smooth_sharp_limit():
    c = constants()
    assert c.c_smooth * 6 / 5 == pytest.approx(c.c_sharp, rel=1e-14)


# -- power sums ----------------------------------------------------------------------

def test_power_sum_cube_two_ways():
    r = power_sum_k(3, 10**4)
    assert abs(r.observed["sum"] - r.observed["sum_via_cube"]) < 1e-6


def test_power_sum_conjugate():
    a = power_sum_k(1, 10**4).observed["sum"]
    b = power_sum_k(-1, 10**4).observed["sum"]
    assert abs(a.conjugate() - b) < 1e-9


def test_power_sum_k2_smaller():
    a = power_sum_k(1, 10**5).observed["normalized"]
    b = power_sum_k(2, 10**5).observed["normalized"]
    assert b < a


def test_power_sum_rejects_zero():
    with pytest.raises(ValueError):
        power_sum_k(0, 100)


# -- Type-I -----------------------------------------------------------------------------

def test_type1_bruteforce():
    for r, ell in ((1, 0), (EI(1, 3), 0), (1, 2)):
        a = type1_sum(r, ell, 100).observed["sum"]
        b = type1_sum(r, ell, 100, bruteforce=True).observed["sum"]
        assert abs(a - b) < 1e-9


def test_type1_ratio_and_twist():
    r = type1_sum(1, 0, 10**4)
    assert 0.7 <= r.ratio["sum"] <= 1.3
    t = type1_sum(1, 5, 10**4)
    assert abs(t.observed["sum"]) <= 0.2 * t.predicted["main_term_ell0"]


def test_type1_rejects_nonsquarefree():
    with pytest.raises(ValueError):
        type1_sum(EI(1, 3) * EI(1, 3), 0, 10)


# -- large sieve ---------------------------------------------------------------------------

def brute_form(A, B, beta):
    total = 0.0
    for a in squarefree_primary(A, 2 * A):
        inner = 0j
        for b, v in zip(beta.support, beta.values):
            inner += v * complex(symbol_by_factoring(b, a))
        total += abs(inner) ** 2
    return total


def random_beta(B, seed):
    rng = np.random.default_rng(seed)
    bs = squarefree_primary(B, 2 * B)
    return SieveSequence(bs, rng.normal(size=len(bs)) + 1j * rng.normal(size=len(bs)))


def test_form_singleton():
    b0 = EI(1, 3)
    beta = SieveSequence([b0], [1.0])
    rows = squarefree_primary(40, 80)
    coprime = sum(1 for a in rows if complex(symbol_by_factoring(b0, a)) != 0)
    assert large_sieve_form(40, 80, beta) == pytest.approx(coprime, abs=1e-9)


def test_form_against_gram_and_bruteforce():
    beta = random_beta(64, 0)
    g = gram_matrix(64, 64)
    v = beta.values
    via_gram = float((v @ g @ v.conj()).real)
    s = large_sieve_form(64, 64, beta)
    assert s == pytest.approx(via_gram, rel=1e-8)
    small = random_beta(16, 1)
    assert large_sieve_form(16, 16, small) == pytest.approx(brute_form(16, 16, small), rel=1e-10)


def test_power_iteration_matches_eigh():
    for A, B in ((16, 16), (32, 16), (16, 32), (8, 32)):
        g = gram_matrix(A, B)
        assert g.shape[0] <= 64
        ev = np.linalg.eigvalsh(g).max()
        assert operator_norm(A, B).value == pytest.approx(ev, rel=1e-6)


def test_duality():
    assert operator_norm(16, 32).value == pytest.approx(operator_norm(32, 16).value, rel=1e-6)


def test_large_a_regime():
    ratios = [operator_norm(A, 8).value / A for A in (2**9, 2**10)]
    assert all(0.2 <= r <= 0.5 for r in ratios)


def test_nonconvergence_raises():
    with pytest.raises(ArithmeticError):
        operator_norm(32, 32, iters=2, tol=1e-15)


@settings(max_examples=15)
@given(st.sampled_from([16, 32, 64]), st.sampled_from([16, 32, 64]), st.integers(0, 10**6))
def test_form_bounded_by_norm(A, B, seed):
    beta = random_beta(B, seed)
    s = large_sieve_form(A, B, beta)
    on = operator_norm(A, B).value
    assert 0 <= s <= on * beta.norm2() * (1 + 1e-9)
    assert s / beta.norm2() <= KAPPA * (A + B + (A * B) ** (2 / 3))


def test_witness_below_norm():
    w = gtilde_witness(32, SmoothWindow.sharp(1, 2))
    assert large_sieve_form(32, 32, w) / w.norm2() <= operator_norm(32, 32).value * (1 + 1e-9)


def test_sharpness_small():
    r = sharpness_probe([16, 32])
    assert r.norms2 == pytest.approx(r.supports, abs=1e-9)
    w = gtilde_witness(16, SmoothWindow.sharp(1, 2))
    assert r.values[0] == pytest.approx(brute_form(16, 16, w) / w.norm2(), rel=1e-10)


def test_corrected_singleton():
    b0 = EI(1, 3)
    beta = SieveSequence([b0], [1.0])
    V = SmoothWindow.bump(1, 2)
    corr, unc = corrected_sieve_sum(32, 8, beta, V)
    gb = gauss_sum_direct(b0).value
    c = constants().c_smooth
    bc, bu = 0.0, 0.0
    for a in squarefree_primary(32, 64):
        s = complex(symbol_by_factoring(b0, a))
        if s == 0:
            continue
        w = float(V(a.norm() / 32))
        inner = gb * s.conjugate()
        ga = gauss_sum_direct(a).value
        bu += w * abs(inner) ** 2
        bc += w * abs(inner - c * ga.conjugate() * a.norm() ** (-1 / 6) * 7 ** (-1 / 6)) ** 2
    assert corr == pytest.approx(bc, rel=1e-9)
    assert unc == pytest.approx(bu, rel=1e-9)
    assert corr >= 0 and unc >= 0


# -- diagnostics ---------------------------------------------------------------------------

def test_sequence_diagnostic():
    ps = squarefree_primary(50, 100)
    beta = SieveSequence(ps, np.ones(len(ps)))
    k = EI(2, 1) ** 3
    s = sequence_diagnostic(beta, k)
    assert s.real > 0 and abs(s.imag) < 1e-9
    k = EI(2, 5)
    s = sequence_diagnostic(beta, k, ell=2, t=0.3)
    assert abs(s) <= np.sum(np.abs(beta.values)) + 1e-12
    s1 = sequence_diagnostic(beta, k)
    s2 = sequence_diagnostic(beta, k.conj())
    assert abs(s1.conjugate() - s2) < 1e-9


# -- combinatorial identity -----------------------------------------------------------------

def test_comb_identity_small():
    r = comb_identity_check(4000, 10, 50)
    assert r.max_discrepancy == 0
    p = next(e for e, v in r.lhs.items() if v == 1 and e[0] ** 2 - e[0] * e[1] + e[1] ** 2 > 50)
    assert r.rhs[p] == 1
    sq = next(e for e, v in r.lhs.items() if v == Fraction(1, 2))
    assert r.rhs[sq] == Fraction(1, 2)


def test_comb_identity_literal_breaks():
    assert comb_identity_check(2000, 10, 50, literal=True).max_discrepancy == 1
