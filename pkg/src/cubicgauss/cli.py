"""Command-line entry point: ``python -m cubicgauss <command> ...``.

Every command calls one library function and prints its result; ``--out``
additionally writes the report as csv or json. Exit status is 0 on success,
2 on bad arguments and 1 when a numerical check fails.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np

from . import analytic, experiments, gauss
from .analytic import SmoothWindow
from .eisenstein import EisensteinInt, split_rational_prime
from .experiments import ExperimentReport
from .store import GaussCache, ReportEnvelope, export_table
from .symbol import cubic_symbol


def _ei(text: str) -> EisensteinInt:
    try:
        return EisensteinInt.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _window(kind: str, l: float | None, r: float | None) -> SmoothWindow:
    if kind == "sharp":
        return SmoothWindow.sharp(0.0 if l is None else l, 1.0 if r is None else r)
    return SmoothWindow.bump(1.0 if l is None else l, 2.0 if r is None else r)


def _add_window(p, default: str):
    p.add_argument("--window", choices=("sharp", "bump"), default=default)
    p.add_argument("--wl", type=float, default=None, help="left end of the window support")
    p.add_argument("--wr", type=float, default=None, help="right end of the window support")


def _cache(args) -> GaussCache | None:
    return GaussCache(args.cache) if args.use_cache else None


def _env(command: str, params: dict, results: dict, prov=(), wall=0.0) -> ReportEnvelope:
    return ReportEnvelope(command, params, results, list(prov), wall)


def _fmt(z) -> str:
    if isinstance(z, complex):
        return f"{z.real:.12g}{'+' if z.imag >= 0 else '-'}{abs(z.imag):.12g}j"
    if isinstance(z, float):
        return f"{z:.12g}"
    return str(z)


def _print_report(rep: ExperimentReport):
    for part in ("observed", "predicted", "ratio"):
        d = getattr(rep, part)
        if d:
            print(f"{part}:")
            for k, v in d.items():
                print(f"  {k} = {_fmt(v)}")


# -- commands ------------------------------------------------------------------

def cmd_split(args):
    pi, pib = split_rational_prime(args.p)
    print(pi, pib)
    return _env("split", {"p": args.p}, {"pi": str(pi), "pi_conj": str(pib)})


def cmd_symbol(args):
    v = cubic_symbol(args.a, args.b)
    print(v)
    return _env("symbol", {"a": str(args.a), "b": str(args.b)},
                {"value": str(v), "exponent": v.exponent})


def cmd_gauss(args):
    c = args.c
    if args.method == "direct":
        g = gauss.gauss_sum_direct(c)
    elif args.method == "prime":
        g = gauss.gtilde_prime(c)
    elif args.method == "cache":
        cache = GaussCache(args.cache)
        p = c.norm()
        rec_pi, rec_conj = split_rational_prime(p)
        if c not in (rec_pi, rec_conj):
            raise ValueError(f"{c} is not a primary prime above {p}")
        g = cache.get_or_compute(p)
        if c == rec_conj:
            g = gauss.GaussSumValue(g.value.conjugate(), p, g.provenance, g.err_bound)
    else:
        g = gauss.gtilde(c)
    print(_fmt(g.value))
    return _env("gauss", {"c": str(c), "method": args.method},
                {"value": g.value, "err_bound": g.err_bound}, [g.provenance])


def cmd_sp(args):
    s = gauss.kummer_sum_Sp(args.p)
    print(repr(s))
    return _env("sp", {"p": args.p}, {"S_p": s})


def cmd_kummer(args):
    rep = experiments.kummer_histogram(args.X, cache=_cache(args))
    for i, lab in enumerate(experiments.KUMMER_LABELS):
        print(f"{lab}: {rep.observed['count_' + lab]}  ({rep.observed['freq_' + lab]:.4f})")
    return rep


def cmd_patterson(args):
    rep = experiments.patterson_sum(args.X, _window(args.window, args.wl, args.wr),
                                    cache=_cache(args))
    _print_report(rep)
    return rep


def cmd_powersum(args):
    rep = experiments.power_sum_k(args.k, args.X, _window(args.window, args.wl, args.wr),
                                  cache=_cache(args))
    _print_report(rep)
    return rep


def cmd_type1(args):
    rep = experiments.type1_sum(args.r, args.ell, args.U, _window(args.window, args.wl, args.wr),
                                cache=_cache(args), bruteforce=args.bruteforce)
    _print_report(rep)
    return rep


def _beta(kind: str, B: float, seed: int) -> experiments.SieveSequence:
    W = SmoothWindow.bump(1.0, 2.0)
    if kind == "conj-gtilde":
        return experiments.gtilde_witness(B, W)
    if kind == "mu2w":
        return experiments.SieveSequence.from_function(B, 2 * B, lambda b: float(W(b.norm() / B)))
    if kind == "ones":
        return experiments.SieveSequence.from_function(B, 2 * B, lambda b: 1.0)
    supp = experiments.squarefree_primary(B, 2 * B)
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal(len(supp)) + 1j * rng.standard_normal(len(supp))
    return experiments.SieveSequence(supp, vals, (B, 2 * B))


def cmd_sieve_form(args):
    beta = _beta(args.beta, args.B, args.seed)
    s = experiments.large_sieve_form(args.A, args.B, beta)
    print(_fmt(s))
    return _env("sieve-form", vars_clean(args), {"sigma": s, "norm2": beta.norm2()})


def cmd_sieve_norm(args):
    r = experiments.operator_norm(args.A, args.B, args.iters, args.tol)
    print(_fmt(r.value))
    return _env("sieve-norm", vars_clean(args),
                {"value": r.value, "iterations": r.iterations, "residual": r.residual,
                 "rayleigh": r.rayleigh, "dimension": list(r.dimension)})


def cmd_sharpness(args):
    W = _window(args.window, args.wl if args.wl is not None else 1.0,
                args.wr if args.wr is not None else 2.0)
    r = experiments.sharpness_probe(args.N, W)
    for n, v in zip(r.Ns, r.values):
        print(f"N={n}: {_fmt(v)}")
    print(f"slope: {r.slope:.6f}")
    return _env("sharpness", vars_clean(args),
                {"N": r.Ns, "values": r.values, "norms2": r.norms2, "slope": r.slope})


def cmd_corrected(args):
    beta = _beta(args.beta, args.B, args.seed)
    corr, unc = experiments.corrected_sieve_sum(args.A, args.B, beta)
    print(f"corrected: {_fmt(corr)}\nuncorrected: {_fmt(unc)}")
    return _env("corrected-sieve", vars_clean(args), {"corrected": corr, "uncorrected": unc})


def cmd_poisson(args):
    V = SmoothWindow.bump(1.0, 2.0)
    if args.kind == "twisted":
        r = analytic.poisson_twisted_check(args.n1, args.n2, V, args.M, tol=args.tol)
    else:
        q, psi = analytic.character_pair_table(args.n1, args.n2)
        r = analytic.poisson_radial_check(psi, q, V, args.M, tol=args.tol)
    print(f"lhs: {_fmt(r.lhs)}\nrhs: {_fmt(r.rhs)}\ndiscrepancy: {r.discrepancy:.3e}")
    if not r.discrepancy < args.tol:
        raise ArithmeticError(f"discrepancy {r.discrepancy:.3e} above {args.tol}")
    return _env("poisson-check", vars_clean(args),
                {"lhs": r.lhs, "rhs": r.rhs, "discrepancy": r.discrepancy,
                 "n_dual_terms": r.n_dual_terms, "tail_estimate": r.tail_estimate})


def cmd_comb(args):
    r = experiments.comb_identity_check(args.Nmax, args.w, args.z, literal=args.literal)
    print(f"max discrepancy: {r.max_discrepancy} over {r.n_checked} elements")
    if r.max_discrepancy != 0 and not args.literal:
        raise ArithmeticError(f"identity fails at {r.worst}")
    return _env("comb-check", vars_clean(args),
                {"max_discrepancy": r.max_discrepancy, "n_checked": r.n_checked,
                 "nonzero": r.nonzero, "worst": None if r.worst is None else list(r.worst)})


def selftest_checks():
    """Quick invariant suite: (name, callable returning True on success)."""
    from .eisenstein import EI, enumerate_primary, mobius
    from .symbol import symbol_by_factoring

    def cube_relation():
        for c in enumerate_primary(0, 300, "squarefree"):
            g = gauss.gtilde(c).value
            if abs(g**3 - mobius(c) * complex(c) / c.abs()) > 1e-9:
                return False
        return True

    def symbols():
        for b in enumerate_primary(0, 400):
            for a in ((2, 0), (1, 3), (5, 7), (-4, 9)):
                if cubic_symbol(EI(*a), b) != symbol_by_factoring(EI(*a), b):
                    return False
        return True

    def sp_identity():
        return all(abs(gauss.kummer_sum_Sp(p) - 2 * math.sqrt(p) *
                       gauss.gtilde_prime(split_rational_prime(p)[0]).value.real) < 1e-9
                   for p in (7, 13, 19, 31, 37, 43))

    def comb():
        return experiments.comb_identity_check(600, 10, 50).max_discrepancy == 0

    def sieve():
        w = analytic.sieve_weights(10.0)
        return w[1] == 1.0

    def patterson_small():
        a = experiments.patterson_sum(100).observed["100"]
        return abs(a - experiments.patterson_bruteforce(100)) < 1e-12

    return [("cube relation", cube_relation), ("symbol agreement", symbols),
            ("S_p identity", sp_identity), ("combinatorial identity", comb),
            ("sieve weights", sieve), ("Patterson brute force", patterson_small)]


def cmd_selftest(args):
    results = {}
    for name, fn in selftest_checks():
        ok = bool(fn())
        results[name] = ok
        print(f"{'ok  ' if ok else 'FAIL'} {name}")
    if not all(results.values()):
        raise ArithmeticError("self-test failed")
    return _env("selftest", {}, results)


def vars_clean(args) -> dict:
    skip = {"func", "out", "format", "cache", "use_cache"}
    return {k: v for k, v in vars(args).items() if k not in skip}


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cubicgauss", description="Cubic Gauss sum experiments")
    ap.add_argument("--cache", default=None, help="Gauss sum cache file")
    ap.add_argument("--use-cache", action="store_true", help="read prime sweeps through the cache")
    ap.add_argument("--out", default=None, help="write the report to this file")
    ap.add_argument("--format", choices=("csv", "json"), default="json")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", help="primary primes above p = 1 mod 3")
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("symbol", help="cubic residue symbol (a/b)_3")
    p.add_argument("--a", type=_ei, required=True)
    p.add_argument("--b", type=_ei, required=True)
    p.set_defaults(func=cmd_symbol)

    p = sub.add_parser("gauss", help="normalised Gauss sum g~(c)")
    p.add_argument("--c", type=_ei, required=True)
    p.add_argument("--method", choices=("auto", "direct", "prime", "cache"), default="auto")
    p.set_defaults(func=cmd_gauss)

    p = sub.add_parser("sp", help="cubic exponential sum S_p")
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_sp)

    p = sub.add_parser("kummer", help="histogram of cos(2 pi theta_p)")
    p.add_argument("--X", type=int, required=True)
    p.set_defaults(func=cmd_kummer)

    p = sub.add_parser("patterson", help="sum of S_p / (2 sqrt p)")
    p.add_argument("--X", type=int, required=True)
    _add_window(p, "sharp")
    p.set_defaults(func=cmd_patterson)

    p = sub.add_parser("powersum", help="sum of g~(pi)^k over primary primes")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--X", type=int, required=True)
    _add_window(p, "sharp")
    p.set_defaults(func=cmd_powersum)

    p = sub.add_parser("type1", help="Type-I sum of g~(ur)")
    p.add_argument("--r", type=_ei, default=EisensteinInt(1, 0))
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--U", type=float, required=True)
    p.add_argument("--bruteforce", action="store_true")
    _add_window(p, "bump")
    p.set_defaults(func=cmd_type1)

    betas = ("conj-gtilde", "mu2w", "ones", "random")
    p = sub.add_parser("sieve-form", help="cubic large sieve quadratic form")
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--beta", choices=betas, default="random")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sieve_form)

    p = sub.add_parser("sieve-norm", help="operator norm B(A, B)")
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--iters", type=int, default=20000)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_sieve_norm)

    p = sub.add_parser("sharpness", help="exponent fit for the conj(g~) witness")
    p.add_argument("--N", type=int, nargs="+", default=[2**k for k in range(7, 12)])
    _add_window(p, "sharp")
    p.set_defaults(func=cmd_sharpness)

    p = sub.add_parser("corrected-sieve", help="large sieve with the main-term correction")
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--beta", choices=betas, default="mu2w")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_corrected)

    p = sub.add_parser("poisson-check", help="Poisson summation over Z[w]")
    p.add_argument("--kind", choices=("radial", "twisted"), default="twisted")
    p.add_argument("--n1", type=_ei, default=EisensteinInt(1, 0))
    p.add_argument("--n2", type=_ei, default=EisensteinInt(1, 0))
    p.add_argument("--M", type=float, default=1e3)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_poisson)

    p = sub.add_parser("comb-check", help="exact check of the prime-power decomposition")
    p.add_argument("--Nmax", type=int, default=10**4)
    p.add_argument("--w", type=float, default=10)
    p.add_argument("--z", type=float, default=50)
    p.add_argument("--literal", action="store_true")
    p.set_defaults(func=cmd_comb)

    p = sub.add_parser("selftest", help="run the quick invariant suite")
    p.set_defaults(func=cmd_selftest)
    return ap


def run_command(argv=None) -> tuple[int, ReportEnvelope | None]:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    t0 = time.perf_counter()
    try:
        out = args.func(args)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        print(f"cubicgauss {args.command}: error: {exc}", file=sys.stderr)
        return 2, None
    except (ArithmeticError, FloatingPointError) as exc:
        print(f"cubicgauss {args.command}: numeric failure: {exc}", file=sys.stderr)
        return 1, None
    env = out if isinstance(out, ReportEnvelope) else ReportEnvelope.from_report(out)
    if not env.wall_time:
        env.wall_time = time.perf_counter() - t0
    if args.out:
        export_table(env, args.format, args.out)
    return 0, env


def main(argv=None) -> int:
    code, _ = run_command(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
