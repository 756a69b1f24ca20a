"""Poisson summation checks, Type-I main term and sieve weight sums."""

import argparse
from dataclasses import dataclass, field

from cubicgauss.analytic import (
    SmoothWindow,
    character_pair_table,
    dedekind_zeta_partial,
    poisson_radial_check,
    poisson_twisted_check,
    sieve_weights,
)
from cubicgauss.eisenstein import EI
from cubicgauss.experiments import type1_sum

PI7 = EI(1, 3)


@dataclass
class Config:
    M: list = field(default_factory=lambda: [1e3, 1e4])
    U: float = 1e5
    ells: list = field(default_factory=lambda: [0, 1, 5])
    ys: list = field(default_factory=lambda: [1e2, 1e3])


def main(cfg: Config):
    V = SmoothWindow.bump(1.0, 2.0)
    for M in cfg.M:
        for n1, n2 in ((1, 1), (PI7, 1), (PI7, PI7)):
            q, psi = character_pair_table(n1, n2)
            r = poisson_radial_check(psi, q, V, M)
            t = poisson_twisted_check(n1, n2, V, M)
            print(f"M={M:g} ({n1}, {n2}): radial {r.discrepancy:.1e} twisted {t.discrepancy:.1e}"
                  f"  dual terms {t.n_dual_terms}")
    for ell in cfg.ells:
        rep = type1_sum(1, ell, cfg.U)
        s = rep.observed["sum"]
        print(f"Type-I ell={ell}: sum={s.real:.3f}{s.imag:+.3f}i  "
              f"main term={rep.predicted['main_term_ell0']:.3f}  |sum|/main={rep.ratio['abs']:.4f}")
    target = 1 / dedekind_zeta_partial(2, PI7)
    for y in cfg.ys:
        s = sieve_weights(y, "squarefree").dual_sum(2.0, coprime_to=PI7)
        print(f"y={y:g}: sum lambda_d / N(d)^2 = {s:.6f}, 1/zeta(2; 1_pi7) = {target:.6f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--U", type=float, default=Config.U)
    main(Config(U=ap.parse_args().U))
