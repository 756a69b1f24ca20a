"""Operator norms, the conj(g~) sharpness fit and the corrected sieve."""

import argparse
import math
from dataclasses import dataclass, field

import numpy as np

from cubicgauss.analytic import SmoothWindow
from cubicgauss.eisenstein import is_squarefree
from cubicgauss.experiments import (
    SieveSequence,
    corrected_sieve_sum,
    gtilde_witness,
    operator_norm,
    sharpness_probe,
)


@dataclass
class Config:
    norms: list = field(default_factory=lambda: [(16, 16), (16, 32), (32, 16), (64, 64), (512, 8)])
    sharp_exps: list = field(default_factory=lambda: list(range(7, 12)))
    corrected: int = 2**9


def main(cfg: Config):
    print("B(A, B) by power iteration")
    for A, B in cfg.norms:
        r = operator_norm(A, B)
        shape = A + B + (A * B) ** (2 / 3)
        print(f"  A={A:5d} B={B:5d}  B(A,B)={r.value:11.4f}  /(A+B+(AB)^(2/3))={r.value / shape:.3f}"
              f"  iters={r.iterations}")

    sh = sharpness_probe([2**k for k in cfg.sharp_exps])
    print("sharpness: Sigma(N, N, beta) / |beta|^2")
    for N, v, s in zip(sh.Ns, sh.values, sh.supports):
        print(f"  N={N:5d}  value={v:10.3f}  support={s}")
    print(f"  slope {sh.slope:.4f} (target 2/3)")

    N = cfg.corrected
    V = SmoothWindow.bump(1.0, 2.0)
    wit = gtilde_witness(N, V)
    flat = SieveSequence.from_function(N, 2 * N, lambda b: float(V(b.norm() / N)))
    for name, beta in (("conj g~ witness", wit), ("mu^2 W", flat)):
        c, u = corrected_sieve_sum(N, N, beta, V)
        print(f"corrected sieve, {name}: corrected={c:.1f} uncorrected={u:.1f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corrected", type=int, default=Config.corrected)
    ap.add_argument("--sharp-exps", type=int, nargs="+", default=Config().sharp_exps)
    a = ap.parse_args()
    main(Config(sharp_exps=a.sharp_exps, corrected=a.corrected))
