"""Histogram of cos(2 pi theta_p) over p = 1 mod 3 at several cut-offs."""

import argparse
from dataclasses import dataclass, field

from cubicgauss.experiments import KUMMER_LABELS, kummer_histogram
from cubicgauss.store import GaussCache, export_table


@dataclass
class Config:
    X: list = field(default_factory=lambda: [500, 10**4, 10**5, 10**6])
    cache: str | None = None
    csv: str | None = None  # rows of the largest run


def main(cfg: Config):
    cache = GaussCache(cfg.cache) if cfg.cache else None
    print(f"{'X':>8}  " + "  ".join(f"{lab:>13}" for lab in KUMMER_LABELS))
    rep = None
    for X in cfg.X:
        rep = kummer_histogram(X, cache=cache)
        o = rep.observed
        cells = [f"{o['count_' + lab]:6d} ({o['freq_' + lab]:.3f})" for lab in KUMMER_LABELS]
        print(f"{X:8d}  " + "  ".join(cells))
    if cfg.csv and rep is not None:
        export_table(rep, "csv", cfg.csv)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--X", type=int, nargs="+", default=Config().X)
    ap.add_argument("--cache")
    ap.add_argument("--csv")
    main(Config(**vars(ap.parse_args())))
