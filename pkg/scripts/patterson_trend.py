"""Observed over predicted for the sum of S_p / (2 sqrt p), decade by decade."""

import argparse
from dataclasses import dataclass

from cubicgauss.analytic import SmoothWindow
from cubicgauss.experiments import patterson_sum
from cubicgauss.store import GaussCache, export_table


@dataclass
class Config:
    X: int = 10**6
    window: str = "sharp"  # or "bump" on [1/2, 1]
    cache: str | None = None
    json: str | None = None


def main(cfg: Config):
    w = SmoothWindow.sharp() if cfg.window == "sharp" else SmoothWindow.bump(0.5, 1.0)
    cache = GaussCache(cfg.cache) if cfg.cache else None
    rep = patterson_sum(cfg.X, w, cache=cache)
    print(f"{'X':>9} {'observed':>12} {'predicted':>12} {'ratio':>7}")
    for k in rep.observed:
        print(f"{k:>9} {rep.observed[k]:12.4f} {rep.predicted[k]:12.4f} {rep.ratio[k]:7.3f}")
    if cfg.json:
        export_table(rep, "json", cfg.json)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--X", type=int, default=Config.X)
    ap.add_argument("--window", choices=("sharp", "bump"), default=Config.window)
    ap.add_argument("--cache")
    ap.add_argument("--json")
    main(Config(**vars(ap.parse_args())))
