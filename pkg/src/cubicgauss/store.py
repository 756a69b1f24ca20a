"""Persistent per-prime Gauss sum cache and report serialisation.

Cache file layout::

    # cubicgauss gauss-cache v1
    p,a,b,re,im,err
    7,1,3,...

One record per prime p = 1 mod 3, strictly increasing in p, where a + b w is
the canonical primary prime above p (b > 0). Every record is validated on
load and a bad one raises ``CacheError`` naming the file and line. Writers
take an exclusive ``fcntl`` lock on a sidecar lock file; readers work on the
snapshot they loaded.
"""

from __future__ import annotations

import csv
import fcntl
import io
import json
import math
import os
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .eisenstein import EisensteinInt
from .gauss import GaussSumValue, PrimeGaussTable, prime_gauss_values
from .primes import is_prime, primes_1_mod_3

MAGIC = "# cubicgauss gauss-cache v1"
HEADER = ("p", "a", "b", "re", "im", "err")
ENV_VAR = "CUBICGAUSS_CACHE"
DEFAULT_PATH = Path(".cubicgauss") / "gauss_cache.csv"
ERR_LIMIT = 1e-9  # cached values with a larger error bound are recomputed
SCHEMA_VERSION = "1"


def fmt_float(x: float) -> str:
    """17 significant digits: enough for an exact binary64 round trip."""
    return format(float(x), ".17g")


class CacheError(ValueError):
    pass


@dataclass(frozen=True)
class GaussCacheRecord:
    p: int
    a: int
    b: int
    re: float
    im: float
    err: float

    def problem(self) -> str | None:
        """Description of the first violated invariant, or None."""
        if self.a * self.a - self.a * self.b + self.b * self.b != self.p:
            return f"a^2 - ab + b^2 != p for p = {self.p}"
        if self.b <= 0:
            return "b must be positive (Im pi > 0)"
        if self.a % 3 != 1 or self.b % 3 != 0:
            return f"{self.a} + {self.b}w is not primary"
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            return "non-finite value"
        if not (math.isfinite(self.err) and self.err >= 0):
            return "error bound must be finite and non-negative"
        if abs(self.re * self.re + self.im * self.im - 1.0) > 2 * self.err + 1e-12:
            return "re^2 + im^2 differs from 1 by more than the error bound"
        if self.p % 3 != 1 or not is_prime(self.p):
            return f"{self.p} is not a prime = 1 mod 3"
        return None

    def to_row(self) -> str:
        return ",".join([str(self.p), str(self.a), str(self.b),
                         fmt_float(self.re), fmt_float(self.im), fmt_float(self.err)])

    def value(self) -> GaussSumValue:
        return GaussSumValue(complex(self.re, self.im), self.p, "fast_prime", self.err)


def default_cache_path(flag: str | os.PathLike | None = None) -> Path:
    """``--cache`` flag, then $CUBICGAUSS_CACHE, then ./.cubicgauss/gauss_cache.csv."""
    if flag:
        return Path(flag)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return DEFAULT_PATH


def _parse(path: Path, text: str) -> dict[int, GaussCacheRecord]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise CacheError(f"{path}:1: missing magic header {MAGIC!r}")
    if len(lines) < 2 or tuple(lines[1].strip().split(",")) != HEADER:
        raise CacheError(f"{path}:2: expected column header {','.join(HEADER)}")
    out: dict[int, GaussCacheRecord] = {}
    last = 0
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        parts = line.strip().split(",")
        if len(parts) != len(HEADER):
            raise CacheError(f"{path}:{lineno}: expected {len(HEADER)} fields, got {len(parts)}")
        try:
            rec = GaussCacheRecord(int(parts[0]), int(parts[1]), int(parts[2]),
                                   float(parts[3]), float(parts[4]), float(parts[5]))
        except ValueError as exc:
            raise CacheError(f"{path}:{lineno}: {exc}") from None
        bad = rec.problem()
        if bad:
            raise CacheError(f"{path}:{lineno}: {bad}")
        if rec.p <= last:
            raise CacheError(f"{path}:{lineno}: p = {rec.p} is not above the previous {last}")
        last = rec.p
        out[rec.p] = rec
    return out


class GaussCache:
    """Resumable store of g~(pi) for the canonical prime above each p."""

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = default_cache_path(path)
        self.records: dict[int, GaussCacheRecord] = {}
        self.load()

    @property
    def lock_path(self) -> Path:
        return self.path.with_name(self.path.name + ".lock")

    def load(self) -> None:
        if self.path.exists():
            self.records = _parse(self.path, self.path.read_text())
        else:
            self.records = {}

    def __len__(self) -> int:
        return len(self.records)

    def __contains__(self, p: int) -> bool:
        return p in self.records

    @contextmanager
    def _locked(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.lock_path, "a") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                yield
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def _write(self, new: list[GaussCacheRecord]) -> None:
        """Add records under the lock: plain append when in order, else merge-rewrite."""
        if not new:
            return
        with self._locked():
            self.load()  # pick up records written by other processes
            fresh = [r for r in new if r.p not in self.records]
            if not fresh:
                return
            fresh.sort(key=lambda r: r.p)
            top = max(self.records) if self.records else 0
            if self.path.exists() and fresh[0].p > top:
                with open(self.path, "a") as fh:
                    fh.write("".join(r.to_row() + "\n" for r in fresh))
            else:
                merged = dict(self.records)
                merged.update({r.p: r for r in fresh})
                tmp = self.path.with_name(self.path.name + ".tmp")
                with open(tmp, "w") as fh:
                    fh.write(MAGIC + "\n" + ",".join(HEADER) + "\n")
                    fh.write("".join(merged[p].to_row() + "\n" for p in sorted(merged)))
                os.replace(tmp, self.path)
            for r in fresh:
                self.records[r.p] = r

    def _compute(self, ps) -> list[GaussCacheRecord]:
        t = prime_gauss_values(np.asarray(ps, dtype=np.int64))
        return [GaussCacheRecord(int(p), int(a), int(b), float(v.real), float(v.imag), float(e))
                for p, a, b, v, e in zip(t.p, t.a, t.b, t.value, t.err)]

    def get(self, p: int) -> GaussCacheRecord | None:
        return self.records.get(p)

    def get_or_compute(self, p: int) -> GaussSumValue:
        """g~(pi) for the canonical pi above p, from the cache or a fresh sweep."""
        if p % 3 != 1 or not is_prime(p):
            raise ValueError(f"{p} is not a prime = 1 mod 3")
        rec = self.records.get(p)
        if rec is not None and rec.err <= ERR_LIMIT:
            return rec.value()
        (fresh,) = self._compute([p])
        if rec is None:
            self._write([fresh])
            fresh = self.records[p]
        return fresh.value()

    def ensure(self, hi: int, lo: int = 0) -> int:
        """Compute and store every missing prime in (lo, hi]; returns how many."""
        ps = primes_1_mod_3(lo, hi)
        missing = [p for p in ps.tolist() if p not in self.records]
        if missing:
            self._write(self._compute(missing))
        return len(missing)

    def table(self, hi: int, lo: int = 0) -> PrimeGaussTable:
        """Sweep table for lo < p <= hi assembled from cache records.

        S_p is rebuilt as 2 sqrt(p) Re g~, so cold and warm runs agree bit
        for bit.
        """
        self.ensure(hi, lo)
        ps = [p for p in primes_1_mod_3(lo, hi).tolist()]
        recs = [self.records[p] for p in ps]
        p_arr = np.array(ps, dtype=np.int64)
        a = np.array([r.a for r in recs], dtype=np.int64)
        b = np.array([r.b for r in recs], dtype=np.int64)
        val = np.array([complex(r.re, r.im) for r in recs], dtype=np.complex128)
        err = np.array([r.err for r in recs], dtype=np.float64)
        s_p = 2.0 * np.sqrt(p_arr.astype(np.float64)) * val.real
        return PrimeGaussTable(p_arr, a, b, s_p, val, err, 0)


def cache_get_or_compute(p: int, path: str | os.PathLike | None = None) -> GaussSumValue:
    return GaussCache(path).get_or_compute(p)


# -- report envelope ----------------------------------------------------------

def _encode(x):
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"__complex__": [float(x.real), float(x.imag)]}
    if isinstance(x, Fraction):
        return {"__fraction__": f"{x.numerator}/{x.denominator}"}
    if isinstance(x, EisensteinInt):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_encode(v) for v in x]
    raise TypeError(f"cannot serialise {type(x).__name__}")


def _decode(x):
    if isinstance(x, dict):
        if set(x) == {"__complex__"}:
            re, im = x["__complex__"]
            return complex(re, im)
        if set(x) == {"__fraction__"}:
            return Fraction(x["__fraction__"])
        return {k: _decode(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_decode(v) for v in x]
    return x


@dataclass
class ReportEnvelope:
    command: str
    params: dict
    results: dict
    provenance: list = field(default_factory=list)
    wall_time: float = 0.0
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "params": _encode(self.params),
            "results": _encode(self.results),
            "provenance": list(self.provenance),
            "wall_time": float(self.wall_time),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "ReportEnvelope":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {d.get('schema_version')!r}")
        return cls(d["command"], _decode(d["params"]), _decode(d["results"]),
                   list(d["provenance"]), float(d["wall_time"]), d["schema_version"])

    @classmethod
    def from_json(cls, text: str) -> "ReportEnvelope":
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_report(cls, report) -> "ReportEnvelope":
        """Wrap an ExperimentReport."""
        results = {
            "observed": report.observed,
            "predicted": report.predicted,
            "ratio": report.ratio,
            "err_bounds": report.err_bounds,
        }
        if report.rows:
            results["columns"] = list(report.columns)
            results["rows"] = report.rows
        prov = [f"{k}: {v}" for k, v in sorted(report.provenance.items())]
        return cls(report.command, dict(report.params), results, prov, report.runtime)


def _cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    if isinstance(v, (complex, np.complexfloating)):
        return f"{fmt_float(v.real)}{'+' if v.imag >= 0 or math.isnan(v.imag) else '-'}{fmt_float(abs(v.imag))}j"
    return str(v)


def table_rows(env: ReportEnvelope) -> tuple[list[str], list[dict]]:
    """Tabular view: explicit rows if the report has them, else one row per key."""
    res = env.results
    if "rows" in res:
        return list(res["columns"]), list(res["rows"])
    keys: list[str] = []
    for part in ("observed", "predicted", "ratio", "err_bounds"):
        for k in res.get(part, {}):
            if k not in keys:
                keys.append(k)
    rows = [{"key": k, **{part: res.get(part, {}).get(k, "") for part in
                          ("observed", "predicted", "ratio", "err_bounds")}} for k in keys]
    return ["key", "observed", "predicted", "ratio", "err_bounds"], rows


def render_table(report, fmt: str) -> str:
    env = report if isinstance(report, ReportEnvelope) else ReportEnvelope.from_report(report)
    if fmt == "json":
        return env.to_json()
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    cols, rows = table_rows(env)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_cell(r.get(c, "")) for c in cols])
    return buf.getvalue()


def export_table(report, fmt: str, path: str | os.PathLike) -> Path:
    """Write ``report`` as csv or json; the bytes depend only on the report."""
    path = Path(path)
    text = render_table(report, fmt)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path


def _parse_cell(s: str):
    for conv in (int, float, complex):
        try:
            return conv(s)
        except ValueError:
            continue
    return s


def read_table(path: str | os.PathLike):
    """Inverse of ``export_table``: an envelope for json, (columns, rows) for csv."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        return ReportEnvelope.from_json(text)
    reader = csv.reader(io.StringIO(text))
    cols = next(reader)
    rows = [{c: _parse_cell(v) for c, v in zip(cols, r)} for r in reader]
    return cols, rows


__all__ = [
    "CacheError",
    "GaussCache",
    "GaussCacheRecord",
    "ReportEnvelope",
    "cache_get_or_compute",
    "default_cache_path",
    "export_table",
    "read_table",
    "render_table",
]
