"""Seeded Monte Carlo replication of scan and classical statistics, and
goodness-of-fit of the resulting empirical laws against the limit laws.

Replicate ``r`` always draws its sample from stream ``(seed, r)``, and results
are written to position ``r``, so output does not depend on the worker count.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from . import asymptotics as asym
from .asymptotics import LimitLaw
from .errors import DigestMismatch, DomainError, IncompatibleLaw, ScanStatError
from .order_core import sample_uniform_order_stats
from .scan_engine import ScanSpec, eicker_statistics, ks_statistic, min_spacing, scan_fast

__all__ = [
    "ExperimentConfig",
    "EmpiricalLaw",
    "GofReport",
    "run_experiment",
    "compare_to_limit",
    "coincidence_rates",
    "statistic_descriptor",
    "parse_statistic",
    "sample_limit_law",
    "save_record",
    "load_records",
    "write_raw_csv",
    "QUANTILE_PROBS",
]

NAMED_STATISTICS = ("min_spacing", "ks", "eicker", "eicker_studentized")
QUANTILE_PROBS = (0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99)
_SIDE_CODE = {"plus": 0, "minus": 1}
NO_SIDE = -1

Statistic = Union[str, ScanSpec]


def statistic_descriptor(stat: Statistic) -> str:
    """Canonical text form, e.g. ``scan:studentized:plus:k=1:l=max``."""
    if isinstance(stat, ScanSpec):
        text = f"scan:{stat.variant}:{stat.side}:k={stat.k}:l={'max' if stat.l is None else stat.l}"
        if stat.asymptotic_window:
            text += f":asymptotic={stat.window_constant!r}"
        return text
    if stat not in NAMED_STATISTICS:
        raise DomainError(f"unknown statistic {stat!r}")
    return stat


def parse_statistic(text: str) -> Statistic:
    """Inverse of :func:`statistic_descriptor`; also accepts ``variant:side``."""
    text = text.strip()
    if text in NAMED_STATISTICS:
        return text
    parts = text.split(":")
    if parts[0] == "scan":
        parts = parts[1:]
    if len(parts) < 2:
        raise DomainError(f"cannot parse statistic {text!r}")
    kwargs: dict = {"variant": parts[0], "side": parts[1]}
    for extra in parts[2:]:
        key, _, val = extra.partition("=")
        if key == "k":
            kwargs["k"] = int(val)
        elif key == "l":
            kwargs["l"] = None if val == "max" else int(val)
        elif key == "asymptotic":
            kwargs["asymptotic_window"] = True
            kwargs["window_constant"] = float(val)
        else:
            raise DomainError(f"cannot parse statistic {text!r}")
    return ScanSpec(**kwargs)


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    replicates: int
    seed: int
    statistic: Statistic
    law: Optional[LimitLaw] = None
    parallelism: int = 1
    backend: Optional[str] = None

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be >= 1")
        if self.replicates < 1:
            raise DomainError("replicates must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.parallelism < 0:
            raise DomainError("parallelism must be >= 0")
        statistic_descriptor(self.statistic)

    def key(self) -> dict:
        """Everything that determines the output (worker count excluded)."""
        out = {"n": self.n, "replicates": self.replicates, "seed": self.seed,
               "statistic": statistic_descriptor(self.statistic)}
        if self.law is not None:
            out["law"] = self.law.short_name
            if self.law.A is not None:
                out["A"] = self.law.A
        return out


@dataclass
class EmpiricalLaw:
    values: np.ndarray              # sorted ascending
    n: int
    statistic: str
    seed: int
    raw: Optional[np.ndarray] = field(default=None, repr=False)    # replicate order
    sides: Optional[np.ndarray] = field(default=None, repr=False)  # replicate order

    @classmethod
    def from_replicates(cls, raw, n, statistic, seed, sides=None) -> "EmpiricalLaw":
        raw = np.asarray(raw, dtype=np.float64)
        return cls(np.sort(raw), n, statistic, seed, raw=raw, sides=sides)

    @property
    def replicates(self) -> int:
        return int(self.values.size)

    def cdf(self, x: float) -> float:
        return float(np.searchsorted(self.values, x, side="right")) / self.values.size

    def survival(self, x: float) -> float:
        """Fraction of replicates >= x."""
        return float(self.values.size - np.searchsorted(self.values, x, side="left")) / self.values.size

    def quantiles(self, probs=QUANTILE_PROBS) -> dict:
        return {f"{p:g}": float(np.quantile(self.values, p)) for p in probs}

    def summary(self) -> dict:
        v = self.values
        return {
            "replicates": self.replicates,
            "mean": float(v.mean()),
            "std": float(v.std(ddof=1)) if v.size > 1 else 0.0,
            "min": float(v[0]),
            "median": float(np.median(v)),
            "max": float(v[-1]),
        }

    def digest(self) -> str:
        data = self.raw if self.raw is not None else self.values
        return hashlib.sha256(np.ascontiguousarray(data, dtype="<f8").tobytes()).hexdigest()


@dataclass
class GofReport:
    law: str
    n: int
    replicates: int
    seed: int
    ks_distance: float
    pointwise: list
    coincidence_rate: Optional[float] = None

    def max_pointwise_error(self) -> float:
        return max(p["abs_error"] for p in self.pointwise)

    def to_dict(self) -> dict:
        return {
            "law": self.law, "n": self.n, "replicates": self.replicates, "seed": self.seed,
            "ks_distance": self.ks_distance, "pointwise": self.pointwise,
            "coincidence_rate": self.coincidence_rate,
        }


def _evaluate(stat: Statistic, n: int, seed: int, r: int, backend) -> tuple[float, int]:
    sample = sample_uniform_order_stats(n, seed, r)
    if isinstance(stat, ScanSpec):
        out = scan_fast(sample, stat, backend=backend)
        return out.value, _SIDE_CODE[out.side]
    if stat == "min_spacing":
        return min_spacing(sample), NO_SIDE
    if stat == "ks":
        return ks_statistic(sample), NO_SIDE
    e = eicker_statistics(sample)
    return (e.v_plus if stat == "eicker" else e.v_plus_studentized), NO_SIDE


def _run_chunk(stat, n, seed, start, stop, backend):
    values = np.empty(stop - start)
    sides = np.empty(stop - start, dtype=np.int8)
    for r in range(start, stop):
        try:
            values[r - start], sides[r - start] = _evaluate(stat, n, seed, r, backend)
        except ScanStatError as exc:
            raise type(exc)(f"replicate failed (seed={seed}, r={r}): {exc}") from None
    return start, values, sides


def _chunks(total: int, pieces: int):
    bounds = np.linspace(0, total, pieces + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _replicate_all(config: ExperimentConfig) -> tuple[np.ndarray, np.ndarray]:
    workers = config.parallelism or os.cpu_count() or 1
    values = np.empty(config.replicates)
    sides = np.empty(config.replicates, dtype=np.int8)
    args = (config.statistic, config.n, config.seed)
    if workers == 1:
        _, values[:], sides[:] = _run_chunk(*args, 0, config.replicates, config.backend)
        return values, sides
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_chunk, *args, a, b, config.backend)
                   for a, b in _chunks(config.replicates, 4 * workers)]
        for fut in futures:
            start, vals, sds = fut.result()
            values[start:start + vals.size] = vals
            sides[start:start + sds.size] = sds
    return values, sides


def run_experiment(config: ExperimentConfig) -> EmpiricalLaw:
    values, sides = _replicate_all(config)
    return EmpiricalLaw.from_replicates(
        values, config.n, statistic_descriptor(config.statistic), config.seed,
        sides=sides if isinstance(config.statistic, ScanSpec) else None,
    )


def _check_compatible(statistic: str, law: LimitLaw, n: int) -> None:
    stat = parse_statistic(statistic)
    ok = False
    if isinstance(stat, ScanSpec) and stat.l is None and not stat.asymptotic_window:
        full = stat.k == 1
        if law.kind == "studentized_plus":
            ok = full and (stat.variant, stat.side) == ("studentized", "plus")
        elif law.kind == "studentized_minus":
            ok = full and stat.variant == "studentized" and stat.side in ("minus", "two_sided")
        elif law.kind == "standardized_full":
            ok = full and stat.variant == "standardized" and stat.side in ("plus", "two_sided")
        else:
            ok = ((stat.variant, stat.side) == ("standardized", "plus")
                  and stat.k == law.window_start(n))
    if not ok:
        raise IncompatibleLaw(f"{law.kind} does not describe {statistic}")


def _law_cdf_at(law: LimitLaw, n: int, m: float) -> float:
    tau = asym.tau_from_observed(law, n, m)
    if law.kind == "standardized_full":
        return 0.0 if math.isinf(tau) else math.exp(-tau)
    return asym.limit_cdf(law, tau)


def compare_to_limit(emp: EmpiricalLaw, law: LimitLaw, taus=None) -> GofReport:
    """Kolmogorov distance between the empirical law and the limit law, plus
    the errors at a few tau points (default -1, 0, 1, 2; 0.5, 1, 2 for the
    full standardized law)."""
    _check_compatible(emp.statistic, law, emp.n)
    if taus is None:
        taus = (0.5, 1.0, 2.0) if law.kind == "standardized_full" else (-1.0, 0.0, 1.0, 2.0)
    m = emp.values.size
    cdf = np.array([_law_cdf_at(law, emp.n, x) for x in emp.values])
    ranks = np.arange(1, m + 1) / m
    ks = float(max(np.max(ranks - cdf), np.max(cdf - (ranks - 1.0 / m))))
    pointwise = []
    for tau in taus:
        t = asym.threshold(law, emp.n, tau)
        e, f = emp.cdf(t), asym.limit_cdf(law, tau)
        pointwise.append({"tau": tau, "threshold": t, "empirical": e, "limit": f,
                          "abs_error": abs(e - f)})
    return GofReport(law.short_name, emp.n, m, emp.seed, min(1.0, max(0.0, ks)), pointwise)


def coincidence_rates(n: int, replicates: int, seed: int, parallelism: int = 1,
                      backend: Optional[str] = None) -> tuple[float, float]:
    """Fraction of replicates whose two-sided studentized scan is attained on
    the minus side, and whose two-sided standardized scan is attained on the
    plus side."""
    rates = []
    for variant, side in (("studentized", "minus"), ("standardized", "plus")):
        cfg = ExperimentConfig(n, replicates, seed, ScanSpec(variant, "two_sided"),
                               parallelism=parallelism, backend=backend)
        emp = run_experiment(cfg)
        rates.append(float(np.mean(emp.sides == _SIDE_CODE[side])))
    return rates[0], rates[1]


def sample_limit_law(law: LimitLaw, n: int, size: int, seed: int) -> np.ndarray:
    """Inverse-CDF draws of the statistic from its limit law (a test oracle)."""
    from .order_core import STREAM_AUX, replicate_stream

    p = replicate_stream(seed, 0, STREAM_AUX).random(size)
    p = np.clip(p, 1e-300, None)
    if law.kind == "standardized_full":
        return np.sqrt(n / -np.log(p))
    if law.kind == "studentized_minus":
        tau = 1.0 - np.log(-np.log(p))
    else:
        tau = -np.log(-np.log(p) / law.constant)
    return np.array([asym.threshold(law, n, t) for t in tau])


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def load_records(path) -> list:
    path = Path(path)
    if not path.exists():
        return []
    return [json.loads(line) for line in path.read_text().splitlines() if line.strip()]


def save_record(path, config: ExperimentConfig, emp: EmpiricalLaw,
                gof: Optional[GofReport] = None) -> dict:
    """Append one JSON-lines record, unless the same config is already stored.

    A stored record with the same config must carry the same digest, otherwise
    :class:`DigestMismatch` is raised; nothing is ever rewritten.
    """
    record = {"config": config.key(), "summary": emp.summary(),
              "quantiles": emp.quantiles(), "digest": emp.digest()}
    if gof is not None:
        record["gof"] = gof.to_dict()
    key = _canonical(record["config"])
    for old in load_records(path):
        if _canonical(old["config"]) == key:
            if old["digest"] != record["digest"]:
                raise DigestMismatch(f"stored digest differs for config {key}")
            return old
    with open(path, "a") as fh:
        fh.write(json.dumps(record) + "\n")
    return record


def write_raw_csv(path, emp: EmpiricalLaw) -> None:
    raw = emp.raw if emp.raw is not None else emp.values
    with open(path, "w") as fh:
        fh.write("replicate,value" + (",side" if emp.sides is not None else "") + "\n")
        for r, v in enumerate(raw):
            row = f"{r},{float(v)!r}"
            if emp.sides is not None:
                row += "," + ("plus" if emp.sides[r] == 0 else "minus")
            fh.write(row + "\n")
