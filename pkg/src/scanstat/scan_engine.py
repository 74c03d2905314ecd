"""Scan statistics over pairs of order statistics.

For a sorted sample ``u(0)=0 <= u(1) <= ... <= u(n)`` and a pair ``i < j`` with
length ``d = j - i`` and span ``s = u(j) - u(i)``:

* studentized:  (d - n s) / sqrt(d (1 - d/n))
* standardized: (d - n s) / sqrt(n s (1 - s))

Positive values mean more points than expected in ``(u(i), u(j)]`` (a
cluster); the minus scans look for gaps. ``scan`` enumerates every pair and is
the reference; ``scan_fast`` visits lengths through a branch-and-bound over the
window and returns the identical outcome.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import AllDegenerate, DegenerateLength, DegenerateSpan, DomainError, EmptyWindow
from .order_core import SortedSample

__all__ = [
    "ScanSpec",
    "ScanOutcome",
    "EickerResult",
    "studentized_pair",
    "standardized_pair",
    "pair_statistic",
    "scan",
    "scan_fast",
    "eicker_statistics",
    "ks_statistic",
    "min_spacing",
]

VARIANTS = ("studentized", "standardized")
SIDES = ("plus", "minus", "two_sided")
_VARIANT_CODE = {"studentized": kernels.STUDENTIZED, "standardized": kernels.STANDARDIZED}
_SIDE_CODE = {"plus": kernels.PLUS, "minus": kernels.MINUS, "two_sided": kernels.BOTH}
_SIDE_NAME = {kernels.PLUS: "plus", kernels.MINUS: "minus"}


@dataclass(frozen=True)
class ScanSpec:
    """Which statistic to scan and over which lengths ``k <= j - i <= l``.

    ``l=None`` means the largest admissible length: n - 1 for studentized
    scans (length n has zero weight), n for standardized ones.
    """

    variant: str = "studentized"
    side: str = "plus"
    k: int = 1
    l: Optional[int] = None
    asymptotic_window: bool = False
    window_constant: float = 8.0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DomainError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.side not in SIDES:
            raise DomainError(f"side must be one of {SIDES}, got {self.side!r}")
        if self.k < 1:
            raise DomainError("window lower bound k must be >= 1")
        if self.l is not None and self.l < self.k:
            raise DomainError("window upper bound l must be >= k")
        if self.asymptotic_window and (self.variant, self.side) != ("studentized", "plus"):
            raise DomainError("asymptotic_window applies to the studentized plus scan only")
        if not self.window_constant > 0:
            raise DomainError("window_constant must be positive")

    def window(self, n: int) -> tuple[int, int]:
        """Clamp the window to sample size ``n``; raises EmptyWindow if nothing is left."""
        top = n - 1 if self.variant == "studentized" else n
        hi = top if self.l is None else min(self.l, top)
        if self.asymptotic_window:
            hi = min(hi, max(self.k, int(math.floor(self.window_constant * math.log(n) ** 3))))
        if self.k > hi:
            raise EmptyWindow(f"no pair with {self.k} <= j - i <= {hi} for n={n}")
        return self.k, hi


@dataclass(frozen=True)
class ScanOutcome:
    value: float
    side: str
    variant: str
    i: int
    j: int
    interval: tuple[float, float]
    pairs_evaluated: int
    exact: bool = True

    @property
    def length(self) -> int:
        return self.j - self.i

    def to_dict(self) -> dict:
        out = asdict(self)
        out["length"] = self.length
        out["interval"] = list(self.interval)
        return {key: out[key] for key in
                ("value", "side", "variant", "i", "j", "length", "interval", "pairs_evaluated", "exact")}


def _check_pair(sample: SortedSample, i: int, j: int) -> None:
    if not (0 <= i < j <= sample.n):
        raise DomainError(f"need 0 <= i < j <= n, got i={i}, j={j}, n={sample.n}")


def studentized_pair(sample: SortedSample, i: int, j: int) -> float:
    _check_pair(sample, i, j)
    n, d = sample.n, j - i
    if d == n:
        raise DegenerateLength("j - i = n has zero studentized weight")
    s = sample.padded[j] - sample.padded[i]
    return float((d - n * s) / math.sqrt(d * (1.0 - d / n)))


def standardized_pair(sample: SortedSample, i: int, j: int) -> float:
    _check_pair(sample, i, j)
    n, d = sample.n, j - i
    s = sample.padded[j] - sample.padded[i]
    if not 0.0 < s < 1.0:
        raise DegenerateSpan(f"span u(j) - u(i) = {float(s)!r} is not in (0, 1)")
    return float((d - n * s) / math.sqrt(n * s * (1.0 - s)))


def pair_statistic(sample: SortedSample, i: int, j: int, variant: str) -> float:
    if variant == "studentized":
        return studentized_pair(sample, i, j)
    if variant == "standardized":
        return standardized_pair(sample, i, j)
    raise DomainError(f"unknown variant {variant!r}")


def _outcome(sample, spec, value, d, i, side_code, pairs) -> ScanOutcome:
    j = i + d
    return ScanOutcome(
        value=float(value),
        side=_SIDE_NAME[int(side_code)],
        variant=spec.variant,
        i=int(i),
        j=int(j),
        interval=(sample.u(int(i)), sample.u(int(j))),
        pairs_evaluated=int(pairs),
        exact=not spec.asymptotic_window,
    )


def scan(sample: SortedSample, spec: ScanSpec) -> ScanOutcome:
    """Exhaustive reference scan over every admissible pair.

    Ties go to the shortest length, then the smallest left index, then the
    plus side.
    """
    n = sample.n
    k, l = spec.window(n)
    u = sample.padded
    cand_v, cand_d, cand_i, cand_s = [], [], [], []
    pairs = 0
    for i in range(0, n - k + 1):
        j = np.arange(i + k, min(i + l, n) + 1)
        d = j - i
        s = u[j] - u[i]
        pairs += j.size
        if spec.variant == "studentized":
            v = (d - n * s) / np.sqrt(d * (1.0 - d / n))
        else:
            keep = (s > 0.0) & (s < 1.0)
            d, s = d[keep], s[keep]
            v = (d - n * s) / np.sqrt(n * s * (1.0 - s))
        for side, vals in (("plus", v), ("minus", -v)):
            if spec.side in (side, "two_sided"):
                cand_v.append(vals)
                cand_d.append(d)
                cand_i.append(np.full(d.size, i))
                cand_s.append(np.full(d.size, _SIDE_CODE[side]))
    values = np.concatenate(cand_v) if cand_v else np.empty(0)
    if values.size == 0:
        raise EmptyWindow("every pair in the window is degenerate")
    lengths, lefts, sides = (np.concatenate(c) for c in (cand_d, cand_i, cand_s))
    top = np.flatnonzero(values == values.max())
    pick = top[np.lexsort((sides[top], lefts[top], lengths[top]))[0]]
    return _outcome(sample, spec, values[pick], lengths[pick], lefts[pick], sides[pick], pairs)


def scan_fast(sample: SortedSample, spec: ScanSpec, backend: Optional[str] = None) -> ScanOutcome:
    """Same contract as :func:`scan`, computed one length at a time.

    Lengths are visited best-bound-first; a block of unvisited lengths is
    skipped once its bound falls below the incumbent, which never changes the
    answer (see ``kernels._common.interval_bound``).
    """
    n = sample.n
    k, l = spec.window(n)
    kern = kernels.get_backend(backend)
    value, d, i, side, pairs, _ = kern.branch_and_bound(
        sample.padded, n, k, l, _VARIANT_CODE[spec.variant], _SIDE_CODE[spec.side]
    )
    if not value > -math.inf:
        raise EmptyWindow("every pair in the window is degenerate")
    return _outcome(sample, spec, value, d, i, side, pairs)


@dataclass(frozen=True)
class EickerResult:
    """Eicker-type maxima; ``*_index`` is the attaining order-statistic index."""

    v_plus: float
    v_plus_index: Optional[int]
    v_plus_studentized: float
    v_plus_studentized_index: Optional[int]


def eicker_statistics(sample: SortedSample) -> EickerResult:
    """max_i (i - n U_(i)) / sqrt(n U_(i)(1 - U_(i)))   over 0 < U_(i) < 1, and
    max_i (i - n U_(i)) / sqrt(i (1 - i/n))            over 1 <= i < n.

    A form with no usable index comes back as NaN with index None.
    """
    n = sample.n
    x = sample.values
    idx = np.arange(1, n + 1)
    num = idx - n * x

    ok = (x > 0.0) & (x < 1.0)
    first, first_i = math.nan, None
    if ok.any():
        v = np.full(n, -np.inf)
        v[ok] = num[ok] / np.sqrt(n * x[ok] * (1.0 - x[ok]))
        pos = int(np.argmax(v))
        first, first_i = float(v[pos]), pos + 1

    second, second_i = math.nan, None
    if n >= 2:
        v = num[:-1] / np.sqrt(idx[:-1] * (1.0 - idx[:-1] / n))
        pos = int(np.argmax(v))
        second, second_i = float(v[pos]), pos + 1

    if first_i is None and second_i is None:
        raise AllDegenerate("no index has a nonzero denominator")
    return EickerResult(first, first_i, second, second_i)


def ks_statistic(sample: SortedSample) -> float:
    """sqrt(n) * max_i |U_(i) - i/(n+1)|."""
    n = sample.n
    centered = sample.values - np.arange(1, n + 1) / (n + 1)
    return float(math.sqrt(n) * np.max(np.abs(centered)))


def min_spacing(sample: SortedSample) -> float:
    """Smallest of u(i+1) - u(i), i = 0..n-1 (left boundary in, right boundary out)."""
    u = sample.padded
    return float(np.min(np.diff(u[:-1])))
