"""Sorted unit-interval samples, null-distribution transforms and the
uniform order-statistic sampler.

Random streams are counter based (Philox): the variate at coordinate ``i`` of
replicate ``r`` depends only on ``(seed, r, i)``, never on how replicates are
scheduled across workers.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import special

from .errors import DomainError, EmptyInput, NonFiniteValue, OutOfUnitInterval, ParseError

__all__ = [
    "SortedSample",
    "NullDistribution",
    "sort_sample",
    "cdf_transform",
    "sample_uniform_order_stats",
    "replicate_stream",
    "unit_exponentials",
    "parse_null",
    "read_values",
]

# third counter word; keeps independent uses of one (seed, replicate) apart
STREAM_ORDER_STATS = 0
STREAM_INCREMENTS = 1
STREAM_AUX = 2


class SortedSample:
    """n ascending values in [0, 1] with virtual endpoints u(0)=0, u(n+1)=1."""

    __slots__ = ("_padded",)

    def __init__(self, values, *, _trusted: bool = False):
        if not _trusted:
            values = _validated(values)
            values = np.sort(values, kind="stable")
        padded = np.empty(values.size + 2, dtype=np.float64)
        padded[0] = 0.0
        padded[1:-1] = values
        padded[-1] = 1.0
        padded.flags.writeable = False
        self._padded = padded

    @property
    def n(self) -> int:
        return self._padded.size - 2

    @property
    def values(self) -> np.ndarray:
        return self._padded[1:-1]

    @property
    def padded(self) -> np.ndarray:
        """Read-only array ``[u(0), u(1), ..., u(n), u(n+1)]``."""
        return self._padded

    def u(self, i: int) -> float:
        if not 0 <= i <= self.n + 1:
            raise IndexError(f"order statistic index {i} outside 0..{self.n + 1}")
        return float(self._padded[i])

    def reflected(self) -> "SortedSample":
        """The sample of ``1 - U``; index i maps to n + 1 - i."""
        return SortedSample(np.ascontiguousarray((1.0 - self.values)[::-1]), _trusted=True)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, SortedSample):
            return NotImplemented
        return np.array_equal(self._padded, other._padded)

    def __repr__(self) -> str:
        body = np.array2string(self.values, threshold=8, precision=6)
        return f"SortedSample(n={self.n}, values={body})"


def _validated(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64).ravel()
    if arr.size == 0:
        raise EmptyInput("sample is empty")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValue("sample contains NaN or infinite values")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise OutOfUnitInterval(
            f"values must lie in [0, 1]; got range [{arr.min()!r}, {arr.max()!r}]"
        )
    return arr


def sort_sample(values: Iterable[float]) -> SortedSample:
    """Validate and sort values in [0, 1]. Ties are kept (stable sort)."""
    if not isinstance(values, np.ndarray):
        values = list(values)
    return SortedSample(values)


@dataclass(frozen=True)
class NullDistribution:
    """Continuous null law used to map raw data onto [0, 1].

    ``kind`` is one of ``uniform`` (params a, b), ``normal`` (mu, sigma),
    ``exponential`` (rate) or ``quantiles`` (a monotone table of
    ``(x, p)`` points, linearly interpolated).
    """

    kind: str
    params: tuple = ()
    table_x: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    table_p: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind == "uniform":
            a, b = self.params or (0.0, 1.0)
            if not b > a:
                raise DomainError("uniform null needs a < b")
            object.__setattr__(self, "params", (float(a), float(b)))
        elif self.kind == "normal":
            mu, sigma = self.params or (0.0, 1.0)
            if not sigma > 0:
                raise DomainError("normal null needs sigma > 0")
            object.__setattr__(self, "params", (float(mu), float(sigma)))
        elif self.kind == "exponential":
            (rate,) = self.params or (1.0,)
            if not rate > 0:
                raise DomainError("exponential null needs rate > 0")
            object.__setattr__(self, "params", (float(rate),))
        elif self.kind == "quantiles":
            x = np.asarray(self.table_x, dtype=float)
            p = np.asarray(self.table_p, dtype=float)
            if x.ndim != 1 or x.size < 2 or x.size != p.size:
                raise DomainError("quantile table needs at least two (x, p) rows")
            if np.any(np.diff(x) <= 0) or np.any(np.diff(p) < 0):
                raise DomainError("quantile table must be increasing in x and nondecreasing in p")
            if p[0] < 0 or p[-1] > 1:
                raise DomainError("quantile table probabilities must lie in [0, 1]")
            object.__setattr__(self, "table_x", x)
            object.__setattr__(self, "table_p", p)
        else:
            raise DomainError(f"unknown null family {self.kind!r}")

    def support(self) -> tuple[float, float]:
        if self.kind == "uniform":
            return self.params
        if self.kind == "normal":
            return (-math.inf, math.inf)
        if self.kind == "exponential":
            return (0.0, math.inf)
        return (float(self.table_x[0]), float(self.table_x[-1]))

    def cdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        lo, hi = self.support()
        if np.any(np.isnan(x)):
            raise NonFiniteValue("data contains NaN")
        if np.any((x < lo) | (x > hi)):
            raise DomainError(f"data outside the null support [{lo}, {hi}]")
        if self.kind == "uniform":
            a, b = self.params
            return (x - a) / (b - a)
        if self.kind == "normal":
            mu, sigma = self.params
            return special.ndtr((x - mu) / sigma)
        if self.kind == "exponential":
            (rate,) = self.params
            return -np.expm1(-rate * x)
        return np.interp(x, self.table_x, self.table_p)

    def quantile(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=np.float64)
        if np.any((p < 0) | (p > 1)):
            raise DomainError("probabilities must lie in [0, 1]")
        if self.kind == "uniform":
            a, b = self.params
            return a + p * (b - a)
        if self.kind == "normal":
            mu, sigma = self.params
            return mu + sigma * special.ndtri(p)
        if self.kind == "exponential":
            (rate,) = self.params
            return -np.log1p(-p) / rate
        # flat stretches of the table make the inverse multivalued; take the left end
        return np.interp(p, self.table_p, self.table_x)

    def spec_string(self) -> str:
        if self.kind == "quantiles":
            return "quantiles"
        return f"{self.kind}:" + ",".join(repr(v) for v in self.params)


def cdf_transform(data: Sequence[float], null: NullDistribution) -> SortedSample:
    """Sorted probability-integral transform ``F0(x_i)`` of the data."""
    arr = np.asarray(data, dtype=np.float64).ravel()
    if arr.size == 0:
        raise EmptyInput("no data")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValue("data contains NaN or infinite values")
    return sort_sample(np.clip(null.cdf(arr), 0.0, 1.0))


def replicate_stream(seed: int, replicate: int = 0, stream: int = STREAM_ORDER_STATS) -> np.random.Generator:
    """Generator whose i-th uint64 output is a pure function of (seed, replicate, stream, i)."""
    if seed < 0 or seed >= 2**64:
        raise DomainError("seed must be a 64-bit unsigned integer")
    if replicate < 0:
        raise DomainError("replicate index must be nonnegative")
    bitgen = np.random.Philox(key=int(seed), counter=[0, int(replicate), int(stream), 0])
    return np.random.Generator(bitgen)


def unit_exponentials(rng: np.random.Generator, size) -> np.ndarray:
    # one uint64 per variate, so coordinate i never depends on the batch size
    return -np.log1p(-rng.random(size))


def sample_uniform_order_stats(n: int, seed: int, replicate: int = 0) -> SortedSample:
    """Uniform order statistics as normalized partial sums of n+1 unit exponentials."""
    if n < 1:
        raise DomainError("n must be at least 1")
    y = unit_exponentials(replicate_stream(seed, replicate, STREAM_ORDER_STATS), n + 1)
    partial = np.cumsum(y)
    return SortedSample(partial[:n] / partial[n], _trusted=True)


def parse_null(spec: str) -> NullDistribution:
    """Parse ``uniform``, ``uniform:a,b``, ``normal:mu,sigma``, ``exponential:rate``
    or ``quantiles:path.csv``."""
    kind, _, rest = spec.strip().partition(":")
    kind = kind.strip().lower()
    if kind == "quantiles":
        if not rest:
            raise ParseError("quantiles null needs a file path")
        x, p = _read_quantile_table(Path(rest))
        return NullDistribution("quantiles", table_x=x, table_p=p)
    if kind not in ("uniform", "normal", "exponential"):
        raise ParseError(f"unknown null family in {spec!r}")
    try:
        params = tuple(float(t) for t in rest.split(",")) if rest.strip() else ()
    except ValueError as exc:
        raise ParseError(f"bad null parameters in {spec!r}") from exc
    expected = {"uniform": 2, "normal": 2, "exponential": 1}[kind]
    if params and len(params) != expected:
        raise ParseError(f"{kind} null takes {expected} parameter(s), got {len(params)}")
    return NullDistribution(kind, params)


def _read_quantile_table(path: Path) -> tuple[np.ndarray, np.ndarray]:
    rows = [r for r in _numeric_rows(path.read_text())]
    if not rows:
        raise EmptyInput(f"quantile table {path} is empty")
    if all(len(r) == 1 for r in rows):
        # bare quantiles, taken at equally spaced probabilities 0..1
        x = np.array([r[0] for r in rows])
        return x, np.linspace(0.0, 1.0, x.size)
    if any(len(r) < 2 for r in rows):
        raise ParseError("quantile table rows need two columns: x, p")
    return np.array([r[0] for r in rows]), np.array([r[1] for r in rows])


def _numeric_rows(text: str):
    first = True
    for row in csv.reader(text.splitlines()):
        cells = [c.strip() for c in row if c.strip()]
        if not cells:
            continue
        try:
            yield [float(c) for c in cells]
        except ValueError:
            if first:
                first = False
                continue  # header
            raise ParseError(f"non-numeric row: {row!r}")
        first = False


def read_values(path) -> np.ndarray:
    """Read a one-column CSV (optional header) or newline-delimited numbers."""
    text = Path(path).read_text()
    values = [r[0] for r in _numeric_rows(text)]
    if not values:
        raise EmptyInput(f"{path} holds no numeric values")
    arr = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValue(f"{path} contains NaN or infinite values")
    return arr
