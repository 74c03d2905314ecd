"""Rate and cumulant functions of the shifted-exponential increment
X = 1 - E (density 1(x <= 1) e^(x - 1)), the transforms used to move between
standardized and studentized increments, and Chernoff / moderate-deviation
tail bounds for S_k^+ = X_1 + ... + X_k and S_k^- = -S_k^+.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy import special

from .errors import DomainError
from .order_core import STREAM_INCREMENTS, replicate_stream, unit_exponentials

__all__ = [
    "INFINITE_RATE",
    "rate",
    "cumulant",
    "phi_map",
    "g_plus",
    "g_minus",
    "chernoff_tail_bound",
    "moderate_dev_approx",
    "ModerateDeviation",
    "exact_partial_sum_tail",
    "simulate_partial_sums",
]

# returned on purpose (never produced by overflow) so exp(-k * rate) is exactly 0
INFINITE_RATE = math.inf

_SIGNS = ("plus", "minus")
_SUM_BLOCK = 4096


def _check_sign(sign: str) -> None:
    if sign not in _SIGNS:
        raise DomainError(f"sign must be 'plus' or 'minus', got {sign!r}")


def _x_minus_log1p(x: float) -> float:
    """x - log(1 + x), x > -1, without cancellation near 0."""
    if abs(x) < 1e-2:
        # sum_{m>=2} (-1)^m x^m / m
        total, power = 0.0, x * x
        for m in range(2, 12):
            total += power / m if m % 2 == 0 else -power / m
            power *= x
        return total
    return x - math.log1p(x)


def rate(sign: str, s: float) -> float:
    """I^+(s) = -s - log(1 - s) (infinite for s >= 1), I^-(s) = s - log(1 + s)."""
    _check_sign(sign)
    if s < 0:
        raise DomainError("rate functions are evaluated for s >= 0 only")
    if sign == "plus":
        return INFINITE_RATE if s >= 1.0 else _x_minus_log1p(-s)
    return _x_minus_log1p(s)


def cumulant(sign: str, t: float) -> float:
    """phi^+(t) = t - log(1 + t), phi^-(t) = -t - log(1 - t) (infinite for t >= 1)."""
    _check_sign(sign)
    if t < 0:
        raise DomainError("cumulant functions are evaluated for t >= 0 only")
    if sign == "plus":
        return _x_minus_log1p(t)
    return INFINITE_RATE if t >= 1.0 else _x_minus_log1p(-t)


def phi_map(x: float) -> float:
    """x / sqrt(1 - x), strictly increasing from (-inf, 1) onto the real line."""
    if x >= 1.0:
        raise DomainError("phi_map needs x < 1")
    return x / math.sqrt(1.0 - x)


def g_plus(x: float) -> float:
    """Inverse of :func:`phi_map`: (x sqrt(x^2 + 4) - x^2) / 2."""
    if x > 0:
        # same quantity, rationalized to avoid cancellation for large x
        return 2.0 * x / (math.sqrt(x * x + 4.0) + x)
    return 0.5 * (x * math.sqrt(x * x + 4.0) - x * x)


def g_minus(a: float) -> float:
    """(a sqrt(a^2 + 4) + a^2) / 2 for a >= 0."""
    if a < 0:
        raise DomainError("g_minus needs a >= 0")
    return 0.5 * (a * math.sqrt(a * a + 4.0) + a * a)


def _check_kx(k: int, x: float) -> None:
    if int(k) != k or k < 1:
        raise DomainError("k must be a positive integer")
    if not x > 0:
        raise DomainError("x must be positive")


def chernoff_tail_bound(sign: str, k: int, x: float) -> float:
    """exp(-k I(x / sqrt(k))), an upper bound on P(S_k / sqrt(k) >= x)."""
    _check_sign(sign)
    _check_kx(k, x)
    r = rate(sign, x / math.sqrt(k))
    if r == INFINITE_RATE:
        return 0.0
    return math.exp(-k * r)


class ModerateDeviation(NamedTuple):
    value: float
    in_range: bool  # x in [2, sqrt(k)/4], where the approximation is meant to be used


def moderate_dev_approx(sign: str, k: int, x: float) -> ModerateDeviation:
    """(sqrt(2 pi) x)^-1 exp(-k I(x / sqrt(k))) ~ P(S_k / sqrt(k) >= x)."""
    _check_sign(sign)
    _check_kx(k, x)
    value = chernoff_tail_bound(sign, k, x) / (math.sqrt(2.0 * math.pi) * x)
    return ModerateDeviation(value, 2.0 <= x <= math.sqrt(k) / 4.0)


def exact_partial_sum_tail(sign: str, k: int, x: float) -> float:
    """P(S_k / sqrt(k) >= x) from the Gamma(k, 1) law of E_1 + ... + E_k."""
    _check_sign(sign)
    _check_kx(k, x)
    shift = x * math.sqrt(k)
    if sign == "plus":
        # S_k^+ = k - Gamma(k)
        return float(special.gammainc(k, k - shift)) if shift < k else 0.0
    return float(special.gammaincc(k, k + shift))


def simulate_partial_sums(k: int, replicates: int, seed: int) -> np.ndarray:
    """Brute-force draws of S_k^+ (negate for S_k^-), summing k shifted
    exponentials per replicate.

    Replicates are generated in fixed blocks of 4096 rows, block b using stream
    (seed, b); row r of a block reads uint64 outputs r*k .. r*k + k - 1, so each
    draw is a pure function of (seed, replicate).
    """
    if k < 1 or replicates < 1:
        raise DomainError("k and replicates must be positive")
    out = np.empty(replicates)
    for b, start in enumerate(range(0, replicates, _SUM_BLOCK)):
        rows = min(_SUM_BLOCK, replicates - start)
        rng = replicate_stream(seed, b, STREAM_INCREMENTS)
        e = unit_exponentials(rng, (rows, k))
        out[start:start + rows] = k - e.sum(axis=1)
    return out
