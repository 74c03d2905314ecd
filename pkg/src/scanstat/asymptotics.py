"""Limit laws of the scan statistics and conversions between observed values,
tau-coordinates, p-values and critical values.

All four laws are Gumbel-type in a tau-coordinate:

=====================  ==========================  =========================
law                    threshold(n, tau)           P(stat <= threshold)
=====================  ==========================  =========================
studentized_plus       u_n(tau)                    exp(-c e^-tau)
studentized_minus      log n + tau                 exp(-e^(1 - tau))
standardized_full      sqrt(n / tau), tau > 0      exp(-tau)
standardized_windowed  u_n(tau)                    exp(-c_A e^-tau)
=====================  ==========================  =========================

with ``c = 8 / (9 sqrt(pi))`` and ``u_n(tau) = sqrt(2 log n) - 3 log log n /
(2 sqrt(2 log n)) + tau / sqrt(2 log n)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import DomainError

__all__ = [
    "GUMBEL_C",
    "LimitLaw",
    "u_n_tau",
    "u_n_tau_expanded",
    "threshold",
    "tau_from_observed",
    "limit_cdf",
    "p_value",
    "critical_value",
    "calibrate",
    "c_A",
    "c_A_closed_form",
    "adaptive_simpson",
    "exact_min_spacing_sf",
    "kolmogorov_cdf",
    "PRE_ASYMPTOTIC_N",
]

GUMBEL_C = 8.0 / (9.0 * math.sqrt(math.pi))
_KAPPA = math.sqrt(2.0) / 3.0

# log log n <= 0 for n <= 15
PRE_ASYMPTOTIC_N = 15

KINDS = ("studentized_plus", "studentized_minus", "standardized_full", "standardized_windowed")
SHORT_NAMES = {
    "splus": "studentized_plus",
    "sminus": "studentized_minus",
    "sfull": "standardized_full",
    "swindow": "standardized_windowed",
}


@dataclass(frozen=True)
class LimitLaw:
    kind: str
    A: Optional[float] = None

    def __post_init__(self):
        kind = SHORT_NAMES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise DomainError(f"unknown limit law {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if kind == "standardized_windowed":
            if self.A is None or not self.A > 0:
                raise DomainError("the windowed standardized law needs A > 0")
        elif self.A is not None:
            raise DomainError(f"{kind} takes no A parameter")

    @property
    def short_name(self) -> str:
        return {v: k for k, v in SHORT_NAMES.items()}[self.kind]

    @property
    def constant(self) -> float:
        """Multiplier of e^-tau inside the double exponential."""
        if self.kind == "studentized_plus":
            return GUMBEL_C
        if self.kind == "studentized_minus":
            return math.e
        if self.kind == "standardized_windowed":
            return c_A(self.A)
        return math.nan

    def window_start(self, n: int) -> int:
        """k_n = ceil(A (log n)^3) for the windowed law, 1 otherwise."""
        if self.kind != "standardized_windowed":
            return 1
        return int(math.ceil(self.A * math.log(n) ** 3))


def _check_n(n: int) -> None:
    if n <= 2:
        raise DomainError(f"log log n is undefined or nonpositive for n={n}; need n >= 3")


def u_n_tau(n: int, tau: float) -> float:
    """(1 + (2 tau - 3 log log n) / (4 log n)) sqrt(2 log n)."""
    _check_n(n)
    log_n = math.log(n)
    return (1.0 + (-3.0 * math.log(log_n) + 2.0 * tau) / (4.0 * log_n)) * math.sqrt(2.0 * log_n)


def u_n_tau_expanded(n: int, tau: float) -> float:
    _check_n(n)
    root = math.sqrt(2.0 * math.log(n))
    return root - 3.0 * math.log(math.log(n)) / (2.0 * root) + tau / root


def threshold(law: LimitLaw, n: int, tau: float) -> float:
    if law.kind in ("studentized_plus", "standardized_windowed"):
        return u_n_tau(n, tau)
    if law.kind == "studentized_minus":
        if n < 2:
            raise DomainError("need n >= 2")
        return math.log(n) + tau
    if not tau > 0:
        raise DomainError("the full standardized law needs tau > 0")
    return math.sqrt(n / tau)


def tau_from_observed(law: LimitLaw, n: int, observed: float) -> float:
    """Inverse of :func:`threshold` in tau. For the full standardized law
    this is n / m^2 (``inf`` for m <= 0)."""
    if not math.isfinite(observed):
        raise DomainError("observed statistic must be finite")
    if law.kind in ("studentized_plus", "standardized_windowed"):
        _check_n(n)
        root = math.sqrt(2.0 * math.log(n))
        return (observed - root) * root + 1.5 * math.log(math.log(n))
    if law.kind == "studentized_minus":
        if n < 2:
            raise DomainError("need n >= 2")
        return observed - math.log(n)
    if observed <= 0:
        return math.inf
    return n / observed**2


def limit_cdf(law: LimitLaw, tau: float) -> float:
    if law.kind == "standardized_full":
        if not tau > 0:
            raise DomainError("the full standardized law needs tau > 0")
        return math.exp(-tau)
    return math.exp(-_tail_rate(law, tau))


def _clamp01(p: float) -> float:
    return min(1.0, max(0.0, p))


def p_value(law: LimitLaw, n: int, observed: float) -> float:
    """Upper-tail probability of ``observed`` under the limit law."""
    tau = tau_from_observed(law, n, observed)
    if law.kind == "standardized_full":
        if math.isinf(tau):
            return 1.0
        return _clamp01(-math.expm1(-tau))
    return _clamp01(-math.expm1(-_tail_rate(law, tau)))


def _tail_rate(law: LimitLaw, tau: float) -> float:
    # -log limit_cdf(tau), infinite instead of overflowing far in the lower tail
    exponent = 1.0 - tau if law.kind == "studentized_minus" else math.log(law.constant) - tau
    return math.exp(exponent) if exponent < 700.0 else math.inf


def _tau_at_level(law: LimitLaw, alpha: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    minus_log_cdf = -math.log1p(-alpha)
    if law.kind == "standardized_full":
        return minus_log_cdf
    if law.kind == "studentized_minus":
        return 1.0 - math.log(minus_log_cdf)
    return -math.log(minus_log_cdf / law.constant)


def critical_value(law: LimitLaw, n: int, alpha: float) -> float:
    """Threshold t with p_value(law, n, t) = alpha."""
    return threshold(law, n, _tau_at_level(law, alpha))


def calibrate(law: LimitLaw, n: int, alpha: Optional[float] = None,
              observed: Optional[float] = None) -> dict:
    """One calibration record, as emitted by the ``calibrate`` subcommand."""
    if (alpha is None) == (observed is None):
        raise DomainError("give exactly one of alpha or observed")
    out: dict = {"law": law.short_name, "n": int(n)}
    if law.A is not None:
        out["A"] = law.A
    if alpha is not None:
        tau = _tau_at_level(law, alpha)
        out["alpha"] = alpha
        out["tau"] = tau
        out["critical_value"] = threshold(law, n, tau)
    else:
        tau = tau_from_observed(law, n, observed)
        out["observed"] = observed
        out["tau"] = None if math.isinf(tau) else tau
        out["p_value"] = p_value(law, n, observed)
    out["warning_flags"] = ["pre_asymptotic_n"] if n <= PRE_ASYMPTOTIC_N else []
    return out


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10,
                     max_depth: int = 60) -> float:
    """Adaptive Simpson quadrature with Richardson correction.

    Each panel gets a share of ``tol`` proportional to its width, so the
    absolute error target holds over the whole interval.
    """
    def simpson(fa, fm, fb, h):
        return h * (fa + 4.0 * fm + fb) / 6.0

    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    total = 0.0
    stack = [(a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, whole, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = simpson(flo, flm, fmid, mid - lo)
        right = simpson(fmid, frm, fhi, hi - mid)
        delta = left + right - whole
        if depth >= max_depth or abs(delta) <= 15.0 * eps:
            total += left + right + delta / 15.0
        else:
            stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1))
            stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))
    return total


def c_A(A: float, tol: float = 1e-10) -> float:
    """Integral of (2 sqrt(pi) a^2)^-1 exp(sqrt(2) / (3 sqrt(a))) over a > A.

    Substituting b = 1/a turns it into (2 sqrt(pi))^-1 times the integral of
    exp(sqrt(2 b) / 3) over the finite range [0, 1/A].
    """
    if not A > 0:
        raise DomainError("c_A needs A > 0")
    scale = 1.0 / (2.0 * math.sqrt(math.pi))
    return scale * adaptive_simpson(lambda b: math.exp(_KAPPA * math.sqrt(b)), 0.0, 1.0 / A,
                                    tol=tol / scale)


def c_A_closed_form(A: float) -> float:
    """Antiderivative 2 e^(kv) (v/k - 1/k^2), v = sqrt(b), k = sqrt(2)/3."""
    if not A > 0:
        raise DomainError("c_A needs A > 0")
    v = 1.0 / math.sqrt(A)
    k = _KAPPA
    return (math.exp(k * v) * (v / k - 1.0 / k**2) + 1.0 / k**2) / math.sqrt(math.pi)


def exact_min_spacing_sf(n: int, t: float) -> float:
    """P(T >= t) = (1 - n t)^n for the minimum spacing T of n uniforms."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if t <= 0:
        return 1.0
    if t >= 1.0 / n:
        return 0.0
    return (1.0 - n * t) ** n


def kolmogorov_cdf(y: float, terms: Optional[int] = None) -> float:
    """K(y) = 1 + 2 sum_{k>=1} (-1)^k exp(-2 k^2 y^2).

    With ``terms`` given, that many terms of the alternating sum are added.
    Otherwise the alternating sum runs until a term drops below 1e-12, except
    for y < 0.5 where it cancels badly and the equivalent theta-function form
    sqrt(2 pi)/y sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 y^2)) is summed instead.
    """
    if y < 0:
        raise DomainError("y must be >= 0")
    if terms is not None:
        if terms < 1:
            raise DomainError("terms must be >= 1")
        total = 1.0 + 2.0 * sum((-1) ** k * math.exp(-2.0 * k * k * y * y) for k in range(1, terms + 1))
        return _clamp01(total)
    if y == 0.0:
        return 0.0
    if y < 0.5:
        total, k = 0.0, 1
        while True:
            term = math.exp(-((2 * k - 1) ** 2) * math.pi**2 / (8.0 * y * y))
            total += term
            if term < 1e-17 or k > 1000:
                break
            k += 1
        return _clamp01(math.sqrt(2.0 * math.pi) / y * total)
    total, k = 1.0, 1
    while True:
        term = 2.0 * math.exp(-2.0 * k * k * y * y)
        total += -term if k % 2 else term
        if term < 1e-12:
            break
        k += 1
    return _clamp01(total)
