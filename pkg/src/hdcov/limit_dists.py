"""Laws of sup_{[0,1]} |B(t)| and sup_{[0,1]} |B^0(t)| (Brownian motion / bridge)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from scipy.optimize import brentq

LawKind = Literal["sup_abs_bm", "sup_abs_bridge"]

_MAX_TERMS = 100_000


@dataclass(frozen=True)
class LimitLaw:
    kind: LawKind
    series_tol: float = 1e-12

    def __post_init__(self) -> None:
        if self.kind not in ("sup_abs_bm", "sup_abs_bridge"):
            raise ValueError(f"unknown limit law {self.kind!r}")

    def cdf(self, x: float) -> float:
        return cdf(self, x)

    def sf(self, x: float) -> float:
        return 1.0 - cdf(self, x)

    def quantile(self, p: float) -> float:
        return quantile(self, p)


SUP_ABS_BM = LimitLaw("sup_abs_bm")
SUP_ABS_BRIDGE = LimitLaw("sup_abs_bridge")


def _as_law(law) -> LimitLaw:
    return law if isinstance(law, LimitLaw) else LimitLaw(law)


def _alternating(term, start: int, tol: float) -> float:
    total = 0.0
    k = start
    while k < start + _MAX_TERMS:
        t = term(k)
        total += t
        if abs(t) < tol:
            break
        k += 1
    return total


def _cdf_bm(x: float, tol: float) -> float:
    if x < 0.05:
        return 0.0
    c = math.pi**2 / (8.0 * x * x)
    s = _alternating(lambda k: (-1) ** k / (2 * k + 1) * math.exp(-((2 * k + 1) ** 2) * c), 0, tol)
    return min(max(4.0 / math.pi * s, 0.0), 1.0)


def _cdf_bridge(x: float, tol: float) -> float:
    # Below x = 1 the alternating sum converges slowly and cancels badly;
    # the Jacobi-transformed series is exact and converges fast there.
    if x < 1.0:
        c = math.pi**2 / (8.0 * x * x)
        s = _alternating(lambda k: math.exp(-((2 * k - 1) ** 2) * c), 1, tol)
        return min(max(math.sqrt(2.0 * math.pi) / x * s, 0.0), 1.0)
    s = _alternating(lambda k: (-1) ** (k - 1) * math.exp(-2.0 * k * k * x * x), 1, tol)
    return min(max(1.0 - 2.0 * s, 0.0), 1.0)


def cdf(law, x: float) -> float:
    """P(sup |B| <= x) or P(sup |B^0| <= x); zero for x <= 0."""
    law = _as_law(law)
    if x <= 0:
        return 0.0
    if law.kind == "sup_abs_bm":
        return _cdf_bm(x, law.series_tol)
    return _cdf_bridge(x, law.series_tol)


def quantile(law, p: float) -> float:
    """x with cdf(x) = p, located by bracketed root finding on [1e-6, 10]."""
    law = _as_law(law)
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    lo, hi = 1e-6, 10.0
    f = lambda x: cdf(law, x) - p  # noqa: E731
    if f(hi) < 0:
        return hi
    if f(lo) >= 0:
        return lo
    return brentq(f, lo, hi, xtol=1e-14, rtol=4 * 2.220446049250313e-16, maxiter=500)
