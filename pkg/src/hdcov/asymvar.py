"""Asymptotic variance parameters, kernel long-run variance estimators and
the martingale that approximates the CUSUM partial sums.

With projected coefficients c^(v), c^(w) the quantities

    f~_{0,i} = sum_{j>=i} c_j^(v) c_j^(w)
    f~_{l,i} = sum_{j>=i} [c_j^(v) c_{j+l}^(w) + c_j^(w) c_{j+l}^(v)],  l >= 1

are the weights of eps_k^2 and eps_k eps_{k-l} in the martingale
decomposition of sum_k y_k(v) y_k(w).  For stationary innovations the
long-run variance of that sum is

    alpha^2 = (gamma4 - sigma^4) f~_{0,0}^2 + sigma^4 sum_{l>=1} f~_{l,0}^2.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np
from scipy.signal import correlate, fftconvolve

from .covstats import WeightVector, _check_dims, as_weights, product_series
from .lin_process import CoefficientModel, InnovationSpec, Panel, _frozen

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProjectedCoefficients:
    """c_j^(w) = sum_nu w_nu c_j^(nu), j = 0..J."""

    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _frozen(np.atleast_1d(self.coeffs)))

    @property
    def J(self) -> int:
        return self.coeffs.size - 1


def projected_coefficients(model: CoefficientModel, w) -> ProjectedCoefficients:
    w = as_weights(w)
    if w.d != model.d:
        raise ValueError(f"weight dimension {w.d} does not match model dimension {model.d}")
    return ProjectedCoefficients(model.coefficients @ w.entries)


def _coeffs(c) -> np.ndarray:
    return c.coeffs if isinstance(c, ProjectedCoefficients) else np.atleast_1d(np.asarray(c, dtype=float))


def f_tilde_all(cv, cw) -> np.ndarray:
    """f~_{l,0} for l = 0..J as one array (zero beyond J in the truncated model)."""
    a, b = _coeffs(cv), _coeffs(cw)
    J = max(a.size, b.size) - 1
    a = np.pad(a, (0, J + 1 - a.size))
    b = np.pad(b, (0, J + 1 - b.size))
    # cross[l + J] = sum_j a_j b_{j+l}
    ab = correlate(b, a, mode="full")[J:]
    ba = correlate(a, b, mode="full")[J:]
    out = ab + ba
    out[0] = a @ b
    return out


def f_tilde(cv, cw, l: int, i: int = 0) -> float:
    """f~_{l,i}; the l = 0 term is the unsymmetrized sum_{j>=i} c_j^(v) c_j^(w)."""
    if l < 0 or i < 0:
        raise ValueError("l and i must be nonnegative")
    a, b = _coeffs(cv), _coeffs(cw)
    J = max(a.size, b.size) - 1
    a = np.pad(a, (0, J + 1 - a.size))
    b = np.pad(b, (0, J + 1 - b.size))
    if i > J:
        return 0.0
    if l == 0:
        return float(a[i:] @ b[i:])
    if l > J:
        return 0.0
    m = J + 1 - l
    return float(a[i:m] @ b[i + l :] + b[i:m] @ a[i + l :])


@dataclass(frozen=True)
class LimitVariance:
    alpha2: float
    L_max: int
    J: int
    tail: float  # sigma^4 * sum_{l > L_max} f~_{l,0}^2, the part dropped by truncating at L_max


def _series_terms(cv, cw, L_max: int | None) -> tuple[np.ndarray, int, int]:
    f = f_tilde_all(cv, cw)
    J = f.size - 1
    if L_max is None:
        L_max = 4 * J
    return f, J, L_max


def alpha_squared(model: CoefficientModel, innov: InnovationSpec, v, w, L_max: int | None = None) -> LimitVariance:
    """Long-run variance alpha^2(v, w) of the scaled CUSUM process, stationary innovations."""
    cv = projected_coefficients(model, v)
    cw = projected_coefficients(model, w)
    f, J, L_max = _series_terms(cv, cw, L_max)
    s4 = innov.sigma2**2
    kept = f[1 : L_max + 1]
    dropped = f[L_max + 1 :]
    a2 = (innov.gamma4 - s4) * f[0] ** 2 + s4 * float(kept @ kept)
    tail = s4 * float(dropped @ dropped)
    if a2 < -1e-12 * max(1.0, abs(f[0]) ** 2):
        raise ArithmeticError(f"alpha^2 = {a2} is negative; truncation failure")
    return LimitVariance(float(max(a2, 0.0)), L_max, J, tail)


def beta_coefficient(model: CoefficientModel, innov: InnovationSpec, pair1, pair2, L_max: int | None = None) -> float:
    """Asymptotic covariance of D_n(1; v, w) and D_n(1; v~, w~)."""
    (v1, w1), (v2, w2) = pair1, pair2
    f1, J, L_max = _series_terms(projected_coefficients(model, v1), projected_coefficients(model, w1), L_max)
    f2, _, _ = _series_terms(projected_coefficients(model, v2), projected_coefficients(model, w2), L_max)
    s4 = innov.sigma2**2
    return float((innov.gamma4 - s4) * f1[0] * f2[0] + s4 * (f1[1 : L_max + 1] @ f2[1 : L_max + 1]))


def beta_matrix(model: CoefficientModel, innov: InnovationSpec, pairs, L_max: int | None = None) -> np.ndarray:
    """K x K matrix of beta_n over weight pairs; the diagonal holds alpha^2."""
    K = len(pairs)
    out = np.empty((K, K))
    for r in range(K):
        for s in range(r, K):
            out[r, s] = out[s, r] = beta_coefficient(model, innov, pairs[r], pairs[s], L_max)
    return out


# --------------------------------------------------------------------------
# kernel estimators
# --------------------------------------------------------------------------


def auto_bandwidth(n: int) -> int:
    """m = floor(n^(1/3)), so that m^2 / n -> 0."""
    m = int(math.floor(n ** (1.0 / 3.0)))
    while (m + 1) ** 3 <= n:
        m += 1
    while m**3 > n:
        m -= 1
    return m


@dataclass(frozen=True)
class KernelSpec:
    """Lag window w_{mh} = w(h / (m + 1)) with bandwidth m = rule(n).

    Bartlett is the triangular window w(x) = (1 - x)+ (Newey-West weights
    1 - h/(m+1)); the truncated kernel gives weight one to lags 1..m.
    """

    kind: Literal["bartlett", "truncated"] = "bartlett"
    bandwidth: int | None = None
    rule: Callable[[int], int] = auto_bandwidth

    def __post_init__(self) -> None:
        if self.kind not in ("bartlett", "truncated"):
            raise ValueError(f"unknown kernel {self.kind!r}")
        if self.bandwidth is not None and self.bandwidth < 0:
            raise ValueError("bandwidth must be nonnegative")

    def m(self, n: int) -> int:
        return self.bandwidth if self.bandwidth is not None else int(self.rule(n))

    def weights(self, m: int) -> np.ndarray:
        """w_{m,h} for h = 1..m."""
        h = np.arange(1, m + 1, dtype=float)
        if self.kind == "truncated":
            return np.ones(m)
        return 1.0 - h / (m + 1.0)


def cross_autocov(xr: np.ndarray, xs: np.ndarray, m: int) -> np.ndarray:
    """Gamma_hat^(r,s)(h) = n^{-1} sum_{k<=n-h} (x_k(r) - mean_r)(x_{k+h}(s) - mean_s), h = 0..m.

    Operates along the last axis, so stacked replications are handled at once.
    """
    n = xr.shape[-1]
    a = xr - xr.mean(axis=-1, keepdims=True)
    b = a if xs is xr else xs - xs.mean(axis=-1, keepdims=True)
    out = np.empty(a.shape[:-1] + (m + 1,))
    for h in range(m + 1):
        out[..., h] = np.einsum("...k,...k->...", a[..., : n - h], b[..., h:]) / n
    return out


def lrv_from_products(xr: np.ndarray, kernel: KernelSpec, xs: np.ndarray | None = None) -> np.ndarray:
    """Kernel long-run (co)variance of one or two product series along the last axis."""
    n = xr.shape[-1]
    m = kernel.m(n)
    if n <= m + 1:
        raise ValueError(f"need n > m + 1, got n={n}, m={m}")
    g = cross_autocov(xr, xr if xs is None else xs, m)
    return g[..., 0] + 2.0 * g[..., 1:] @ kernel.weights(m)


def _clamped(a2: float, clamp: bool) -> float:
    if clamp and a2 < 0:
        logger.warning("long-run variance estimate %.3g is negative; clamped to 0", a2)
        return 0.0
    return a2


def lrv_estimate(panel: Panel, v, w, kernel: KernelSpec | None = None, clamp: bool = False) -> float:
    """Bartlett/truncated-kernel estimate alpha_hat^2 of alpha^2(v, w).

    Not floored at zero unless ``clamp`` is set (then a warning is logged).
    """
    kernel = kernel or KernelSpec()
    v, w = as_weights(v), as_weights(w)
    _check_dims(panel, v, w)
    a2 = float(lrv_from_products(product_series(panel, v, w), kernel))
    return _clamped(a2, clamp)


def cross_lrv_estimate(
    panel: Panel,
    pair_r,
    pair_s,
    kernel: KernelSpec | None = None,
    symmetric: bool = False,
) -> float:
    """beta_hat^2(r, s) = Gamma_hat^(r,s)(0) + 2 sum_h w_{mh} Gamma_hat^(r,s)(h).

    The default follows the one-sided lag convention (pair r leads).  With
    ``symmetric=True`` the lag-h terms are averaged over both leads, which
    targets sum over all integer h of Cov(xi_1(r), xi_{1+h}(s)) when the
    cross-autocovariances are not symmetric in h.
    """
    kernel = kernel or KernelSpec()
    xr = product_series(panel, *pair_r)
    xs = product_series(panel, *pair_s)
    est = lrv_from_products(xr, kernel, xs)
    if symmetric:
        est = 0.5 * (est + lrv_from_products(xs, kernel, xr))
    return float(est)


# --------------------------------------------------------------------------
# martingale oracle
# --------------------------------------------------------------------------


def martingale_path(eps: np.ndarray, cv, cw, sigma2: float) -> np.ndarray:
    """M_k for k = 1..n along the last axis of ``eps`` = (eps_{1-J}, ..., eps_n).

    M_k = f~_{0,0} sum_{i=1}^k (eps_i^2 - sigma^2) + sum_{i=1}^k eps_i sum_{l>=1} f~_{l,0} eps_{i-l}.
    The sum starts at i = 1, the first observation index of the panel.
    """
    f = f_tilde_all(cv, cw)
    J = f.size - 1
    eps = np.asarray(eps, dtype=float)
    n = eps.shape[-1] - J
    if n < 1:
        raise ValueError(f"innovation history must reach back J={J} lags before the first index")
    cur = eps[..., J:]
    incr = f[0] * (cur**2 - sigma2)
    if J > 0:
        # lagged[i] = sum_{l=1}^J f_l eps_{i-l}
        kernel = np.concatenate([[0.0], f[1:]]).reshape((1,) * (eps.ndim - 1) + (-1,))
        lagged = fftconvolve(eps, kernel, mode="valid", axes=-1)
        incr = incr + cur * lagged
    return np.cumsum(incr, axis=-1)


def martingale_partial_sum(eps, cv, cw, k: int, sigma2: float) -> float:
    """M_k for innovations ``eps`` = (eps_{1-J}, ..., eps_n) with J = len(c) - 1."""
    J = max(_coeffs(cv).size, _coeffs(cw).size) - 1
    eps = np.asarray(eps, dtype=float).ravel()
    if k < 1:
        raise ValueError("k must be positive")
    if eps.size < J + k:
        raise ValueError(f"need {J + k} innovations (J={J} pre-sample plus k={k}), got {eps.size}")
    return float(martingale_path(eps[: J + k], cv, cw, sigma2)[-1])
