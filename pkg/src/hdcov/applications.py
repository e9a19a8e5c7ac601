"""Closed-form portfolio weights, l1-constrained projections and covariance shrinkage."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .covstats import WeightVector, as_weights
from .lin_process import _frozen


class NotPositiveDefiniteError(ValueError):
    pass


class DegenerateConstraintsError(ValueError):
    pass


@dataclass(frozen=True)
class PortfolioSolution:
    weights: WeightVector
    variance: float
    achieved_mean: float | None = None

    def to_dict(self) -> dict:
        return {
            "weights": self.weights.entries.tolist(),
            "variance": self.variance,
            "achieved_mean": self.achieved_mean,
        }


def _cholesky(sigma) -> tuple:
    s = np.asarray(sigma, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError("covariance matrix must be square")
    if not np.allclose(s, s.T, rtol=1e-10, atol=1e-12):
        raise ValueError("covariance matrix must be symmetric")
    try:
        return cho_factor(s, lower=True), s
    except LinAlgError as exc:
        raise NotPositiveDefiniteError(
            "covariance matrix is not positive definite; shrink it first (shrink_covariance)"
        ) from exc


def min_variance_weights(sigma) -> PortfolioSolution:
    """w = Sigma^{-1} 1 / (1' Sigma^{-1} 1), the global minimum-variance portfolio."""
    cf, s = _cholesky(sigma)
    x = cho_solve(cf, np.ones(s.shape[0]))
    a = x.sum()
    w = x / a
    return PortfolioSolution(WeightVector(w), float(1.0 / a))


def mean_variance_weights(sigma, mu, mu0: float) -> PortfolioSolution:
    """Minimum-variance weights subject to w'1 = 1 and w'mu = mu0."""
    cf, s = _cholesky(sigma)
    mu = np.asarray(mu, dtype=float).ravel()
    if mu.size != s.shape[0]:
        raise ValueError("mu and sigma dimensions differ")
    x1 = cho_solve(cf, np.ones(mu.size))
    xm = cho_solve(cf, mu)
    a, b, c = x1.sum(), x1 @ mu, mu @ xm
    det = a * c - b * b
    if det <= 1e-12 * a * c:
        raise DegenerateConstraintsError("mean vector is (nearly) proportional to 1; constraints are degenerate")
    w = (c - mu0 * b) / det * x1 + (mu0 * a - b) / det * xm
    return PortfolioSolution(WeightVector(w), float(w @ s @ w), float(w @ mu))


def soft_threshold(a, delta: float):
    """sgn(a) (|a| - delta)_+, elementwise."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    out = np.sign(a) * np.maximum(np.abs(a) - delta, 0.0)
    return float(out) if np.ndim(out) == 0 else out


def l1_project(w, c: float, tol: float = 1e-8, max_iter: int = 200) -> WeightVector:
    """Unit-l2 vector S(w, delta)/||S(w, delta)||_2 with l1 norm c.

    The l1 budget applies to the normalized output.  delta = 0 when
    w/||w||_2 already has l1 norm <= c; otherwise delta is bisected on
    [0, max|w|].  Soft-thresholding treats equal magnitudes alike, so ties
    survive or vanish together.  The one exception: if t entries tie for the
    largest magnitude and c < sqrt(t), no threshold meets the budget, and the
    first floor(c^2) of the tied entries are kept (for c = 1, the first one).
    """
    w = as_weights(w).entries
    if c < 1:
        raise ValueError("c must be at least 1 (a unit l2 vector has l1 norm >= 1)")
    l2 = np.sqrt(w @ w)
    if l2 == 0:
        raise ValueError("cannot project the zero vector")
    u = w / l2
    if np.abs(u).sum() <= c + tol:
        return WeightVector(u)

    def l1_of(delta: float) -> float:
        s = soft_threshold(w, delta)
        n2 = np.sqrt(s @ s)
        return np.abs(s).sum() / n2 if n2 > 0 else 0.0

    top = np.abs(w).max()
    ties = np.flatnonzero(np.abs(w) == top)
    if c * c < ties.size - tol:
        keep = ties[: max(1, int(np.floor(c * c + tol)))]
        out = np.zeros_like(w)
        out[keep] = np.sign(w[keep])
        return WeightVector(out / np.sqrt(keep.size))

    # l1 of the normalized output is continuous and nonincreasing on [0, top)
    lo, hi = 0.0, top
    delta = lo
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        val = l1_of(mid)
        if abs(val - c) <= tol:
            delta = mid
            break
        if val > c:
            lo = delta = mid
        else:
            hi = mid
    s = soft_threshold(w, delta)
    return WeightVector(s / np.sqrt(s @ s))


@dataclass(frozen=True)
class ShrinkResult:
    matrix: np.ndarray = field(repr=False)
    weight: float
    grand_mean: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _frozen(self.matrix))

    def to_dict(self) -> dict:
        return {"matrix": self.matrix.tolist(), "weight": self.weight, "grand_mean": self.grand_mean}


def _square(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    return m


def grand_mean(sigma_hat) -> float:
    """d^{-1} trace(Sigma_hat): the average eigenvalue."""
    s = _square(sigma_hat)
    return float(np.trace(s) / s.shape[0])


def shrink_covariance(sigma_hat, W: float) -> ShrinkResult:
    """(1 - W) Sigma_hat + W mu I with mu = trace(Sigma_hat)/d."""
    if not 0 <= W <= 1:
        raise ValueError("shrinkage weight must lie in [0, 1]")
    s = _square(sigma_hat)
    mu = grand_mean(s)
    out = (1.0 - W) * s
    out[np.diag_indices_from(out)] += W * mu
    return ShrinkResult(out, float(W), mu)


def estimate_shrink_weight(replicates) -> float:
    """W* = mean ||Sigma_hat - Sigma||_F^2 / mean ||mu I - Sigma_hat||_F^2, clamped to [0, 1].

    ``replicates`` yields ``(sigma_hat, sigma_ref)`` pairs, where ``sigma_ref``
    is the true covariance or a held-out estimate of it.
    """
    num = den = 0.0
    count = 0
    for sigma_hat, sigma_ref in replicates:
        s, ref = _square(sigma_hat), _square(sigma_ref)
        num += np.sum((s - ref) ** 2)
        target = s.copy()
        target[np.diag_indices_from(target)] -= grand_mean(s)
        den += np.sum(target**2)
        count += 1
    if count == 0:
        raise ValueError("need at least one replicate")
    if den == 0:
        raise ZeroDivisionError("every Sigma_hat is a multiple of the identity; shrinkage weight undefined")
    return float(min(max(num / den, 0.0), 1.0))


def plugin_shrink_weight(panel) -> float:
    """Data-driven W* from one panel, for when no true Sigma is available.

    The numerator E||Sigma_hat - Sigma||_F^2 is replaced by its sample analog
    n^{-2} sum_i ||Y_i Y_i' - Sigma_hat||_F^2, which is unbiased for
    serially uncorrelated observations; dependence makes it optimistic.
    """
    x = np.asarray(panel.data, dtype=float)
    n = x.shape[0]
    if n < 2:
        raise ValueError("need n >= 2 observations")
    s = x.T @ x / n
    s = (s + s.T) / 2
    # ||y y' - S||_F^2 = |y|^4 - 2 y'Sy + ||S||_F^2
    sq = np.einsum("ij,ij->i", x, x)
    quad = np.einsum("ij,jk,ik->i", x, s, x)
    num = float(np.sum(sq**2 - 2 * quad + np.sum(s**2))) / n**2
    target = s.copy()
    target[np.diag_indices_from(target)] -= grand_mean(s)
    den = float(np.sum(target**2))
    if den == 0:
        raise ZeroDivisionError("Sigma_hat is a multiple of the identity; shrinkage weight undefined")
    return float(min(max(num / den, 0.0), 1.0))
