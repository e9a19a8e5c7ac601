"""Sample covariances, bilinear forms and CUSUM partial-sum paths.

All statistics go through the two projected series y_i(v) = v'Y_i and
y_i(w) = w'Y_i, since v'(sum_i Y_i Y_i')w = sum_i y_i(v) y_i(w).  That costs
O(n d) and never forms a d x d matrix, which matters when d exceeds n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .lin_process import Panel, _frozen


@dataclass(frozen=True)
class WeightVector:
    """Projection vector with cached l1 and l2 norms."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        e = np.asarray(self.entries, dtype=float).ravel()
        if not np.all(np.isfinite(e)):
            raise ValueError("weight entries must be finite")
        object.__setattr__(self, "entries", _frozen(e))

    @property
    def d(self) -> int:
        return self.entries.size

    @property
    def l1(self) -> float:
        return float(np.abs(self.entries).sum())

    @property
    def l2(self) -> float:
        return float(np.sqrt((self.entries**2).sum()))

    def __mul__(self, s: float) -> WeightVector:
        return WeightVector(s * self.entries)

    __rmul__ = __mul__

    def __add__(self, other: WeightVector) -> WeightVector:
        return WeightVector(self.entries + as_weights(other).entries)

    @classmethod
    def uniform(cls, d: int) -> WeightVector:
        return cls(np.full(d, 1.0 / d))

    @classmethod
    def unit(cls, d: int, index: int) -> WeightVector:
        e = np.zeros(d)
        e[index] = 1.0
        return cls(e)

    @classmethod
    def from_json(cls, doc, d: int | None = None) -> WeightVector:
        """Parse a JSON array or a sparse ``{index: value}`` map (0-based indices).

        ``doc`` may be the JSON text or the already decoded object.  Sparse maps
        need the dimension ``d``.
        """
        if isinstance(doc, (str, bytes)):
            doc = json.loads(doc)
        if isinstance(doc, dict):
            if d is None:
                raise ValueError("sparse weight maps need the dimension d")
            e = np.zeros(d)
            for k, val in doc.items():
                idx = int(k)
                if not 0 <= idx < d:
                    raise ValueError(f"weight index {idx} outside 0..{d - 1}")
                e[idx] = float(val)
            return cls(e)
        w = cls(np.asarray(doc, dtype=float))
        if d is not None and w.d != d:
            raise ValueError(f"weight vector has {w.d} entries, expected {d}")
        return w

    def to_json(self) -> str:
        return json.dumps(self.entries.tolist())


def as_weights(w) -> WeightVector:
    return w if isinstance(w, WeightVector) else WeightVector(w)


PathKind = Literal["raw", "scaled", "bridge"]


@dataclass(frozen=True)
class PartialSumPath:
    """Values at k = 1..n (``values[k-1]``) of D_nk, D_n(k/n) or its bridge."""

    values: np.ndarray = field(repr=False)
    kind: PathKind

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _frozen(self.values))

    @property
    def n(self) -> int:
        return self.values.size

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("k,value\n")
            for k, val in enumerate(self.values.tolist(), start=1):
                fh.write(f"{k},{val!r}\n")


def _check_dims(panel: Panel, *ws: WeightVector) -> None:
    for w in ws:
        if w.d != panel.d:
            raise ValueError(f"weight dimension {w.d} does not match panel dimension {panel.d}")


def sample_cov(panel: Panel) -> np.ndarray:
    """(1/n) sum_i Y_i Y_i' without mean-centering."""
    if panel.n < 1:
        raise ValueError("empty panel")
    x = panel.data
    s = x.T @ x / panel.n
    return (s + s.T) / 2


def project_series(panel: Panel, w) -> np.ndarray:
    """y_i(w) = sum_nu w_nu Y_i^(nu), i = 1..n."""
    w = as_weights(w)
    _check_dims(panel, w)
    return panel.data @ w.entries


def product_series(panel: Panel, v, w) -> np.ndarray:
    """y_i(v) y_i(w), the summands of v' Sigma_hat_nk w."""
    v, w = as_weights(v), as_weights(w)
    yv = project_series(panel, v)
    yw = yv if w is v or np.array_equal(v.entries, w.entries) else project_series(panel, w)
    return yv * yw


def bilinear_form(panel: Panel, v, w) -> float:
    """Q_n(v, w) = v' Sigma_hat_n w via the projected series."""
    if panel.n < 1:
        raise ValueError("empty panel")
    return float(np.mean(product_series(panel, v, w)))


def cusum_from_products(products: np.ndarray, target) -> np.ndarray:
    """Raw path D_k = sum_{i<=k} (p_i - t_i) along the last axis.

    ``target`` is either a scalar v'Sigma_0 w (stationary case) or the per
    observation expectations v'Sigma_n[i] w, broadcast against ``products``.
    """
    return np.cumsum(products - target, axis=-1)


def bridge_from_products(products: np.ndarray) -> np.ndarray:
    """Scaled bridge D_n(k/n) - (k/n) D_n(1) along the last axis; the target cancels."""
    p = np.asarray(products, dtype=float)
    n = p.shape[-1]
    s = np.cumsum(p, axis=-1)
    k = np.arange(1, n + 1)
    b = (s - (k / n) * s[..., -1:]) / np.sqrt(n)
    b[..., -1] = 0.0
    return b


def partial_sum_path(panel: Panel, v, w, sigma0=None, *, target=None) -> tuple[PartialSumPath, PartialSumPath]:
    """Raw D_nk and scaled D_n(k/n) = n^{-1/2} D_nk for k = 1..n.

    Pass either the stationary covariance ``sigma0`` (d x d, giving
    Sigma_nk = k Sigma_0) or ``target``: a scalar v'Sigma_0 w or a length-n
    sequence of per-observation values v'Sigma_n[i] w.
    """
    v, w = as_weights(v), as_weights(w)
    _check_dims(panel, v, w)
    if (sigma0 is None) == (target is None):
        raise ValueError("give exactly one of sigma0 or target")
    if sigma0 is not None:
        s0 = np.asarray(sigma0, dtype=float)
        if s0.shape != (panel.d, panel.d):
            raise ValueError(f"sigma0 has shape {s0.shape}, expected ({panel.d}, {panel.d})")
        t = float(v.entries @ s0 @ w.entries)
    else:
        t = np.asarray(target, dtype=float)
        if t.ndim > 0 and t.shape != (panel.n,):
            raise ValueError(f"target sequence must have length n={panel.n}")
    raw = cusum_from_products(product_series(panel, v, w), t)
    return PartialSumPath(raw, "raw"), PartialSumPath(raw / np.sqrt(panel.n), "scaled")


def bridge_path(panel: Panel, v, w) -> PartialSumPath:
    """D_n^0(k/n) = D_n(k/n) - (k/n) D_n(1), free of the unknown covariance."""
    v, w = as_weights(v), as_weights(w)
    _check_dims(panel, v, w)
    if panel.n < 2:
        raise ValueError("bridge path needs n >= 2")
    return PartialSumPath(bridge_from_products(product_series(panel, v, w)), "bridge")


def autocov_estimates(z, h: int) -> tuple[float, float]:
    """(gamma_hat(h), gamma_tilde(h)) with gamma_tilde = T/(T-h) gamma_hat."""
    z = np.asarray(z, dtype=float).ravel()
    T = z.size
    if not 0 <= h < T:
        raise ValueError(f"lag h={h} must satisfy 0 <= h < T={T}")
    g = float(z[: T - h] @ z[h:]) / T
    return g, g * T / (T - h)
