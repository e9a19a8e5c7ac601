"""Linear-process panel model.

Every coordinate of the panel is a causal moving average of one common
innovation sequence,

    Y_i^(nu) = sum_{j=0}^{J} c_j^(nu) eps_{i-j},

truncated at lag ``J``.  The simulator draws the ``J`` pre-sample innovations
explicitly, so the simulated law is exactly the truncated model and every
moment formula in :mod:`hdcov.asymvar` is consistent with it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal

import numpy as np
from scipy.signal import fftconvolve

DEFAULT_J = 1000

Distribution = Literal["gaussian", "student_t", "uniform"]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


# --------------------------------------------------------------------------
# innovations and seeding
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class InnovationSpec:
    """I.i.d. innovation law with variance ``sigma2``.

    Student-t draws are rescaled to variance ``sigma2``; ``df`` must exceed 4
    so that moments of order 4 + delta exist.
    """

    distribution: Distribution = "gaussian"
    sigma2: float = 1.0
    df: float | None = None

    def __post_init__(self) -> None:
        if self.distribution not in ("gaussian", "student_t", "uniform"):
            raise ValueError(f"unknown innovation distribution {self.distribution!r}")
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0):
            raise ValueError("sigma2 must be positive and finite")
        if self.distribution == "student_t":
            if self.df is None or not self.df > 4:
                raise ValueError("student_t innovations need df > 4 (finite 4+delta moments)")
        elif self.df is not None:
            raise ValueError("df only applies to student_t innovations")

    @property
    def gamma4(self) -> float:
        """Fourth moment E eps^4."""
        s4 = self.sigma2**2
        if self.distribution == "gaussian":
            return 3.0 * s4
        if self.distribution == "uniform":
            return 9.0 * s4 / 5.0
        df = self.df
        return 3.0 * s4 * (df - 2.0) / (df - 4.0)

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        if self.distribution == "gaussian":
            return math.sqrt(self.sigma2) * rng.standard_normal(size)
        if self.distribution == "uniform":
            a = math.sqrt(3.0 * self.sigma2)
            return rng.uniform(-a, a, size)
        scale = math.sqrt(self.sigma2 * (self.df - 2.0) / self.df)
        return scale * rng.standard_t(self.df, size)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"distribution": self.distribution, "sigma2": self.sigma2}
        if self.df is not None:
            out["df"] = self.df
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> InnovationSpec:
        return cls(doc.get("distribution", "gaussian"), float(doc.get("sigma2", 1.0)), doc.get("df"))


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Counter-based generator for replication ``index`` of run ``seed``.

    Philox keyed by ``(seed, index)``: distinct indices give non-overlapping
    streams, and the k-th draw of a stream is fixed regardless of how
    replications are scheduled.
    """
    key = np.array([int(seed) % 2**64, int(index) % 2**64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def draw_innovations(innov: InnovationSpec, n: int, J: int, seed: int, index: int = 0) -> np.ndarray:
    """Innovations eps_{1-J}, ..., eps_n (length ``n + J``) for one replication."""
    return innov.draw(stream(seed, index), n + J)


# --------------------------------------------------------------------------
# coefficient models
# --------------------------------------------------------------------------


def farima_coefficients(d_mem: float, J: int) -> np.ndarray:
    """MA(infinity) weights of fractionally integrated noise, lags 0..J.

    Uses the recursion theta_k = theta_{k-1} (k - 1 + d) / k, which equals
    Gamma(k + d) / (Gamma(k + 1) Gamma(d)) without overflow.
    """
    if J < 0:
        raise ValueError("J must be nonnegative")
    k = np.arange(1, J + 1, dtype=float)
    out = np.empty(J + 1)
    out[0] = 1.0
    out[1:] = np.cumprod((k - 1.0 + d_mem) / k)
    return out


_KINDS = ("explicit", "geometric", "polynomial", "farima", "loading")


def _per_coord(x, d: int | None, name: str) -> np.ndarray:
    a = np.atleast_1d(np.asarray(x, dtype=float))
    if a.ndim != 1:
        raise ValueError(f"{name} must be a scalar or a 1-d sequence")
    if d is not None and a.size == 1:
        a = np.full(d, a[0])
    if d is not None and a.size != d:
        raise ValueError(f"{name} has {a.size} entries, expected d={d}")
    return a


@dataclass(frozen=True)
class CoefficientModel:
    """MA coefficients ``c_j^(nu)`` of the panel, stored as a ``(J+1, d)`` array.

    Build instances with the classmethod constructors; ``params`` keeps the
    generating parameters so the model can be serialized back to JSON.
    """

    kind: str
    params: dict
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown coefficient model kind {self.kind!r}")
        c = np.asarray(self.coefficients, dtype=float)
        if c.ndim != 2 or c.shape[0] < 1 or c.shape[1] < 1:
            raise ValueError("coefficients must be a nonempty (J+1, d) array")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coefficients", _frozen(c))

    @property
    def J(self) -> int:
        return self.coefficients.shape[0] - 1

    @property
    def d(self) -> int:
        return self.coefficients.shape[1]

    # constructors -----------------------------------------------------------

    @classmethod
    def explicit(cls, coefficients) -> CoefficientModel:
        """``coefficients[j, nu]`` = c_j^(nu); a 1-d input is a single coordinate."""
        c = np.asarray(coefficients, dtype=float)
        if c.ndim == 1:
            c = c[:, None]
        return cls("explicit", {"coefficients": c.tolist()}, c)

    @classmethod
    def geometric(cls, rho, J: int = DEFAULT_J, d: int | None = None, scale=1.0) -> CoefficientModel:
        """c_j^(nu) = scale_nu * rho_nu**j, i.e. a causal AR(1) per coordinate."""
        rho = _per_coord(rho, d, "rho")
        d = rho.size
        scale = _per_coord(scale, d, "scale")
        if np.any(np.abs(rho) >= 1):
            raise ValueError("geometric model needs |rho| < 1")
        j = np.arange(J + 1, dtype=float)[:, None]
        c = scale[None, :] * rho[None, :] ** j
        return cls("geometric", {"rho": rho.tolist(), "scale": scale.tolist(), "J": J}, c)

    @classmethod
    def polynomial(cls, scale, exponent, J: int = DEFAULT_J, d: int | None = None) -> CoefficientModel:
        """c_j^(nu) = a_nu (j v 1)^(-p_nu) with p_nu > 3/4."""
        exponent = _per_coord(exponent, d, "exponent")
        d = exponent.size
        scale = _per_coord(scale, d, "scale")
        if np.any(exponent <= 0.75):
            raise ValueError("polynomial decay exponent must exceed 3/4")
        j = np.maximum(np.arange(J + 1, dtype=float), 1.0)[:, None]
        c = scale[None, :] * j ** (-exponent[None, :])
        return cls("polynomial", {"scale": scale.tolist(), "exponent": exponent.tolist(), "J": J}, c)

    @classmethod
    def farima(cls, d_mem, J: int = DEFAULT_J, d: int | None = None) -> CoefficientModel:
        """Fractionally integrated noise per coordinate, memory order in (-1/2, 1/2)."""
        d_mem = _per_coord(d_mem, d, "d_mem")
        if np.any(np.abs(d_mem) >= 0.5):
            raise ValueError("FARIMA memory order must lie in (-1/2, 1/2)")
        c = np.column_stack([farima_coefficients(x, J) for x in d_mem])
        return cls("farima", {"d_mem": d_mem.tolist(), "J": J}, c)

    @classmethod
    def loading(cls, mixing, base) -> CoefficientModel:
        """c^(nu) = sum_k mixing[nu, k] * base[k]; ``base`` is ``(q, J+1)``."""
        mixing = np.atleast_2d(np.asarray(mixing, dtype=float))
        base = np.atleast_2d(np.asarray(base, dtype=float))
        if mixing.shape[1] != base.shape[0]:
            raise ValueError("mixing is (d, q) and base is (q, J+1); inner sizes differ")
        c = (mixing @ base).T
        return cls("loading", {"mixing": mixing.tolist(), "base": base.tolist()}, c)

    def scaled(self, factors) -> CoefficientModel:
        """Model with coordinate nu multiplied by ``factors[nu]``."""
        f = _per_coord(factors, self.d, "factors")
        return CoefficientModel.explicit(self.coefficients * f[None, :])

    # serialization ----------------------------------------------------------

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params, "d": self.d}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc: dict) -> CoefficientModel:
        doc = dict(doc)
        kind = doc.pop("kind", None)
        d = doc.pop("d", None)
        if kind == "explicit":
            model = cls.explicit(doc["coefficients"])
        elif kind == "geometric":
            model = cls.geometric(doc["rho"], J=int(doc.get("J", DEFAULT_J)), d=d, scale=doc.get("scale", 1.0))
        elif kind == "polynomial":
            model = cls.polynomial(doc.get("scale", 1.0), doc["exponent"], J=int(doc.get("J", DEFAULT_J)), d=d)
        elif kind == "farima":
            model = cls.farima(doc["d_mem"], J=int(doc.get("J", DEFAULT_J)), d=d)
        elif kind == "loading":
            model = cls.loading(doc["mixing"], doc["base"])
        else:
            raise ValueError(f"unknown coefficient model kind {kind!r}")
        if d is not None and model.d != int(d):
            raise ValueError(f"model document declares d={d} but defines {model.d} coordinates")
        return model

    @classmethod
    def from_json(cls, text: str) -> CoefficientModel:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class AssumptionReport:
    theta: float
    constant: float
    worst_lag: int
    passed: bool


def validate_assumption_a(model: CoefficientModel, theta: float) -> AssumptionReport:
    """Check max_nu |c_j^(nu)|^2 <= C (j v 1)^(-3/2-theta) over lags 0..J.

    ``constant`` is the smallest C valid on the truncated range.  On a finite
    range some C always exists, so the pass criterion is about the trend: the
    envelope ratio |c_j|^2 (j v 1)^(3/2+theta) over the upper half of the lags
    must not exceed its maximum over the lower half.  A sequence decaying too
    slowly has an increasing ratio and fails.
    """
    if not 0 < theta < 0.5:
        raise ValueError("theta must lie in (0, 1/2)")
    env = np.max(model.coefficients**2, axis=1)
    j = np.maximum(np.arange(model.J + 1, dtype=float), 1.0)
    ratio = env * j ** (1.5 + theta)
    worst = int(np.argmax(ratio))
    half = (model.J + 1) // 2
    if model.J < 2 or not np.any(ratio[:half] > 0):
        passed = bool(np.all(ratio[half:] == 0)) if model.J >= 2 else True
    else:
        passed = bool(ratio[half:].max() <= ratio[:half].max())
    return AssumptionReport(theta, float(ratio[worst]), worst, passed)


# --------------------------------------------------------------------------
# panels
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Panel:
    """n x d observation matrix; row i is time point i, column nu is coordinate nu."""

    data: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        a = np.asarray(self.data, dtype=float)
        if a.ndim == 1:
            a = a[:, None]
        if a.ndim != 2:
            raise ValueError("panel data must be 2-d (n, d)")
        if not np.all(np.isfinite(a)):
            raise ValueError("panel entries must be finite")
        object.__setattr__(self, "data", _frozen(a))

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]

    def demeaned(self) -> Panel:
        """Column-demeaned copy, for real data that is not mean zero."""
        return Panel(self.data - self.data.mean(axis=0))

    def to_csv(self, path) -> None:
        np.savetxt(path, self.data, fmt="%.17g", delimiter=",")

    @classmethod
    def from_csv(cls, path) -> Panel:
        text = Path(path).read_text()
        rows = [line for line in text.splitlines() if line.strip()]
        if not rows:
            raise ValueError(f"{path}: empty panel file")
        data = np.array([[float(x) for x in r.split(",")] for r in rows])
        return cls(data)


def simulate_panel(
    model: CoefficientModel,
    innov: InnovationSpec,
    n: int,
    seed: int,
    replication: int = 0,
) -> Panel:
    """Draw an n x d panel from the truncated linear-process model.

    Innovations eps_{1-J}, ..., eps_n come from the counter-based stream
    ``(seed, replication)``; identical arguments give bit-identical panels.
    """
    if n < 1:
        raise ValueError("n must be positive")
    eps = draw_innovations(innov, n, model.J, seed, replication)
    return Panel(filter_innovations(eps, model.coefficients))


def filter_innovations(eps: np.ndarray, coefficients: np.ndarray) -> np.ndarray:
    """Apply MA filters to innovations with ``J`` pre-sample values.

    ``eps`` has shape ``(..., n + J)``.  With 2-d ``coefficients`` ``(J+1, d)``
    the result is ``(n, d)`` (``eps`` must then be 1-d); with 1-d coefficients
    the filter runs along the last axis of ``eps`` and returns ``(..., n)``.
    """
    eps = np.asarray(eps, dtype=float)
    c = np.asarray(coefficients, dtype=float)
    if c.ndim == 1:
        if eps.shape[-1] < c.size:
            raise ValueError("innovation history shorter than the filter")
        if c.size == 1:
            return c[0] * eps
        kernel = c.reshape((1,) * (eps.ndim - 1) + (-1,))
        return fftconvolve(eps, kernel, mode="valid", axes=-1)
    if eps.ndim != 1:
        raise ValueError("panel filtering expects a single innovation sequence")
    J = c.shape[0] - 1
    n = eps.size - J
    if n < 1:
        raise ValueError("innovation history shorter than the filter")
    if J == 0:
        return eps[:, None] * c[0][None, :]
    return fftconvolve(eps[:, None], c, mode="valid", axes=0)


def theoretical_covariance(model: CoefficientModel, innov: InnovationSpec, h: int = 0) -> np.ndarray:
    """Lag-h covariance E(Y_t Y_{t+h}'), entry (nu, mu) = sigma^2 sum_j c_j^(nu) c_{j+h}^(mu)."""
    if h < 0:
        raise ValueError("lag must be nonnegative")
    c = model.coefficients
    if h > model.J:
        return np.zeros((model.d, model.d))
    return innov.sigma2 * (c[: model.J + 1 - h].T @ c[h:])


def embed_univariate(z, d: int) -> Panel:
    """Sliding-window panel with rows (z_i, ..., z_{i+d-1}), i = 1..T-d+1."""
    z = np.asarray(z, dtype=float).ravel()
    if d < 1:
        raise ValueError("d must be positive")
    if z.size < d:
        raise ValueError(f"series of length {z.size} is shorter than the window d={d}")
    return Panel(np.lib.stride_tricks.sliding_window_view(z, d).copy())
