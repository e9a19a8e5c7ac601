"""Scenario-driven Monte Carlo checks of the limit theorems.

A :class:`Scenario` fixes the model, the weight pairs, the sample-size grid,
the number of replications, the seed and the pass thresholds.  Replication
``r`` at grid position ``g`` draws its innovations from the counter-based
stream ``(seed, block << 48 | g << 32 | r)``, so replications never share
draws and the report does not depend on the thread count.

Statistics that only involve projections are computed from the projected
series y_i(v) = sum_j c_j^(v) eps_{i-j}, which equals v'Y_i exactly by
linearity; the d-dimensional panel is materialized only where the experiment
needs the full matrix (shrinkage).
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import stats

from . import limit_dists
from .applications import estimate_shrink_weight, shrink_covariance
from .asymvar import KernelSpec, alpha_squared, beta_matrix, lrv_from_products, martingale_path, projected_coefficients
from .covstats import WeightVector, bridge_from_products, cusum_from_products, sample_cov
from .lin_process import CoefficientModel, InnovationSpec, Panel, draw_innovations, filter_innovations, theoretical_covariance

logger = logging.getLogger(__name__)

EXPERIMENTS = (
    "clt",
    "fclt_max",
    "lrv_consistency",
    "martingale_gap",
    "multivariate_cov",
    "shrinkage_mse",
    "cp_size_power",
)
DISTRIBUTIONAL = {"clt", "fclt_max", "multivariate_cov", "cp_size_power"}

# Applied when a scenario document omits a key; the resolved values are part
# of the Scenario and are echoed in every report.
DEFAULT_THRESHOLDS = {
    "clt": {"ks_max": 0.06},
    "fclt_max": {"ks_max": 0.06},
    "lrv_consistency": {"monotone": "nonincreasing"},
    "martingale_gap": {"monotone": "decreasing"},
    "multivariate_cov": {"max_z": 3.0},
    "shrinkage_mse": {"invariant_tol": 1e-10},
    "cp_size_power": {"size_lo": 0.03, "size_hi": 0.08, "power_min": 0.9, "loc_frac": 0.05},
}
DEFAULT_OPTIONS = {
    "clt": {"alpha_mode": "theory"},
    "fclt_max": {"alpha_mode": "theory"},
    "lrv_consistency": {"kernel": "bartlett", "bandwidth": None},
    "martingale_gap": {},
    "multivariate_cov": {},
    "shrinkage_mse": {},
    "cp_size_power": {"level": 0.05, "shift_scale": math.sqrt(2.0), "shift_coords": None, "q_frac": 0.5},
}


def _parse_weight(doc, d: int) -> WeightVector:
    if isinstance(doc, str):
        if doc == "uniform":
            return WeightVector.uniform(d)
        raise ValueError(f"unknown weight shorthand {doc!r}")
    return WeightVector.from_json(doc, d)


@dataclass
class Scenario:
    experiment: str
    model: CoefficientModel
    innov: InnovationSpec
    n_grid: list[int]
    weight_pairs: list[tuple[WeightVector, WeightVector]]
    replications: int
    seed: int
    thresholds: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)
    l1_budget: float | None = None

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if not self.n_grid or any(int(n) < 2 for n in self.n_grid):
            raise ValueError("n_grid must list sample sizes >= 2")
        self.n_grid = [int(n) for n in self.n_grid]
        if self.replications < 1:
            raise ValueError("replications must be positive")
        if self.experiment in DISTRIBUTIONAL and self.replications < 100:
            raise ValueError("distributional experiments need at least 100 replications")
        if self.experiment != "shrinkage_mse" and not self.weight_pairs:
            raise ValueError("at least one weight pair is required")
        for v, w in self.weight_pairs:
            if v.d != self.model.d or w.d != self.model.d:
                raise ValueError("weight pair dimension does not match the model")
            if self.l1_budget is not None and max(v.l1, w.l1) > self.l1_budget:
                raise ValueError(f"weight pair exceeds the declared l1 budget {self.l1_budget}")
        self.thresholds = {**DEFAULT_THRESHOLDS[self.experiment], **self.thresholds}
        self.options = {**DEFAULT_OPTIONS[self.experiment], **self.options}

    @classmethod
    def from_dict(cls, doc: dict) -> Scenario:
        model = CoefficientModel.from_dict(doc["model"])
        pairs = [(_parse_weight(v, model.d), _parse_weight(w, model.d)) for v, w in doc.get("weight_pairs", [])]
        return cls(
            experiment=doc["experiment"],
            model=model,
            innov=InnovationSpec.from_dict(doc.get("innov", {})),
            n_grid=list(doc["n_grid"]),
            weight_pairs=pairs,
            replications=int(doc["replications"]),
            seed=int(doc["seed"]),
            thresholds=dict(doc.get("thresholds", {})),
            options=dict(doc.get("options", {})),
            l1_budget=doc.get("l1_budget"),
        )

    @classmethod
    def from_json(cls, text: str) -> Scenario:
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "model": self.model.to_dict(),
            "innov": self.innov.to_dict(),
            "n_grid": self.n_grid,
            "weight_pairs": [[v.entries.tolist(), w.entries.tolist()] for v, w in self.weight_pairs],
            "replications": self.replications,
            "seed": self.seed,
            "thresholds": self.thresholds,
            "options": self.options,
            "l1_budget": self.l1_budget,
        }


@dataclass
class McReport:
    experiment: str
    per_n: list[dict]
    passed: bool
    thresholds: dict
    seed: int
    replications: int
    summary: dict = field(default_factory=dict)
    draws: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "passed": self.passed,
            "thresholds": self.thresholds,
            "per_n": self.per_n,
            "summary": self.summary,
            "seeds": {"seed": self.seed, "replications": self.replications, "stream": "philox(seed, block<<48|g<<32|r)"},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def write_replications_csv(self, path) -> None:
        """One row per replication: columns ``<statistic>@n<size>``."""
        names = sorted(self.draws)
        if not names:
            raise ValueError("report carries no per-replication draws")
        cols = [np.asarray(self.draws[k]).ravel() for k in names]
        rows = max(c.size for c in cols)
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["replication", *names])
            for r in range(rows):
                out.writerow([r] + [repr(float(c[r])) if r < c.size else "" for c in cols])


# --------------------------------------------------------------------------
# replication engine
# --------------------------------------------------------------------------


def _stream_id(block: int, g: int, r: int) -> int:
    return (block << 48) | (g << 32) | r


def _chunk_size(n: int, J: int) -> int:
    # fixed by the problem size only, never by the thread count
    return max(1, min(500, 4_000_000 // (n + J + 1)))


def _map_replications(fn: Callable[[np.ndarray], np.ndarray], R: int, chunk: int, threads: int | None) -> np.ndarray:
    """Apply ``fn`` to index chunks of 0..R-1 and stack results in replication order."""
    chunks = [np.arange(s, min(s + chunk, R)) for s in range(0, R, chunk)]
    threads = threads or os.cpu_count() or 1
    if threads <= 1 or len(chunks) == 1:
        parts = [fn(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(fn, chunks))
    return np.concatenate(parts, axis=0)


def _innovations(s: Scenario, n: int, block: int, g: int, reps: np.ndarray) -> np.ndarray:
    J = s.model.J
    return np.stack([draw_innovations(s.innov, n, J, s.seed, _stream_id(block, g, int(r))) for r in reps])


def _projected(s: Scenario, eps: np.ndarray, weights: list[WeightVector], model: CoefficientModel | None = None):
    model = model or s.model
    out = []
    cache: dict[bytes, np.ndarray] = {}
    for w in weights:
        key = w.entries.tobytes()
        if key not in cache:
            cache[key] = filter_innovations(eps, projected_coefficients(model, w).coeffs)
        out.append(cache[key])
    return out


def _ks(sample: np.ndarray, cdf: Callable) -> float:
    return float(stats.kstest(sample, cdf).statistic)


def _moments(x: np.ndarray) -> dict:
    return {
        "mean": float(np.mean(x)),
        "var": float(np.var(x)),
        "skew": float(stats.skew(x)),
        "excess_kurtosis": float(stats.kurtosis(x)),
    }


def _alpha(s: Scenario, v, w) -> tuple[float, float]:
    """Theoretical (alpha, v'Sigma_0 w) for a weight pair."""
    a2 = alpha_squared(s.model, s.innov, v, w).alpha2
    target = float(v.entries @ theoretical_covariance(s.model, s.innov, 0) @ w.entries)
    return math.sqrt(a2), target


def _vcdf(law) -> Callable:
    return np.vectorize(lambda x: limit_dists.cdf(law, float(x)))


def _kernel(s: Scenario) -> KernelSpec:
    return KernelSpec(s.options.get("kernel", "bartlett"), s.options.get("bandwidth"))


def _monotone(values: list[float], mode: str) -> bool:
    pairs = list(zip(values, values[1:]))
    if mode == "decreasing":
        return all(b < a for a, b in pairs)
    return all(b <= a for a, b in pairs)


# --------------------------------------------------------------------------
# experiments
# --------------------------------------------------------------------------


def _check_experiment(s: Scenario, name: str) -> None:
    if s.experiment != name:
        raise ValueError(f"scenario is for {s.experiment!r}, not {name!r}")


def run_clt(s: Scenario, threads: int | None = None) -> McReport:
    """Distribution of D_n(1)/alpha against N(0, 1)."""
    _check_experiment(s, "clt")
    mode = s.options["alpha_mode"]
    kernel = _kernel(s)
    per_n, draws, ok = [], {}, True
    for p, (v, w) in enumerate(s.weight_pairs):
        alpha, target = _alpha(s, v, w)
        if alpha == 0:
            raise ValueError(f"weight pair {p} has alpha = 0; the standardized statistic is undefined")
        for g, n in enumerate(s.n_grid):

            def fn(reps, n=n, g=g, v=v, w=w, alpha=alpha, target=target):
                yv, yw = _projected(s, _innovations(s, n, 0, g, reps), [v, w])
                prod = yv * yw
                d1 = (prod - target).sum(axis=-1) / math.sqrt(n)
                if mode == "estimate":
                    return d1 / np.sqrt(np.maximum(lrv_from_products(prod, kernel), np.finfo(float).tiny))
                return d1 / alpha

            z = _map_replications(fn, s.replications, _chunk_size(n, s.model.J), threads)
            ks = _ks(z, "norm")
            passed = ks <= s.thresholds["ks_max"]
            ok &= passed
            per_n.append({"n": n, "pair": p, "alpha2": alpha**2, "ks": ks, "passed": passed, **_moments(z)})
            draws[f"z_pair{p}@n{n}"] = z
    return McReport("clt", per_n, ok, s.thresholds, s.seed, s.replications, draws=draws)


def run_fclt_max(s: Scenario, threads: int | None = None) -> McReport:
    """max_k |D_n(k/n)|/alpha vs sup|B| and max_k |D_n^0(k/n)|/alpha vs sup|B^0|."""
    _check_experiment(s, "fclt_max")
    mode = s.options["alpha_mode"]
    kernel = _kernel(s)
    cdf_bm, cdf_br = _vcdf(limit_dists.SUP_ABS_BM), _vcdf(limit_dists.SUP_ABS_BRIDGE)
    per_n, draws, ok = [], {}, True
    for p, (v, w) in enumerate(s.weight_pairs):
        alpha, target = _alpha(s, v, w)
        if alpha == 0:
            raise ValueError(f"weight pair {p} has alpha = 0; the standardized statistic is undefined")
        for g, n in enumerate(s.n_grid):

            def fn(reps, n=n, g=g, v=v, w=w, alpha=alpha, target=target):
                yv, yw = _projected(s, _innovations(s, n, 0, g, reps), [v, w])
                prod = yv * yw
                a = alpha
                if mode == "estimate":
                    a = np.sqrt(np.maximum(lrv_from_products(prod, kernel), np.finfo(float).tiny))
                vn = np.abs(cusum_from_products(prod, target)).max(axis=-1) / math.sqrt(n) / a
                v0 = np.abs(bridge_from_products(prod)).max(axis=-1) / a
                return np.column_stack([vn, v0])

            out = _map_replications(fn, s.replications, _chunk_size(n, s.model.J), threads)
            ks_bm, ks_br = _ks(out[:, 0], cdf_bm), _ks(out[:, 1], cdf_br)
            passed = max(ks_bm, ks_br) <= s.thresholds["ks_max"]
            ok &= passed
            per_n.append({"n": n, "pair": p, "alpha2": alpha**2, "ks_sup_bm": ks_bm, "ks_sup_bridge": ks_br, "passed": passed})
            draws[f"Vn_pair{p}@n{n}"] = out[:, 0]
            draws[f"Vn0_pair{p}@n{n}"] = out[:, 1]
    return McReport("fclt_max", per_n, ok, s.thresholds, s.seed, s.replications, draws=draws)


def run_lrv_consistency(s: Scenario, threads: int | None = None) -> McReport:
    """Mean |alpha_hat^2 - alpha^2| per n; passes when it does not increase along the grid."""
    _check_experiment(s, "lrv_consistency")
    kernel = _kernel(s)
    per_n, draws, ok = [], {}, True
    for p, (v, w) in enumerate(s.weight_pairs):
        a2 = alpha_squared(s.model, s.innov, v, w).alpha2
        errors = []
        for g, n in enumerate(s.n_grid):

            def fn(reps, n=n, g=g, v=v, w=w):
                yv, yw = _projected(s, _innovations(s, n, 0, g, reps), [v, w])
                return lrv_from_products(yv * yw, kernel)

            est = _map_replications(fn, s.replications, _chunk_size(n, s.model.J), threads)
            mae = float(np.mean(np.abs(est - a2)))
            errors.append(mae)
            per_n.append(
                {"n": n, "pair": p, "bandwidth": kernel.m(n), "alpha2": a2, "mean_estimate": float(est.mean()), "mae": mae}
            )
            draws[f"alpha2hat_pair{p}@n{n}"] = est
        ok &= _monotone(errors, s.thresholds["monotone"])
    return McReport("lrv_consistency", per_n, ok, s.thresholds, s.seed, s.replications, draws=draws)


def run_martingale_gap(s: Scenario, threads: int | None = None) -> McReport:
    """n^{-1} E (D_nn - M_n)^2 per n from the same innovations."""
    _check_experiment(s, "martingale_gap")
    per_n, draws, ok = [], {}, True
    for p, (v, w) in enumerate(s.weight_pairs):
        cv = projected_coefficients(s.model, v)
        cw = projected_coefficients(s.model, w)
        _, target = _alpha(s, v, w)
        gaps = []
        for g, n in enumerate(s.n_grid):

            def fn(reps, n=n, g=g, v=v, w=w, cv=cv, cw=cw, target=target):
                eps = _innovations(s, n, 0, g, reps)
                yv, yw = _projected(s, eps, [v, w])
                dnn = (yv * yw - target).sum(axis=-1)
                mn = martingale_path(eps, cv, cw, s.innov.sigma2)[..., -1]
                return (dnn - mn) ** 2 / n

            gap = _map_replications(fn, s.replications, _chunk_size(n, s.model.J), threads)
            gaps.append(float(gap.mean()))
            per_n.append({"n": n, "pair": p, "mean_scaled_gap": gaps[-1], "se": float(gap.std(ddof=1) / math.sqrt(gap.size))})
            draws[f"gap_pair{p}@n{n}"] = gap
        ok &= _monotone(gaps, s.thresholds["monotone"])
    return McReport("martingale_gap", per_n, ok, s.thresholds, s.seed, s.replications, draws=draws)


def run_multivariate_cov(s: Scenario, threads: int | None = None) -> McReport:
    """Empirical covariance of (D_n(1; v_i, w_i))_i against the beta_n matrix."""
    _check_experiment(s, "multivariate_cov")
    pairs = s.weight_pairs
    K = len(pairs)
    beta = beta_matrix(s.model, s.innov, pairs)
    sigma0 = theoretical_covariance(s.model, s.innov, 0)
    targets = [float(v.entries @ sigma0 @ w.entries) for v, w in pairs]
    weights = [x for pair in pairs for x in pair]
    per_n, draws, ok = [], {}, True
    for g, n in enumerate(s.n_grid):

        def fn(reps, n=n, g=g):
            ys = _projected(s, _innovations(s, n, 0, g, reps), weights)
            cols = [((ys[2 * i] * ys[2 * i + 1]) - targets[i]).sum(axis=-1) / math.sqrt(n) for i in range(K)]
            return np.column_stack(cols)

        x = _map_replications(fn, s.replications, _chunk_size(n, s.model.J), threads)
        prods = x[:, :, None] * x[:, None, :]
        emp = prods.mean(axis=0)
        se = prods.std(axis=0, ddof=1) / math.sqrt(x.shape[0])
        z = np.abs(emp - beta) / np.where(se > 0, se, np.inf)
        z = np.where((se == 0) & (emp == beta), 0.0, z)
        max_z = float(z.max())
        passed = max_z <= s.thresholds["max_z"]
        ok &= passed
        per_n.append(
            {
                "n": n,
                "beta": beta.tolist(),
                "empirical": emp.tolist(),
                "se": se.tolist(),
                "max_abs_dev": float(np.abs(emp - beta).max()),
                "max_z": max_z,
                "passed": passed,
            }
        )
        for i in range(K):
            draws[f"D1_pair{i}@n{n}"] = x[:, i]
    return McReport("multivariate_cov", per_n, ok, s.thresholds, s.seed, s.replications, draws=draws)


def run_cp_size_power(s: Scenario, threads: int | None = None) -> McReport:
    """Size under the null and power/localization under a coefficient switch at q.

    The alternative multiplies the coefficients of ``shift_coords`` (default:
    all coordinates) by ``shift_scale`` for observations i > q; a factor of
    sqrt(2) on every coordinate doubles v'Sigma[i]w.  Both the known-Sigma_0
    statistic V_n and the bridge statistic V_n^0 use the theoretical alpha.
    Localization uses the bridge path: under a lasting change |D_n(k/n)|
    keeps growing after q, so its argmax sits at the end of the sample.
    """
    _check_experiment(s, "cp_size_power")
    o, t = s.options, s.thresholds
    level = float(o["level"])
    crit_bm = limit_dists.quantile(limit_dists.SUP_ABS_BM, 1 - level)
    crit_br = limit_dists.quantile(limit_dists.SUP_ABS_BRIDGE, 1 - level)
    factors = np.ones(s.model.d)
    coords = o.get("shift_coords")
    factors[slice(None) if coords is None else list(coords)] = float(o["shift_scale"])
    alt_model = s.model.scaled(factors)
    per_n, draws, ok = [], {}, True
    for p, (v, w) in enumerate(s.weight_pairs):
        alpha, target = _alpha(s, v, w)
        if alpha == 0:
            raise ValueError(f"weight pair {p} has alpha = 0")
        for g, n in enumerate(s.n_grid):
            q = int(math.floor(float(o["q_frac"]) * n))

            def stats_of(prod, n=n):
                vn = np.abs(cusum_from_products(prod, target)).max(axis=-1) / math.sqrt(n) / alpha
                br = bridge_from_products(prod)
                v0 = np.abs(br).max(axis=-1) / alpha
                k_hat = np.argmax(np.abs(br), axis=-1) + 1
                return np.column_stack([vn, v0, k_hat])

            def null_fn(reps, n=n, g=g, v=v, w=w):
                yv, yw = _projected(s, _innovations(s, n, 0, g, reps), [v, w])
                return stats_of(yv * yw)

            def alt_fn(reps, n=n, g=g, v=v, w=w, q=q):
                eps = _innovations(s, n, 1, g, reps)
                yv0, yw0 = _projected(s, eps, [v, w])
                yv1, yw1 = _projected(s, eps, [v, w], alt_model)
                after = np.arange(1, n + 1) > q
                prod = np.where(after, yv1 * yw1, yv0 * yw0)
                return stats_of(prod)

            chunk = _chunk_size(n, s.model.J)
            null = _map_replications(null_fn, s.replications, chunk, threads)
            alt = _map_replications(alt_fn, s.replications, chunk, threads)
            size_known = float(np.mean(null[:, 0] > crit_bm))
            size_bridge = float(np.mean(null[:, 1] > crit_br))
            power_known = float(np.mean(alt[:, 0] > crit_bm))
            rej = alt[:, 1] > crit_br
            power_bridge = float(np.mean(rej))
            loc = np.abs(alt[rej, 2] - q)
            median_loc = float(np.median(loc)) if loc.size else float("inf")
            passed = (
                t["size_lo"] <= size_known <= t["size_hi"]
                and t["size_lo"] <= size_bridge <= t["size_hi"]
                and min(power_known, power_bridge) >= t["power_min"]
                and median_loc <= t["loc_frac"] * n
            )
            ok &= passed
            per_n.append(
                {
                    "n": n,
                    "pair": p,
                    "q": q,
                    "level": level,
                    "size_known": size_known,
                    "size_bridge": size_bridge,
                    "power_known": power_known,
                    "power_bridge": power_bridge,
                    "median_abs_khat_error": median_loc,
                    "passed": bool(passed),
                }
            )
            draws[f"Vn_null_pair{p}@n{n}"] = null[:, 0]
            draws[f"Vn0_null_pair{p}@n{n}"] = null[:, 1]
            draws[f"Vn0_alt_pair{p}@n{n}"] = alt[:, 1]
            draws[f"khat_alt_pair{p}@n{n}"] = alt[:, 2]
    return McReport("cp_size_power", per_n, ok, s.thresholds, s.seed, s.replications, draws=draws)


def _eig_dispersion(m: np.ndarray) -> float:
    ev = np.linalg.eigvalsh(m)
    return float(ev[-1] - ev[0])


def run_shrinkage_mse(s: Scenario, threads: int | None = None) -> McReport:
    """Estimate W* on training replicates, compare Frobenius MSE on held-out ones."""
    _check_experiment(s, "shrinkage_mse")
    sigma = theoretical_covariance(s.model, s.innov, 0)
    d = s.model.d
    tol = s.thresholds["invariant_tol"]
    per_n, ok = [], True
    for g, n in enumerate(s.n_grid):

        def fn(reps, block, n=n, g=g):
            out = np.empty((reps.size, d, d))
            for i, r in enumerate(reps):
                eps = draw_innovations(s.innov, n, s.model.J, s.seed, _stream_id(block, g, int(r)))
                out[i] = sample_cov(Panel(filter_innovations(eps, s.model.coefficients)))
            return out

        chunk = max(1, 2_000_000 // (d * d))
        train = _map_replications(lambda r: fn(r, 0), s.replications, chunk, threads)
        held = _map_replications(lambda r: fn(r, 1), s.replications, chunk, threads)
        w_star = estimate_shrink_weight((m, sigma) for m in train)
        mse_raw, mse_shrunk, trace_err, disp_err = [], [], 0.0, 0.0
        for m in held:
            res = shrink_covariance(m, w_star)
            mse_raw.append(np.sum((m - sigma) ** 2))
            mse_shrunk.append(np.sum((res.matrix - sigma) ** 2))
            scale = max(1.0, abs(np.trace(m)))
            trace_err = max(trace_err, abs(np.trace(res.matrix) - np.trace(m)) / scale)
            disp_err = max(disp_err, abs(_eig_dispersion(res.matrix) - (1 - w_star) * _eig_dispersion(m)) / scale)
        raw, shrunk = float(np.mean(mse_raw)), float(np.mean(mse_shrunk))
        passed = shrunk < raw and trace_err <= tol and disp_err <= tol
        ok &= passed
        per_n.append(
            {
                "n": n,
                "d": d,
                "weight": w_star,
                "mse_raw": raw,
                "mse_shrunk": shrunk,
                "trace_rel_error": trace_err,
                "dispersion_rel_error": disp_err,
                "passed": bool(passed),
            }
        )
    return McReport("shrinkage_mse", per_n, ok, s.thresholds, s.seed, s.replications)


RUNNERS = {
    "clt": run_clt,
    "fclt_max": run_fclt_max,
    "lrv_consistency": run_lrv_consistency,
    "martingale_gap": run_martingale_gap,
    "multivariate_cov": run_multivariate_cov,
    "shrinkage_mse": run_shrinkage_mse,
    "cp_size_power": run_cp_size_power,
}


def run(s: Scenario, threads: int | None = None) -> McReport:
    """Dispatch on ``s.experiment``."""
    report = RUNNERS[s.experiment](s, threads)
    report.summary = {"scenario": s.to_dict()}
    return report
