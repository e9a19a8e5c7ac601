"""File-level entry points: read inputs, call the library once, return JSON-ready dicts.

The command-line front end is a thin shell over these functions; every
argument here is a plain Python value (paths, numbers, strings).
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

import numpy as np
from scipy.linalg import LinAlgError

from . import applications, asymvar, changepoint, covstats, montecarlo
from .lin_process import CoefficientModel, InnovationSpec, Panel, simulate_panel

SCHEMA_VERSION = 1

NUMERIC_ERRORS = (
    ArithmeticError,
    LinAlgError,
    applications.NotPositiveDefiniteError,
    applications.DegenerateConstraintsError,
)
INPUT_ERRORS = (ValueError, KeyError, TypeError, OSError)


def _json_arg(text: str):
    """A JSON document given inline or as a path to a file holding it."""
    if os.path.isfile(text):
        text = Path(text).read_text()
    return json.loads(text)


def _panel(path, demean: bool) -> Panel:
    p = Panel.from_csv(path)
    return p.demeaned() if demean else p


def _weight_pair(doc, d: int) -> tuple[covstats.WeightVector, covstats.WeightVector]:
    """Array or sparse map (v = w), or ``{"v": ..., "w": ...}``; None means uniform."""
    if doc is None:
        u = covstats.WeightVector.uniform(d)
        return u, u
    if isinstance(doc, dict) and "v" in doc:
        return covstats.WeightVector.from_json(doc["v"], d), covstats.WeightVector.from_json(doc.get("w", doc["v"]), d)
    v = covstats.WeightVector.from_json(doc, d)
    return v, v


def _kernel(kind: str, bandwidth) -> asymvar.KernelSpec:
    bw = None if bandwidth in (None, "auto") else int(bandwidth)
    return asymvar.KernelSpec(kind, bw)


def _matrix(path) -> np.ndarray:
    return Panel.from_csv(path).data


def _vector(text) -> np.ndarray:
    return np.asarray(_json_arg(text), dtype=float).ravel()


def simulate(model: str, n: int, seed: int, out: str, innov: str | None = None, replication: int = 0) -> dict:
    m = CoefficientModel.from_dict(_json_arg(model))
    spec = InnovationSpec.from_dict(_json_arg(innov)) if innov else InnovationSpec()
    panel = simulate_panel(m, spec, n, seed, replication)
    panel.to_csv(out)
    return {"path": out, "n": panel.n, "d": panel.d}


def cov(panel: str, weights: list[str] | None = None, demean: bool = False) -> dict:
    p = _panel(panel, demean)
    if weights:
        v = covstats.WeightVector.from_json(_json_arg(weights[0]), p.d)
        w = covstats.WeightVector.from_json(_json_arg(weights[1]), p.d)
        return {"n": p.n, "d": p.d, "Q": covstats.bilinear_form(p, v, w)}
    return {"n": p.n, "d": p.d, "matrix": covstats.sample_cov(p).tolist()}


def lrv(panel: str, weights: str | None = None, kernel: str = "bartlett", bandwidth=None, clamp: bool = False, demean: bool = False) -> dict:
    p = _panel(panel, demean)
    v, w = _weight_pair(_json_arg(weights) if weights else None, p.d)
    k = _kernel(kernel, bandwidth)
    a2 = asymvar.lrv_estimate(p, v, w, k, clamp=clamp)
    return {"n": p.n, "alpha2_hat": a2, "kernel": k.kind, "bandwidth": k.m(p.n)}


def cp_test(
    panel: str,
    mode: str,
    level: float = 0.05,
    weights: str | None = None,
    learning: str | None = None,
    kernel: str = "bartlett",
    bandwidth=None,
    alpha: float | None = None,
    sigma0_proj: float | None = None,
    clamp: bool = False,
    demean: bool = False,
) -> dict:
    """Run the known-target or bridge test; alpha comes from ``alpha`` or a learning sample."""
    if not 0 < level < 1:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    if (alpha is None) == (learning is None):
        raise ValueError("give exactly one of --alpha or --learning; alpha is never estimated from the test sample")
    p = _panel(panel, demean)
    v, w = _weight_pair(_json_arg(weights) if weights else None, p.d)
    k = _kernel(kernel, bandwidth)
    if mode == "bridge":
        if learning is not None:
            return changepoint.learning_sample_pipeline(_panel(learning, demean), p, v, w, k, level, clamp).to_dict()
        return changepoint.cusum_test_bridge(p, v, w, alpha, level).to_dict()
    if mode != "known":
        raise ValueError(f"unknown mode {mode!r}")
    if sigma0_proj is None:
        raise ValueError("--mode known needs --sigma0-proj (the in-control value v'Sigma_0 w)")
    meta = {}
    if learning is not None:
        lp = _panel(learning, demean)
        a2 = asymvar.lrv_estimate(lp, v, w, k)
        if a2 <= 0:
            raise ValueError(f"long-run variance estimate {a2:.3g} from the learning sample is not positive")
        alpha = math.sqrt(a2)
        meta = {"learning_n": lp.n, "kernel": k.kind, "bandwidth": k.m(lp.n)}
    report = changepoint.cusum_test_known(p, v, w, sigma0_proj, alpha, level).to_dict()
    report["metadata"].update(meta)
    return report


def mc(scenario: str, threads: int | None = None, dump_csv: str | None = None) -> dict:
    s = montecarlo.Scenario.from_dict(_json_arg(scenario))
    report = montecarlo.run(s, threads)
    if dump_csv:
        report.write_replications_csv(dump_csv)
    return report.to_dict()


def portfolio(sigma: str, mu: str | None = None, mu0: float | None = None) -> dict:
    s = _matrix(sigma)
    if (mu is None) != (mu0 is None):
        raise ValueError("--mu and --mu0 go together")
    if mu is None:
        return applications.min_variance_weights(s).to_dict()
    return applications.mean_variance_weights(s, _vector(mu), mu0).to_dict()


def project_l1(weights: str, c: float) -> dict:
    out = applications.l1_project(_vector(weights), c)
    return {"weights": out.entries.tolist(), "l1": out.l1, "l2": out.l2}


def shrink(weight: str, sigma: str | None = None, panel: str | None = None, demean: bool = False) -> dict:
    """Shrink Sigma_hat (given, or the sample covariance of ``panel``) toward mu I."""
    if (sigma is None) == (panel is None):
        raise ValueError("give exactly one of --sigma or --panel")
    p = _panel(panel, demean) if panel else None
    s = _matrix(sigma) if sigma else covstats.sample_cov(p)
    if weight == "auto":
        if p is None:
            raise ValueError("--weight auto needs --panel (observations to estimate W from)")
        W = applications.plugin_shrink_weight(p)
    else:
        W = float(weight)
    return applications.shrink_covariance(s, W).to_dict()
