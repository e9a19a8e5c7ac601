"""Off-line CUSUM tests for a change in the covariance of two projections.

Two statistics over k = 1..n:

* known in-control covariance Sigma_0:  V_n = max_k |D_n(k/n)| / alpha,
  compared with the law of sup |B| on [0, 1];
* unknown Sigma_0:  V_n^0 = max_k |D_n^0(k/n)| / alpha, compared with
  the law of sup |B^0| (Kolmogorov distribution).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import limit_dists
from .asymvar import KernelSpec, lrv_estimate
from .covstats import PartialSumPath, bridge_path, partial_sum_path
from .limit_dists import LawKind, LimitLaw
from .lin_process import Panel


@dataclass(frozen=True)
class CpReport:
    statistic: float
    critical_value: float
    p_value: float
    reject: bool
    k_hat: int | None
    alpha_hat: float
    law: LawKind
    level: float
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _check(alpha_hat: float, level: float) -> None:
    if not (alpha_hat > 0 and math.isfinite(alpha_hat)):
        raise ValueError(f"alpha_hat must be positive and finite, got {alpha_hat}")
    if not 0 < level < 1:
        raise ValueError(f"level must lie in (0, 1), got {level}")


def estimate_changepoint(path) -> int:
    """First k (1-based) at which |path[k]| attains its maximum."""
    values = path.values if isinstance(path, PartialSumPath) else np.asarray(path, dtype=float)
    if values.size == 0:
        raise ValueError("empty path")
    # argmax returns the first maximizer, which is the min{k : ...} rule
    return int(np.argmax(np.abs(values))) + 1


def _report(path: PartialSumPath, alpha_hat: float, level: float, law: LimitLaw, metadata: dict) -> CpReport:
    stat = float(np.max(np.abs(path.values))) / alpha_hat
    crit = limit_dists.quantile(law, 1.0 - level)
    reject = stat > crit
    return CpReport(
        statistic=stat,
        critical_value=crit,
        p_value=1.0 - limit_dists.cdf(law, stat),
        reject=bool(reject),
        k_hat=estimate_changepoint(path) if reject else None,
        alpha_hat=float(alpha_hat),
        law=law.kind,
        level=float(level),
        metadata=metadata,
    )


def cusum_test_known(panel: Panel, v, w, sigma0_proj: float, alpha_hat: float, level: float = 0.05) -> CpReport:
    """Test with known in-control value v'Sigma_0 w; location from the raw CUSUM path."""
    _check(alpha_hat, level)
    _, scaled = partial_sum_path(panel, v, w, target=float(sigma0_proj))
    return _report(scaled, alpha_hat, level, limit_dists.SUP_ABS_BM, {"mode": "known", "n": panel.n})


def cusum_test_bridge(panel: Panel, v, w, alpha_hat: float, level: float = 0.05) -> CpReport:
    """Self-normalizing bridge test; needs no in-control covariance.

    ``k_hat`` is read off the bridge path, which extends the argmax rule
    beyond the known-covariance path; ``metadata['k_hat_from_bridge']`` flags it.
    """
    _check(alpha_hat, level)
    path = bridge_path(panel, v, w)
    meta = {"mode": "bridge", "n": panel.n, "k_hat_from_bridge": True}
    return _report(path, alpha_hat, level, limit_dists.SUP_ABS_BRIDGE, meta)


def learning_sample_pipeline(
    learning: Panel,
    test: Panel,
    v,
    w,
    kernel: KernelSpec | None = None,
    level: float = 0.05,
    clamp: bool = False,
) -> CpReport:
    """Estimate alpha from a change-free learning sample, then run the bridge test.

    The test sample itself is never used to estimate alpha.  A nonpositive
    estimate is an error unless ``clamp`` is set, in which case the smallest
    positive float stands in (and the report is essentially a rejection).
    """
    kernel = kernel or KernelSpec()
    a2 = lrv_estimate(learning, v, w, kernel)
    if a2 <= 0:
        if not clamp:
            raise ValueError(
                f"long-run variance estimate {a2:.3g} from the learning sample is not positive; "
                "use a larger learning sample or enable clamping"
            )
        a2 = np.finfo(float).tiny
    report = cusum_test_bridge(test, v, w, math.sqrt(a2), level)
    meta = dict(report.metadata, learning_n=learning.n, kernel=kernel.kind, bandwidth=kernel.m(learning.n))
    return CpReport(**{**report.to_dict(), "metadata": meta})
