"""Bilinear forms v'Sigma_hat w of high-dimensional sample covariance matrices
for linear-process panels: simulation, CUSUM processes, long-run variances,
change-point tests, portfolio/shrinkage applications and a Monte Carlo harness.
"""

from .applications import (
    DegenerateConstraintsError,
    NotPositiveDefiniteError,
    PortfolioSolution,
    ShrinkResult,
    estimate_shrink_weight,
    l1_project,
    mean_variance_weights,
    min_variance_weights,
    plugin_shrink_weight,
    shrink_covariance,
    soft_threshold,
)
from .asymvar import (
    KernelSpec,
    LimitVariance,
    ProjectedCoefficients,
    alpha_squared,
    beta_coefficient,
    beta_matrix,
    cross_lrv_estimate,
    f_tilde,
    lrv_estimate,
    martingale_partial_sum,
    martingale_path,
    projected_coefficients,
)
from .changepoint import CpReport, cusum_test_bridge, cusum_test_known, estimate_changepoint, learning_sample_pipeline
from .covstats import (
    PartialSumPath,
    WeightVector,
    bilinear_form,
    bridge_path,
    partial_sum_path,
    project_series,
    sample_cov,
)
from .limit_dists import SUP_ABS_BM, SUP_ABS_BRIDGE, LimitLaw, cdf, quantile
from .lin_process import (
    CoefficientModel,
    InnovationSpec,
    Panel,
    farima_coefficients,
    simulate_panel,
    theoretical_covariance,
    validate_assumption_a,
)
from .montecarlo import McReport, Scenario

__version__ = "0.1.0"
