import math

import numpy as np
import pytest
from scipy.special import gammaln

from hdcov.lin_process import (
    CoefficientModel,
    InnovationSpec,
    Panel,
    draw_innovations,
    embed_univariate,
    farima_coefficients,
    filter_innovations,
    simulate_panel,
    theoretical_covariance,
    validate_assumption_a,
)
from hdcov.covstats import autocov_estimates, sample_cov


class TestFarima:
    def test_short_sequences(self):
        assert farima_coefficients(0.2, 0).tolist() == [1.0]
        np.testing.assert_allclose(farima_coefficients(0.2, 1), [1.0, 0.2])

    @pytest.mark.parametrize("d_mem", [-0.3, 0.1, 0.2, 0.45])
    def test_recursion_matches_gamma_ratio(self, d_mem):
        theta = farima_coefficients(d_mem, 50)
        k = np.arange(51)
        # Gamma(k + d) / (Gamma(k + 1) Gamma(d)), signs handled for d < 0
        mag = np.exp(gammaln(k + d_mem) - gammaln(k + 1) - gammaln(d_mem))
        sign = np.sign(np.array([math.gamma(x + d_mem) for x in k]) / math.gamma(d_mem))
        np.testing.assert_allclose(theta, sign * mag, rtol=1e-10)

    def test_asymptote(self):
        theta = farima_coefficients(0.2, 10_000)
        k = 10_000
        assert abs(theta[k] * math.gamma(0.2) / k ** (0.2 - 1) - 1) < 0.01


class TestAssumption:
    def test_geometric_passes(self):
        assert validate_assumption_a(CoefficientModel.geometric(0.5, J=200), 0.4).passed

    def test_slow_polynomial_fails(self):
        j = np.maximum(np.arange(1001), 1)
        model = CoefficientModel.explicit(j**-0.5)
        assert not validate_assumption_a(model, 0.4).passed

    def test_farima_passes(self):
        assert validate_assumption_a(CoefficientModel.farima(0.1, J=1000), 0.2).passed


class TestInnovations:
    def test_t_requires_df_above_four(self):
        with pytest.raises(ValueError):
            InnovationSpec("student_t", df=4)

    @pytest.mark.parametrize(
        "spec",
        [InnovationSpec(), InnovationSpec("uniform", 2.0), InnovationSpec("student_t", 0.5, df=9)],
    )
    def test_moments(self, spec):
        x = spec.draw(np.random.default_rng(0), 400_000)
        assert abs(x.var() - spec.sigma2) < 0.01 * spec.sigma2
        assert abs(np.mean(x**4) - spec.gamma4) < 0.05 * spec.gamma4

    def test_round_trip(self):
        spec = InnovationSpec("student_t", 2.0, df=6)
        assert InnovationSpec.from_dict(spec.to_dict()) == spec


class TestSimulation:
    def test_identity_filter_returns_innovations(self):
        model = CoefficientModel.explicit([[1.0]])
        panel = simulate_panel(model, InnovationSpec(), 3, seed=11)
        eps = draw_innovations(InnovationSpec(), 3, 0, 11)
        np.testing.assert_array_equal(panel.data[:, 0], eps)

    def test_zero_model(self):
        model = CoefficientModel.explicit(np.zeros((5, 3)))
        assert not simulate_panel(model, InnovationSpec(), 20, seed=1).data.any()

    def test_reproducible(self):
        model = CoefficientModel.geometric([0.3, 0.6], J=50)
        a = simulate_panel(model, InnovationSpec(), 100, seed=5, replication=2)
        b = simulate_panel(model, InnovationSpec(), 100, seed=5, replication=2)
        c = simulate_panel(model, InnovationSpec(), 100, seed=5, replication=3)
        np.testing.assert_array_equal(a.data, b.data)
        assert not np.array_equal(a.data, c.data)

    def test_linearity(self):
        model = CoefficientModel.geometric(0.7, J=30, d=3)
        base = simulate_panel(model, InnovationSpec(), 50, seed=9)
        scaled = simulate_panel(model.scaled(2.5), InnovationSpec(), 50, seed=9)
        np.testing.assert_allclose(scaled.data, 2.5 * base.data, rtol=1e-12, atol=1e-12)

    def test_filter_matches_direct_sum(self):
        rng = np.random.default_rng(4)
        C = rng.normal(size=(4, 2))
        eps = rng.normal(size=3 + 10)
        out = filter_innovations(eps, C)
        for i in range(10):
            for nu in range(2):
                direct = sum(C[j, nu] * eps[3 + i - j] for j in range(4))
                assert out[i, nu] == pytest.approx(direct, abs=1e-12)

    def test_lag_one_autocovariance(self):
        model = CoefficientModel.geometric(0.9, J=400, d=1)
        z = simulate_panel(model, InnovationSpec(), 100_000, seed=21).data[:, 0]
        prods = z[:-1] * z[1:]
        # batch-means standard error handles the serial dependence
        se = prods[: 99_000].reshape(100, -1).mean(axis=1).std(ddof=1) / 10
        target = theoretical_covariance(model, InnovationSpec(), 1)[0, 0]
        assert abs(prods.mean() - target) < 3 * se


class TestTheoreticalCovariance:
    def test_trivial(self):
        model = CoefficientModel.explicit([1.0])
        assert theoretical_covariance(model, InnovationSpec(), 0).tolist() == [[1.0]]
        assert theoretical_covariance(model, InnovationSpec(), 1).tolist() == [[0.0]]

    def test_two_coordinates(self):
        model = CoefficientModel.explicit([[1.0, 0.0], [0.0, 1.0]])
        np.testing.assert_array_equal(theoretical_covariance(model, InnovationSpec(), 1), [[0, 1], [0, 0]])

    def test_geometric_closed_form(self):
        rho = np.array([0.3, 0.8])
        model = CoefficientModel.geometric(rho, J=300)
        for h in (0, 1, 5):
            g = theoretical_covariance(model, InnovationSpec(sigma2=2.0), h)
            np.testing.assert_allclose(np.diag(g), 2.0 * rho**h / (1 - rho**2), rtol=1e-10)


class TestModels:
    def test_json_round_trip(self):
        for model in (
            CoefficientModel.geometric([0.2, 0.5], J=10),
            CoefficientModel.polynomial(1.0, 1.5, J=10, d=2),
            CoefficientModel.farima(0.2, J=10, d=2),
            CoefficientModel.explicit(np.arange(6.0).reshape(3, 2)),
        ):
            back = CoefficientModel.from_json(model.to_json())
            np.testing.assert_array_equal(back.coefficients, model.coefficients)

    def test_polynomial_exponent_checked(self):
        with pytest.raises(ValueError):
            CoefficientModel.polynomial(1.0, 0.7, J=10)

    def test_farima_memory_checked(self):
        with pytest.raises(ValueError):
            CoefficientModel.farima(0.5, J=10)

    def test_coefficients_read_only(self):
        model = CoefficientModel.geometric(0.5, J=5)
        with pytest.raises(ValueError):
            model.coefficients[0, 0] = 2.0


class TestEmbedding:
    def test_rows(self):
        assert embed_univariate([1, 2, 3], 2).data.tolist() == [[1, 2], [2, 3]]
        z = np.arange(5.0)
        assert embed_univariate(z, 5).data.tolist() == [z.tolist()]

    @pytest.mark.parametrize("h", [0, 1, 3])
    def test_sample_cov_recovers_autocovariance(self, h):
        z = np.random.default_rng(h).normal(size=30)
        s = sample_cov(embed_univariate(z, h + 1))
        _, g_tilde = autocov_estimates(z, h)
        assert s[0, h] == pytest.approx(g_tilde, rel=1e-12)


class TestPanel:
    def test_csv_round_trip_exact(self, tmp_path):
        data = np.random.default_rng(0).normal(size=(7, 3))
        Panel(data).to_csv(tmp_path / "p.csv")
        np.testing.assert_array_equal(Panel.from_csv(tmp_path / "p.csv").data, data)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            Panel([[1.0, np.nan]])

    def test_demeaned(self):
        p = Panel([[1.0, 2.0], [3.0, 6.0]]).demeaned()
        np.testing.assert_allclose(p.data.mean(axis=0), 0)
