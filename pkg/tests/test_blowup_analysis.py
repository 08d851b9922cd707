"""Certificates, the Riccati comparison, and prediction validation.

The constant block at unit field size: with the slope fraction at 0.4,
K = 34 - 0.0032 + 4726.5625 = 4760.5593.  The comparison solution has the
closed form 2 sqrt(K) (1 - C e^{-sqrt(K) t}) / (1 + C e^{-sqrt(K) t}) with
C = (2 sqrt(K) - q0)/(2 sqrt(K) + q0); at K = 4, q0 = -12 this gives
C = -2 and a singularity exactly at (ln 2)/2.
"""

import json
import math

import numpy as np
import pytest

from foch_lab.blowup_analysis import (
    build_certificate,
    predict_T2,
    riccati_bound,
    riccati_singularity_time,
    solve_riccati,
    validate_prediction,
)
from foch_lab.diagnostics import q_minimum
from foch_lab.integrator import StepperConfig, run
from foch_lab.spectral_core import GridSpec, SpectralField


@pytest.fixture(scope="module")
def cert_grid():
    return GridSpec(L=100.0, N_grid=1024)


@pytest.fixture(scope="module")
def cert_u0(cert_grid):
    return SpectralField.from_samples(cert_grid, 0.05 * np.exp(-(cert_grid.x**2)))


@pytest.fixture(scope="module")
def cert(cert_u0):
    return build_certificate(cert_u0)


class TestConstants:
    def test_constant_block_at_unit_size(self, random_band_fields):
        c = build_certificate(random_band_fields[0], C1=0.4)
        assert math.isclose(c.h2_0, 1.0, rel_tol=1e-12)
        assert math.isclose(c.K, 4760.5593, rel_tol=1e-10)

    def test_benchmark_certificate_frozen(self, cert):
        assert math.isclose(cert.h2_0, 0.1371120419938836, rel_tol=1e-12)
        assert math.isclose(cert.C0, 0.054844816797553445, rel_tol=1e-12)
        assert math.isclose(cert.K, 1.6825205389340883, rel_tol=1e-12)
        assert math.isclose(cert.T1, 0.6649038006690546, rel_tol=1e-12)
        assert math.isclose(cert.q0, -0.002076097439191975, rel_tol=1e-9)
        assert math.isclose(cert.b2n_0, 0.31398048244678944, rel_tol=1e-12)
        assert cert.t1_branch == "slope"
        assert cert.K_positive
        assert not cert.cond_slope and not cert.cond_product
        assert math.isnan(cert.T2)

    def test_doubling_scales_constants(self, cert_grid, cert):
        u2 = SpectralField.from_samples(cert_grid, 0.1 * np.exp(-(cert_grid.x**2)))
        c2 = build_certificate(u2)
        assert math.isclose(c2.K, 16.0 * cert.K, rel_tol=1e-12)
        assert math.isclose(c2.T1, 0.25 * cert.T1, rel_tol=1e-12)

    def test_default_seed_is_breaking_argmin(self, cert_u0, cert):
        assert cert.x0 == q_minimum(cert_u0)[1]

    def test_flat_seed_point_fails_slope_flag(self, cert_u0):
        c = build_certificate(cert_u0, x0=0.0)
        assert abs(c.ux0) <= 1e-10
        assert not c.cond_slope

    def test_parameter_validation(self, cert_u0, cert_grid):
        for bad_c1 in (0.0, 0.5, -0.2):
            with pytest.raises(ValueError, match="C1"):
                build_certificate(cert_u0, C1=bad_c1)
        with pytest.raises(ValueError, match="C_wp"):
            build_certificate(cert_u0, C_wp=0.99)
        zero = SpectralField.from_samples(cert_grid, np.zeros(cert_grid.N_grid))
        with pytest.raises(ValueError, match="zero"):
            build_certificate(zero)

    def test_json_round_trip(self, cert):
        data = json.loads(cert.to_json())
        assert data["t1_branch"] == "slope"
        assert data["C1"] == cert.C1
        assert math.isclose(data["K"], cert.K, rel_tol=1e-15)
        assert math.isnan(data["T2"])


class TestHorizonFormula:
    @pytest.mark.parametrize("K", [0.5, 4.0, 4760.5593])
    def test_three_sqrtk_point(self, K):
        # at q0 = -6 sqrt(K) the logarithm collapses to ln 2
        want = math.log(2.0) / math.sqrt(K)
        assert math.isclose(predict_T2(-6.0 * math.sqrt(K), K), want, rel_tol=1e-14)

    def test_horizon_shrinks_with_steeper_start(self):
        assert predict_T2(-20.0, 4.0) < predict_T2(-12.0, 4.0)

    def test_domain_errors(self):
        with pytest.raises(ValueError, match="positive"):
            predict_T2(-10.0, 0.0)
        with pytest.raises(ValueError, match="q0"):
            predict_T2(-1.0, 4.0)

    @pytest.mark.parametrize("T1", [1e-3, 0.1, 1.0, 10.0])
    @pytest.mark.parametrize("K", [0.25, 4.0, 100.0, 4760.5593])
    def test_threshold_start_lands_inside_window(self, T1, K):
        # at the flag threshold the horizon is ln(1 + T1 sqrt(K))/sqrt(K) <= T1
        sqrtK = math.sqrt(K)
        omega0 = 1.0 + 2.0 / (T1 * sqrtK)
        q0 = -2.0 * omega0 * sqrtK
        T2 = predict_T2(q0, K)
        assert math.isclose(T2, math.log1p(T1 * sqrtK) / sqrtK, rel_tol=1e-12)
        assert T2 <= T1
        assert predict_T2(1.5 * q0, K) < T2


class TestRiccatiComparison:
    K = 4.0
    Q0 = -12.0

    def test_singularity_at_half_log_two(self):
        assert math.isclose(predict_T2(self.Q0, self.K), 0.5 * math.log(2.0), rel_tol=1e-14)

    def test_initial_value(self):
        assert math.isclose(riccati_bound(0.0, self.Q0, self.K), self.Q0, rel_tol=1e-12)

    def test_closed_form_satisfies_the_ode(self):
        T2 = predict_T2(self.Q0, self.K)
        ts = np.linspace(0.0, 0.8 * T2, 50)[1:]
        h = 1e-6
        fp = (
            riccati_bound(ts - 2 * h, self.Q0, self.K)
            - 8.0 * riccati_bound(ts - h, self.Q0, self.K)
            + 8.0 * riccati_bound(ts + h, self.Q0, self.K)
            - riccati_bound(ts + 2 * h, self.Q0, self.K)
        ) / (12.0 * h)
        rhs = -0.25 * riccati_bound(ts, self.Q0, self.K) ** 2 + self.K
        assert np.max(np.abs(fp - rhs) / (1.0 + np.abs(rhs))) <= 1e-8

    def test_numerical_integration_matches(self):
        T2 = predict_T2(self.Q0, self.K)
        ts, fs = solve_riccati(self.Q0, self.K, 0.95 * T2, 2000)
        want = riccati_bound(ts, self.Q0, self.K)
        assert np.max(np.abs(fs - want) / np.abs(want)) <= 1e-8

    def test_escape_time_matches_horizon(self):
        T2 = predict_T2(self.Q0, self.K)
        t_sing = riccati_singularity_time(self.Q0, self.K)
        assert abs(t_sing - T2) / T2 <= 1e-5

    def test_crossing_the_singularity_rejected(self):
        T2 = predict_T2(self.Q0, self.K)
        with pytest.raises(ValueError, match="singularity"):
            riccati_bound(T2, self.Q0, self.K)
        with pytest.raises(ValueError, match="singularity"):
            riccati_bound(np.array([0.0, T2 + 0.1]), self.Q0, self.K)


class TestValidation:
    def test_uncovered_run_gets_honest_verdict(self, cert_u0, cert):
        res = run(cert_u0, StepperConfig(t_end=0.2, dt_init=0.01))
        rec = validate_prediction(cert, res)
        assert not rec.covered
        assert rec.verdict == "not-covered-by-theorem"
        assert not rec.window_ok  # the run completed, no detection event
        assert rec.envelope_ok is None  # start above -2 sqrt(K): no envelope
        assert rec.slope_ok
        assert not rec.partial
        assert math.isclose(rec.t_window, 1.1 * cert.T1, rel_tol=1e-12)
        data = json.loads(rec.to_json())
        assert data["verdict"] == "not-covered-by-theorem"
