"""Conserved functionals, the wave-breaking functional, and characteristics.

sin x on the 2 pi box is the closed-form anchor: both conserved
functionals equal 4 pi there, the breaking functional is -sin(2x)/2 with
minimum -1/2, and the first minimizer up from -pi sits at -3 pi/4.
"""

import math

import numpy as np
import pytest

from foch_lab.diagnostics import (
    criterion_integrals,
    energy_E,
    energy_F,
    q_minimum,
    relative_drift,
    report,
    track_characteristic,
)
from foch_lab.integrator import RunResult, StepperConfig, run
from foch_lab.littlewood_paley import sobolev_norm
from foch_lab.littlewood_paley import _chi_profile
from foch_lab.spectral_core import GridSpec, SpectralField, deriv_modes, fine_samples


@pytest.fixture(scope="module")
def sine(circle_grid):
    return SpectralField.from_samples(circle_grid, np.sin(circle_grid.x))


@pytest.fixture(scope="module")
def bench_run(bench_u0):
    return run(bench_u0, StepperConfig(t_end=0.1, dt_init=0.01))


class TestFunctionals:
    def test_energies_of_sine(self, sine):
        assert math.isclose(energy_E(sine), 4.0 * math.pi, rel_tol=1e-12)
        assert math.isclose(energy_F(sine), 4.0 * math.pi, rel_tol=1e-12)

    def test_energy_scaling(self, sine):
        two = SpectralField.from_samples(sine.grid, 2.0 * sine.samples)
        assert math.isclose(energy_E(two), 4.0 * energy_E(sine), rel_tol=1e-12)

    def test_h2_norm_squares_to_energy(self, sine, bench_u0):
        for u in (sine, bench_u0):
            assert math.isclose(sobolev_norm(u, 2.0) ** 2, energy_E(u), rel_tol=1e-12)

    def test_quartic_functional_positive_on_small_data(self, bench_u0):
        # every term but the cross term is a square; smallness keeps it positive
        assert energy_F(bench_u0) > 0.0


class TestBreakingFunctional:
    def test_sine_minimum(self, sine):
        q, x = q_minimum(sine)
        assert math.isclose(q, -0.5, rel_tol=1e-11)
        assert math.isclose(x, -0.75 * math.pi, rel_tol=1e-12)

    def test_polish_beats_oversampled_scan(self, bench_u0):
        g = bench_u0.grid
        q, _ = q_minimum(bench_u0)
        qf = fine_samples(g, deriv_modes(g, bench_u0.modes, 1), 16) * fine_samples(
            g, deriv_modes(g, bench_u0.modes, 2), 16
        )
        brute = float(np.min(qf))
        assert q <= brute + 1e-15
        # the scan sits above the off-grid minimum by its quadratic gap
        assert abs(q - brute) <= 1e-4 * abs(q)

    def test_zero_field(self, bench_grid):
        q, _ = q_minimum(SpectralField.from_samples(bench_grid, np.zeros(bench_grid.N_grid)))
        assert q == 0.0


class TestReport:
    def test_fields_match_componentwise(self, bench_u0, bench_part):
        rep = report(bench_u0, bench_part)
        assert rep.E == energy_E(bench_u0)
        assert rep.F == energy_F(bench_u0)
        assert rep.h2 == sobolev_norm(bench_u0, 2.0)
        q, x = q_minimum(bench_u0)
        assert rep.q_min == q and rep.q_argmin == x

    def test_sup_norms_of_sine(self, sine, circle_part):
        rep = report(sine, circle_part)
        assert math.isclose(rep.w1inf, 1.0, rel_tol=1e-12)
        # the momentum of sine is 2 sin, split between the two lowest blocks
        split = float(_chi_profile(np.array([1.0]))[0])
        want = 2.0 * max(split, 1.0 - split)
        assert math.isclose(rep.b0inf_n, want, rel_tol=1e-10)

    def test_w1inf_picks_steeper_derivative(self, circle_grid, circle_part):
        u = SpectralField.from_samples(circle_grid, 0.1 * np.sin(3.0 * circle_grid.x))
        rep = report(u, circle_part)
        assert math.isclose(rep.w1inf, 0.3, rel_tol=1e-10)


class TestCharacteristics:
    def test_far_field_path_is_stationary(self, bench_run):
        p = track_characteristic(bench_run, 40.0)
        assert np.max(np.abs(p.y - 40.0)) <= 1e-10
        assert np.max(np.abs(p.q_along)) <= 1e-20
        assert not p.truncated

    def test_paths_preserve_order(self, bench_run):
        finals = [
            track_characteristic(bench_run, x0).y[-1]
            for x0 in (-2.0, -1.0, 0.0, 1.0, 2.0)
        ]
        assert all(a < b for a, b in zip(finals, finals[1:]))

    def test_argmin_seed_tracks_global_minimum(self, bench_u0, bench_run):
        _, x0 = q_minimum(bench_u0)
        p = track_characteristic(bench_run, x0)
        series = np.array([d.q_min for d in bench_run.diagnostics])
        assert np.max(np.abs(p.q_along - series) / np.abs(series)) <= 1e-5

    def test_seed_lattice_brackets_minimum(self, bench_run):
        lattice = min(
            np.min(track_characteristic(bench_run, x0).q_along)
            for x0 in np.linspace(-4.0, 4.0, 32)
        )
        series = min(d.q_min for d in bench_run.diagnostics)
        assert lattice >= series - 1e-12
        assert abs(lattice - series) <= 0.05 * abs(series)

    def test_fast_flow_truncates(self, circle_grid):
        big = SpectralField.from_samples(circle_grid, 3.0 * np.cos(circle_grid.x))
        res = RunResult(
            times=[0.0, 0.3],
            snapshots=[big, big],
            snapshot_times=[0.0, 0.3],
            diagnostics=[],
            termination="completed",
            t_final=0.3,
            dt_log=[],
        )
        p = track_characteristic(res, 0.45 * circle_grid.L - 0.1)
        assert p.truncated

    def test_snapshot_count_mismatch_rejected(self, bench_run, circle_grid):
        broken = RunResult(
            times=list(bench_run.times),
            snapshots=list(bench_run.snapshots)[:-1],
            snapshot_times=list(bench_run.snapshot_times),
            diagnostics=list(bench_run.diagnostics),
            termination="completed",
            t_final=bench_run.t_final,
            dt_log=[],
        )
        with pytest.raises(ValueError, match="snapshot"):
            track_characteristic(broken, 0.0)


class TestSeriesHelpers:
    class _Row:
        def __init__(self, w, b):
            self.w1inf = w
            self.b0inf_n = b

    class _Result:
        def __init__(self, times, rows):
            self.times = times
            self.diagnostics = rows

    def test_criterion_integrals_trapezoid(self):
        rows = [self._Row(1.0, 2.0), self._Row(2.0, 2.0), self._Row(3.0, 2.0)]
        out = criterion_integrals(self._Result([0.0, 1.0, 2.0], rows))
        assert out["I_w"] == 4.0
        assert out["I_b"] == 4.0
        assert out["I_wb"] == 8.0

    def test_criterion_integrals_on_run(self, bench_run):
        out = criterion_integrals(bench_run)
        for v in out.values():
            assert np.isfinite(v) and v > 0.0
        # integrand is nearly constant over the short window
        w0 = bench_run.diagnostics[0].w1inf
        assert math.isclose(out["I_w"], w0 * bench_run.t_final, rel_tol=1e-3)

    def test_relative_drift(self):
        assert relative_drift([2.0, 2.1, 1.9]) == pytest.approx(0.05)
        assert relative_drift([0.0, 1.0]) == 0.0
        assert relative_drift([]) == 0.0
