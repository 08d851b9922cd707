"""Dyadic partition, frequency blocks, and the Besov/Sobolev norm layer."""

import math

import numpy as np
import pytest
from conftest import l2_norm

from foch_lab.littlewood_paley import (
    BesovIndex,
    besov_norm,
    build_partition,
    dyadic_block,
    low_cut,
    sobolev_norm,
)
from foch_lab.littlewood_paley import _chi_profile, _phi_profile
from foch_lab.spectral_core import GridSpec, SpectralField


def cosine_mode(grid, k0, amp=1.0):
    """Field amp*cos(xi_k0 x), built directly in frequency space."""
    modes = np.zeros(grid.N_grid, dtype=complex)
    modes[k0] = amp * grid.L / 2.0
    modes[-k0] = amp * grid.L / 2.0
    return SpectralField.from_modes(grid, modes)


@pytest.fixture(scope="module")
def plateau_grid():
    # frequency spacing 0.1, so 1.4 * 2^j sits on the grid for every level
    return GridSpec(L=20.0 * np.pi, N_grid=512)


@pytest.fixture(scope="module")
def plateau_part(plateau_grid):
    return build_partition(plateau_grid)


class TestProfiles:
    def test_low_pass_exact_regions(self):
        eta = np.array([0.0, 0.3, 0.75, 4.0 / 3.0, 2.0, 50.0])
        chi = _chi_profile(eta)
        assert np.all(chi[eta <= 0.75] == 1.0)
        assert np.all(chi[eta >= 4.0 / 3.0] == 0.0)

    def test_low_pass_monotone_transition(self):
        eta = np.linspace(0.75, 4.0 / 3.0, 400)
        chi = _chi_profile(eta)
        assert np.all(np.diff(chi) <= 1e-15)
        assert np.all((chi >= 0.0) & (chi <= 1.0))

    def test_annulus_range_and_support(self):
        eta = np.linspace(-6.0, 6.0, 2001)
        phi = _phi_profile(eta)
        assert np.all((phi >= 0.0) & (phi <= 1.0))
        outside = (np.abs(eta) <= 0.75) | (np.abs(eta) >= 8.0 / 3.0)
        assert np.all(phi[outside] == 0.0)

    def test_annulus_plateau_is_exactly_one(self):
        eta = np.linspace(4.0 / 3.0, 1.5, 101)
        assert np.all(_phi_profile(eta) == 1.0)

    def test_profiles_even(self):
        eta = np.linspace(0.0, 4.0, 97)
        assert np.array_equal(_chi_profile(eta), _chi_profile(-eta))
        assert np.array_equal(_phi_profile(eta), _phi_profile(-eta))


class TestPartition:
    def test_block_count_tracks_resolution(self):
        for L, n in [(100.0, 2048), (2.0 * np.pi, 256), (200.0, 8192)]:
            grid = GridSpec(L=L, N_grid=n)
            part = build_partition(grid)
            assert part.j_min == -1
            assert part.j_max == int(math.floor(math.log2(grid.nyquist))) - 1

    def test_too_coarse_grid_rejected(self):
        with pytest.raises(ValueError, match="coarse"):
            build_partition(GridSpec(L=16.0, N_grid=16))

    def test_partition_of_unity_on_resolvable_band(self, bench_grid, bench_part):
        total = np.zeros(bench_grid.N_grid)
        for j in range(bench_part.j_min, bench_part.j_max + 1):
            total += bench_part.block_weights(j)
        inside = np.abs(bench_grid.xi) <= 1.5 * 2.0**bench_part.j_max
        assert inside.sum() > bench_grid.N_grid // 2
        assert np.max(np.abs(total[inside] - 1.0)) <= 1e-14

    def test_weights_telescope_to_low_pass(self, bench_grid, bench_part):
        # the weight sum collapses to one low-pass profile on every bin
        total = np.zeros(bench_grid.N_grid)
        for j in range(bench_part.j_min, bench_part.j_max + 1):
            total += bench_part.block_weights(j)
        roof = _chi_profile(np.abs(bench_grid.xi) / 2.0 ** (bench_part.j_max + 1))
        assert np.max(np.abs(total - roof)) <= 1e-14

    def test_separated_blocks_have_disjoint_supports(self, bench_part):
        for j in range(bench_part.j_min, bench_part.j_max + 1):
            for jj in range(j + 2, bench_part.j_max + 1):
                prod = bench_part.block_weights(j) * bench_part.block_weights(jj)
                assert np.all(prod == 0.0)

    def test_block_index_out_of_range(self, bench_part):
        with pytest.raises(ValueError, match="outside"):
            bench_part.block_weights(bench_part.j_max + 1)
        with pytest.raises(ValueError, match="outside"):
            bench_part.block_weights(-2)

    def test_low_cut_recursion(self, bench_grid, bench_part, bench_u0):
        for j in range(0, 4):
            left = low_cut(bench_u0, j + 1, bench_part)
            right = low_cut(bench_u0, j, bench_part).samples + dyadic_block(
                bench_u0, j, bench_part
            ).samples
            assert np.max(np.abs(left.samples - right)) <= 1e-14

    def test_low_cut_saturates_to_identity(self, bench_grid, bench_part, bench_u0):
        j_all = bench_part.j_max + 2
        v = low_cut(bench_u0, j_all, bench_part)
        assert np.max(np.abs(v.samples - bench_u0.samples)) <= 1e-14


class TestBlockOracle:
    """A grid cosine pitched inside an annulus plateau passes one block whole."""

    def level_mode(self, grid, j):
        return cosine_mode(grid, 14 * 2**j)

    def test_single_block_captures_plateau_cosine(self, plateau_grid, plateau_part):
        for j in range(0, plateau_part.j_max + 1):
            u = self.level_mode(plateau_grid, j)
            block = dyadic_block(u, j, plateau_part)
            assert np.array_equal(block.samples, u.samples)
            for jn in (j - 1, j + 1):
                if plateau_part.j_min <= jn <= plateau_part.j_max:
                    nb = dyadic_block(u, jn, plateau_part)
                    assert np.max(np.abs(nb.samples)) == 0.0

    def test_low_frequency_cosine_lands_in_base_block(self, plateau_grid, plateau_part):
        u = cosine_mode(plateau_grid, 5)  # xi = 0.5, below the low-pass knee
        base = dyadic_block(u, -1, plateau_part)
        assert np.array_equal(base.samples, u.samples)
        first = dyadic_block(u, 0, plateau_part)
        assert np.max(np.abs(first.samples)) == 0.0

    def test_besov_of_plateau_cosine(self, plateau_grid, plateau_part):
        want_l2 = math.sqrt(plateau_grid.L / 2.0)
        for s in (0.0, 0.5, 2.0):
            for j in (0, 2):
                u = self.level_mode(plateau_grid, j)
                got = besov_norm(u, BesovIndex(s, 2, 2), plateau_part)
                assert math.isclose(got, 2.0 ** (j * s) * want_l2, rel_tol=1e-12)

    def test_besov_of_low_frequency_cosine(self, plateau_grid, plateau_part):
        u = cosine_mode(plateau_grid, 5)
        want = 2.0**-1.5 * math.sqrt(plateau_grid.L / 2.0)
        got = besov_norm(u, BesovIndex(1.5, 2, 2), plateau_part)
        assert math.isclose(got, want, rel_tol=1e-12)

    def test_sup_norm_route(self, plateau_grid, plateau_part):
        u = self.level_mode(plateau_grid, 1)
        got = besov_norm(u, BesovIndex(0.0, math.inf, math.inf), plateau_part)
        assert math.isclose(got, 1.0, rel_tol=1e-12)

    def test_two_level_quadrature_sum(self, plateau_grid, plateau_part):
        # disjoint levels add in quadrature for square summability
        a = self.level_mode(plateau_grid, 0)
        b = self.level_mode(plateau_grid, 2)
        u = SpectralField.from_modes(plateau_grid, a.modes + b.modes)
        s = 1.0
        want = math.sqrt(
            (2.0**0 * math.sqrt(plateau_grid.L / 2.0)) ** 2
            + (2.0 ** (2 * s) * math.sqrt(plateau_grid.L / 2.0)) ** 2
        )
        got = besov_norm(u, BesovIndex(s, 2, 2), plateau_part)
        assert math.isclose(got, want, rel_tol=1e-12)


class TestNormLayer:
    def test_index_validation(self):
        with pytest.raises(ValueError):
            BesovIndex(1.0, 0.5, 2)
        with pytest.raises(ValueError):
            BesovIndex(1.0, 2, 0.0)

    def test_summability_ordering(self, random_band_fields, bench_part):
        part = build_partition(random_band_fields[0].grid)
        for u in random_band_fields[:10]:
            l1 = besov_norm(u, BesovIndex(1.0, 2, 1), part)
            l2 = besov_norm(u, BesovIndex(1.0, 2, 2), part)
            li = besov_norm(u, BesovIndex(1.0, 2, math.inf), part)
            assert l1 >= l2 >= li > 0.0

    def test_sobolev_norm_of_cosine(self, plateau_grid):
        u = cosine_mode(plateau_grid, 30, amp=0.7)
        xi0 = plateau_grid.xi[30]
        want = 0.7 * math.sqrt((1.0 + xi0**2) ** 1.5 * plateau_grid.L / 2.0)
        assert math.isclose(sobolev_norm(u, 1.5), want, rel_tol=1e-12)

    def test_sobolev_zero_order_is_l2(self, random_band_fields):
        for u in random_band_fields[:5]:
            assert math.isclose(
                sobolev_norm(u, 0.0), l2_norm(u.grid, u.samples), rel_tol=1e-12
            )


class TestNormEquivalence:
    """Square-summability norms against Sobolev norms on a fixed random family.

    Windows are frozen from this family; the two-sided factor-two bracket is
    only claimed at the two lower regularities, and measurably fails at s = 2.
    """

    WINDOWS = {0.5: (0.69, 0.76), 1.0: (0.55, 0.63), 2.0: (0.37, 0.43)}

    def ratios(self, fields, s):
        part = build_partition(fields[0].grid)
        idx = BesovIndex(s, 2, 2)
        return [besov_norm(u, idx, part) / sobolev_norm(u, s) for u in fields]

    @pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
    def test_frozen_family_window(self, random_band_fields, s):
        lo, hi = self.WINDOWS[s]
        r = self.ratios(random_band_fields, s)
        assert min(r) >= lo and max(r) <= hi

    @pytest.mark.parametrize("s", [0.5, 1.0])
    def test_factor_two_bracket(self, random_band_fields, s):
        r = self.ratios(random_band_fields, s)
        assert min(r) >= 0.5 and max(r) <= 2.0

    def test_bracket_breaks_at_s_two(self, random_band_fields):
        # the block aggregation undercounts curvature-heavy fields here
        r = self.ratios(random_band_fields, 2.0)
        assert max(r) < 0.5
