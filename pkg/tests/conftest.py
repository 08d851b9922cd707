import numpy as np
import pytest

from foch_lab import GridSpec, SpectralField, build_partition


@pytest.fixture(scope="session")
def bench_grid():
    """Benchmark box: wide enough that a unit Gaussian decays to ~1e-400."""
    return GridSpec(L=100.0, N_grid=2048)


@pytest.fixture(scope="session")
def bench_u0(bench_grid):
    return SpectralField.from_samples(
        bench_grid, 0.05 * np.exp(-(bench_grid.x**2))
    )


@pytest.fixture(scope="session")
def bench_part(bench_grid):
    return build_partition(bench_grid)


@pytest.fixture(scope="session")
def circle_grid():
    """A [-pi, pi) box, where sin and cos are exactly periodic."""
    return GridSpec(L=2.0 * np.pi, N_grid=256)


@pytest.fixture(scope="session")
def circle_part(circle_grid):
    return build_partition(circle_grid)


def l2_norm(grid, samples):
    return float(np.sqrt(np.sum(np.asarray(samples) ** 2) * grid.dx))


def rel_l2(grid, got, want):
    scale = l2_norm(grid, want)
    return l2_norm(grid, np.asarray(got) - np.asarray(want)) / scale


@pytest.fixture(scope="session")
def random_band_fields(bench_grid):
    """Deterministic band-limited fields, unit H2 norm, on a small grid."""
    from foch_lab import sobolev_norm

    grid = GridSpec(L=100.0, N_grid=512)
    rng = np.random.default_rng(20240817)
    fields = []
    band = np.abs(grid.xi) <= 8.0
    for _ in range(100):
        modes = np.zeros(grid.N_grid, dtype=complex)
        modes[band] = rng.normal(size=band.sum()) + 1j * rng.normal(size=band.sum())
        modes[grid.N_grid // 2] = 0.0
        u = SpectralField.from_modes(grid, modes)
        scale = sobolev_norm(u, 2.0)
        fields.append(SpectralField.from_modes(grid, u.modes / scale))
    return fields
