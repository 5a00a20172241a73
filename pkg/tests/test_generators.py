import numpy as np
import pytest
from scipy.integrate import quad

from shiftinv.generators import (BumpSpec, GeneratorSet, GridTooCoarse, build_generators, forward_transform,
                                 frequency_grid, generator_spectrum, inverse_transform, make_bump, partition_sum)
from shiftinv.signal import Grid


@pytest.mark.parametrize("profile", ["exp", "poly"])
def test_bump_values(profile):
    spec = BumpSpec(0.2, profile=profile)
    theta = make_bump(spec)
    assert theta(0.0) == 1.0
    assert theta(np.pi) == 0.0 and theta(-np.pi) == 0.0
    assert 0 < theta(np.pi - 0.1) < 1
    xi = np.linspace(-4, 4, 4001)
    t = theta(xi)
    assert np.all((t >= 0) & (t <= 1))
    assert np.all(t[np.abs(xi) <= np.pi - 0.2] == 1.0)
    assert np.all(t[np.abs(xi) >= np.pi] == 0.0)
    np.testing.assert_array_equal(t, theta(-xi))


@pytest.mark.parametrize("eps", [0.0, 0.25, 0.3, -0.1])
def test_bump_rejects_epsilon(eps):
    with pytest.raises(ValueError):
        BumpSpec(eps)


def test_partition_sum():
    spec = BumpSpec()
    assert partition_sum(spec, 0.0) >= 1
    assert partition_sum(spec, np.pi / 2) == pytest.approx(2.0, abs=1e-15)
    xi = np.linspace(-10, 10, 5001)
    assert partition_sum(spec, xi).min() >= 1.0
    norm = BumpSpec(normalized=True)
    total = sum(generator_spectrum(k, norm)(xi) for k in range(-8, 9))
    np.testing.assert_allclose(total, 1.0, atol=1e-12)


def test_spectra_and_support():
    gens = build_generators((0, 1))
    assert gens.fourier_values(0.0)[0] == 1.0
    assert gens.fourier_values(-np.pi)[1] == 1.0
    xi = np.linspace(-20, 20, 8001)
    for k in (0, 1, 3):
        s = generator_spectrum(k, BumpSpec())(xi)
        outside = (xi < -np.pi - k * np.pi) | (xi > np.pi - k * np.pi)
        assert np.all(s[outside] == 0)
    minus = generator_spectrum(1, BumpSpec(), sign=-1)
    assert minus(np.pi) == 1.0


def test_phi0_at_origin_matches_quadrature(grid):
    gens = build_generators((0,), BumpSpec(), grid)
    theta = make_bump(BumpSpec())
    exact = quad(theta, -np.pi, np.pi, points=[-np.pi + 0.2, np.pi - 0.2], epsabs=1e-13)[0] / (2 * np.pi)
    i0 = np.argmin(np.abs(grid.points))
    # torus samples carry the periodization tail, bounded by the alias diagnostic
    torus = gens.time[0].values[i0].real
    assert abs(torus - exact) <= gens.diagnostics["alias_error"] * exact
    wide = Grid.window(512, "1/64")
    finer = build_generators((0,), BumpSpec(), wide).time[0].values[np.argmin(np.abs(wide.points))].real
    assert abs(finer - exact) < abs(torus - exact) / 10
    assert 0.9 < exact < 1


def test_phi0_real(gens012):
    assert np.abs(gens012.time[0].values.imag).max() < 1e-10 * np.abs(gens012.time[0].values).max()


def test_modulation_relation(gens012, grid):
    x = grid.points
    phi0 = gens012.time[0].values
    mask = np.abs(phi0) > 1e-12
    for k, g in zip(gens012.labels, gens012.time):
        expect = np.exp(-1j * k * np.pi * x) * phi0
        rel = np.abs(g.values[mask] - expect[mask]) / np.abs(expect[mask])
        assert rel.max() < 1e-9


def test_modulated_samples_match_direct_transforms(gens012, grid):
    for F, g in zip(gens012.fourier, gens012.time):
        direct = inverse_transform(F.values, grid)
        assert np.abs(direct - g.values).max() < 1e-10


def test_transform_pair_inverse(grid, rng):
    v = rng.standard_normal(grid.n) + 1j * rng.standard_normal(grid.n)
    np.testing.assert_allclose(forward_transform(inverse_transform(v, grid), grid), v, atol=1e-10)


def test_frequency_grid_step(grid):
    fg = frequency_grid(grid)
    assert fg.dx == pytest.approx(np.pi / 128)
    assert fg.points[fg.n // 2] == 0.0


def test_diagnostics(gens012):
    d = gens012.diagnostics
    assert len(d["decay_constant"]) == 3 and all(np.isfinite(d["decay_constant"]))
    assert all(0 < v < np.inf for v in d["amalgam_W1_poly4"])
    assert d["alias_error"] < 1e-3


def test_rejects_bad_indices():
    for bad in [(1, 0), (0, 0), ()]:
        with pytest.raises(ValueError):
            build_generators(bad)
    with pytest.raises(ValueError):
        build_generators((0, 1), sign=2)


def test_rejects_coarse_grids():
    with pytest.raises(GridTooCoarse):
        build_generators((0, 1), BumpSpec(), Grid.window(32, "1/256"))
    with pytest.raises(GridTooCoarse):
        build_generators((0, 5), BumpSpec(), Grid.window(128, "1/4"))


def test_normalized_generators(grid):
    gens = build_generators((0, 1), BumpSpec(normalized=True), grid)
    assert gens.fourier_values(np.pi / 2)[0] == pytest.approx(0.5)


def test_from_spectra_without_base(grid):
    gens = GeneratorSet.from_spectra([generator_spectrum(1, BumpSpec())], 2 * np.pi, grid)
    ref = build_generators((1,), BumpSpec(), grid)
    assert np.abs(gens.time[0].values - ref.time[0].values).max() < 1e-10
