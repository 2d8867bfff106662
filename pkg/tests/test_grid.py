import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wormszego.errors import GridMismatch, NonFinite, SymbolOverflow
from wormszego.grid import (
    FrequencyField,
    GridSpec,
    MultiplierSpec,
    SampledField,
    apply_multiplier,
    apply_physical,
    mihlin_bound,
    read_binary,
    read_field_csv,
    read_frequency_csv,
    to_frequency,
    to_physical,
    write_binary,
    write_field_csv,
    write_frequency_csv,
)

G = GridSpec(20.0, 256, 4)


def direct_forward(values, grid):
    """Riemann-sum oracle for the mixed transform, no FFT involved."""
    E = np.exp(-1j * np.outer(grid.xi, grid.x)) * grid.dx
    T = np.exp(-2j * np.pi * np.outer(grid.gamma, grid.modes)) / grid.Ngamma
    return E @ values @ T


def random_field(seed, grid=G):
    rng = np.random.default_rng(seed)
    c = np.zeros(grid.shape, dtype=complex)
    band = (np.abs(grid.xi) < 3)[:, None] & (np.abs(grid.modes) <= 2)[None, :]
    c[band] = rng.standard_normal(band.sum()) + 1j * rng.standard_normal(band.sum())
    return to_physical(FrequencyField(grid, c * np.exp(-grid.xi**2)[:, None]))


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(20.0, 100, 4)
    with pytest.raises(ValueError):
        GridSpec(-1.0, 64, 4)
    with pytest.raises(ValueError):
        GridSpec(1.0, 64, -1)
    assert G.Ngamma == 9 and G.shape == (256, 9)
    assert G.xi[G.Nx // 2] == 0.0


def test_zero_field():
    assert np.all(to_frequency(G.zeros()).coeffs == 0)
    assert np.all(to_physical(FrequencyField(G, np.zeros(G.shape))).values == 0)


def test_gaussian_transform():
    f = SampledField.from_function(G, lambda x, g: np.exp(-x**2 / 2))
    c = to_frequency(f).coeffs
    exact = math.sqrt(2 * math.pi) * np.exp(-G.xi**2 / 2)
    assert np.max(np.abs(c[:, G.mode_index(0)] - exact)) < 1e-13
    others = np.delete(c, G.mode_index(0), axis=1)
    assert np.max(np.abs(others)) < 1e-14
    assert np.max(np.abs(c - direct_forward(f.values, G))) < 1e-12


def test_single_character():
    f = SampledField.from_function(G, lambda x, g: np.exp(-x**2) * np.exp(2j * np.pi * 3 * g))
    c = to_frequency(f).coeffs
    exact = math.sqrt(math.pi) * np.exp(-G.xi**2 / 4)
    assert np.max(np.abs(c[:, G.mode_index(3)] - exact)) < 1e-13
    c[:, G.mode_index(3)] = 0
    assert np.max(np.abs(c)) < 1e-13


def test_plane_wave():
    m0, j0 = 140, -2
    c = np.zeros(G.shape, dtype=complex)
    c[m0, G.mode_index(j0)] = 1.0
    f = to_physical(FrequencyField(G, c)).values
    X, Gm = np.meshgrid(G.x, G.gamma, indexing="ij")
    expected = G.dxi / (2 * math.pi) * np.exp(1j * X * G.xi[m0]) * np.exp(2j * np.pi * j0 * Gm)
    assert np.max(np.abs(f - expected)) < 1e-14 * G.dxi


@given(st.integers(0, 2**32 - 1))
def test_round_trip(seed):
    f = random_field(seed)
    back = to_physical(to_frequency(f)).values
    assert np.max(np.abs(back - f.values)) <= 1e-12 * np.max(np.abs(f.values))


@given(st.integers(0, 2**32 - 1), st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_linearity_and_parseval(seed, a):
    f, g = random_field(seed), random_field(seed + 1)
    lhs = to_frequency(f * a + g).coeffs
    rhs = a * to_frequency(f).coeffs + to_frequency(g).coeffs
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * (1 + np.max(np.abs(rhs)))
    phys = G.dx * np.mean(np.abs(f.values) ** 2, axis=1).sum()
    freq = G.dxi / (2 * math.pi) * np.sum(np.abs(to_frequency(f).coeffs) ** 2)
    assert phys == pytest.approx(freq, rel=1e-12)


def test_identity_multiplier():
    f = random_field(3)
    out = apply_physical(f, MultiplierSpec(lambda xi, j: np.ones_like(xi)))
    assert np.max(np.abs(out.values - f.values)) < 1e-13


def test_composition_equals_product():
    f = random_field(4)
    m1 = MultiplierSpec(lambda u: np.exp(-0.7 * u) / np.cosh(1.5 * u), shift_half_j=True)
    m2 = MultiplierSpec(lambda xi, j: np.exp(-0.3 * xi) / np.cosh(np.pi * xi))
    F = to_frequency(f)
    twice = apply_multiplier(apply_multiplier(F, m1), m2).coeffs
    once = apply_multiplier(F, m1.on_grid(G) * m2.on_grid(G)).coeffs
    assert np.max(np.abs(twice - once)) <= 1e-13 * np.max(np.abs(once))


def test_multiplier_overflow():
    with pytest.raises(SymbolOverflow):
        apply_multiplier(to_frequency(random_field(0)), MultiplierSpec(lambda xi, j: np.exp(35 * xi)))


def test_mihlin_examples():
    assert mihlin_bound(MultiplierSpec(lambda xi, j: np.ones_like(xi)), (-50, 50)) == pytest.approx(1.0)
    good = MultiplierSpec(lambda xi, j: np.exp(-np.pi * xi) / np.cosh(np.pi * xi))
    assert mihlin_bound(good, (-50, 50)) <= 2 + math.pi
    bad = MultiplierSpec(lambda xi, j: np.exp(3 * np.pi * xi) / np.cosh(np.pi * xi))
    b = [mihlin_bound(bad, (-r, r)) for r in (2, 4, 8)]
    assert b[0] < b[1] < b[2] and b[2] > 1e20
    with pytest.raises(NonFinite):
        mihlin_bound(bad, (-300, 300))


def test_csv_round_trip(tmp_path):
    f = random_field(5)
    write_field_csv(tmp_path / "f.csv", f)
    assert np.array_equal(read_field_csv(tmp_path / "f.csv", G).values, f.values)
    F = to_frequency(f)
    write_frequency_csv(tmp_path / "F.csv", F)
    assert np.array_equal(read_frequency_csv(tmp_path / "F.csv", G).coeffs, F.coeffs)
    with pytest.raises(GridMismatch):
        read_field_csv(tmp_path / "f.csv", GridSpec(20.0, 128, 4))


def test_binary_round_trip(tmp_path):
    v = random_field(6).values
    write_binary(tmp_path / "v.bin", v)
    assert np.array_equal(read_binary(tmp_path / "v.bin"), v)
    raw = (tmp_path / "v.bin").read_bytes()
    assert raw[:8] == np.array([256, 9], dtype="<u4").tobytes()


def test_grid_mismatch():
    with pytest.raises(GridMismatch):
        random_field(0) + random_field(0, GridSpec(20.0, 128, 4))
