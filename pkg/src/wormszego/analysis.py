"""Norms, inner products, growth functionals and empirical operator norms."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import quadrature
from .domain import HALF_PI, ApproachParams, DomainParams
from .errors import GridMismatch, ParamOutOfRange, POutOfRange, WeightDivergence
from .grid import FrequencyField, GridSpec, SampledField, to_frequency, to_physical, x_inverse
from .special import LOG2, log_cosh
from .szego import BoundaryData, boundary_szego, interior_symbols, project_interior


@dataclass(frozen=True)
class GrowthProfile:
    samples: tuple[tuple[float, float, float], ...]
    p: float

    def values(self) -> np.ndarray:
        return np.array([v for _, _, v in self.samples])


@dataclass(frozen=True)
class SobolevOrder:
    k: float
    p: float = 2.0

    def __post_init__(self):
        if not self.k >= 0:
            raise ParamOutOfRange(f"k must be >= 0, got {self.k!r}")
        _check_p(self.p)


def _check_p(p: float) -> float:
    if not (1.0 < p < math.inf):
        raise POutOfRange(f"p must lie in (1, inf), got {p!r}")
    return float(p)


# --- norms --------------------------------------------------------------------

def field_lp_integral(values: np.ndarray, grid: GridSpec, p: float) -> float:
    """``int int |f|^p dx dgamma``: trapezoid in x (periodic grid), exact mean in gamma."""
    return float(grid.dx * np.sum(np.mean(np.abs(values) ** p, axis=-1), axis=-1).sum())


def field_lp_norm(f: SampledField, p: float) -> float:
    _check_p(p)
    return field_lp_integral(f.values, f.grid, p) ** (1.0 / p)


def lp_boundary_norm(phi: BoundaryData, p: float) -> float:
    """``(sum_l int int |phi_l|^p)^{1/p}``."""
    _check_p(p)
    return field_lp_integral(phi.stacked(), phi.grid, p) ** (1.0 / p)


def h2_inner(phi: BoundaryData, psi: BoundaryData) -> complex:
    """``sum_l int int phi_l conj(psi_l)``."""
    if phi.grid != psi.grid:
        raise GridMismatch(f"grids differ: {phi.grid} vs {psi.grid}")
    prod = phi.stacked() * np.conj(psi.stacked())
    return complex(phi.grid.dx * np.mean(prod, axis=-1).sum())


def plancherel_sum(phi: BoundaryData) -> float:
    """``(1/2pi) sum_l sum_j int |F phi_l|^2 dxi``."""
    g = phi.grid
    total = 0.0
    for f in phi.components:
        total += float(np.sum(np.abs(to_frequency(f).coeffs) ** 2))
    return total * g.dxi / (2 * math.pi)


def _log_weight(params: DomainParams, xi, j: int) -> np.ndarray:
    return log_cosh(np.pi * xi) + log_cosh(params.weight_scale * (np.asarray(xi) - 0.5 * j))


def weighted_h2_norm(params: DomainParams, profile, j: int, *, xi_range: tuple[float, float] = (-60.0, 60.0),
                     breakpoints: Sequence[float] = (), tol: float = 1e-13) -> float:
    """``(2/pi) int |g(xi)|^2 ch(pi xi) ch(2a (xi - j/2)) dxi`` (the squared weighted norm).

    ``profile`` is a callable of ``xi`` (integrated adaptively on ``xi_range``)
    or a pair ``(xi, values)`` of grid samples (Riemann sum).
    """
    if callable(profile):
        lo, hi = xi_range

        def integrand(xi):
            g = np.asarray(profile(xi), dtype=complex)
            mag = np.abs(g)
            with np.errstate(divide="ignore", over="ignore"):
                out = np.exp(2 * np.log(mag) + _log_weight(params, xi, j))
            return np.where(mag > 0, out, 0.0)

        ends = integrand(np.array([lo, hi]))
        peak = integrand(np.linspace(lo, hi, 4097)).max()
        if not np.all(np.isfinite(ends)) or (peak > 0 and ends.max() > 1e-12 * peak):
            raise WeightDivergence("|g|^2 times the weight has not decayed at the ends of xi_range")
        bps = tuple(breakpoints) + (0.0, 0.5 * j)
        val, _ = quadrature.integrate(integrand, lo, hi, abs_tol=tol * max(peak, 1.0),
                                      breakpoints=bps, initial_intervals=16)
        return 2.0 / math.pi * float(val)
    xi, values = profile
    xi = np.asarray(xi, dtype=float)
    mag = np.abs(np.asarray(values, dtype=complex))
    with np.errstate(divide="ignore", over="ignore"):
        w = np.where(mag > 0, np.exp(2 * np.log(np.where(mag > 0, mag, 1.0)) + _log_weight(params, xi, j)), 0.0)
    edge = max(1, xi.size // 32)
    peak = w.max(initial=0.0)
    if not np.all(np.isfinite(w)) or (peak > 0 and max(w[:edge].max(), w[-edge:].max()) > 1e-12 * peak):
        raise WeightDivergence("|g|^2 times the weight has not decayed at the ends of the grid")
    dxi = xi[1] - xi[0] if xi.size > 1 else 1.0
    return 2.0 / math.pi * float(w.sum() * dxi)


def bessel_symbol(grid: GridSpec, k: float) -> np.ndarray:
    XI, J = np.meshgrid(grid.xi, grid.modes, indexing="ij")
    return (1.0 + J.astype(float) ** 2 + XI**2) ** (0.5 * k)


def bessel_multiply(phi: BoundaryData, k: float) -> BoundaryData:
    """Apply ``[1 + j^2 + xi^2]^{k/2}`` to every component."""
    if k == 0:
        return phi
    sym = bessel_symbol(phi.grid, k)
    out = [to_physical(FrequencyField(phi.grid, sym * to_frequency(f).coeffs)) for f in phi.components]
    return BoundaryData(*out)


def sobolev_norm(phi: BoundaryData, order: SobolevOrder) -> float:
    return lp_boundary_norm(bessel_multiply(phi, order.k), order.p)


# --- growth functional and approach paths -----------------------------------------

FieldEvaluator = Callable[[float, float], SampledField]


def growth_value(field_eval: FieldEvaluator, ap: ApproachParams, p: float) -> float:
    total = 0.0
    for y, s in ap.slices():
        f = field_eval(y, s)
        total += field_lp_integral(f.values, f.grid, p)
    return total


def hp_growth(params: DomainParams, field_eval: FieldEvaluator, p: float,
              grid_ts: Iterable[ApproachParams]) -> GrowthProfile:
    """The four-slice functional ``L_p F(t, s)`` at each requested ``(t, s)``."""
    _check_p(p)
    samples = []
    for ap in grid_ts:
        ap.validate(params)
        for y, s in ap.slices():
            params.check_interior(y, s)
        samples.append((ap.t, ap.s, growth_value(field_eval, ap, p)))
    return GrowthProfile(tuple(samples), p)


class Path(enum.Enum):
    PRODUCT = "product_path"
    COUPLED = "coupled_path"


def product_path_point(params: DomainParams, delta: float) -> tuple[float, float]:
    """``(t, s) = (pi/2 - delta, a - delta)``."""
    t, s = HALF_PI - delta, params.half_strip - delta
    ApproachParams(t, s).validate(params)
    return t, s


def coupled_path_point(params: DomainParams, t: float) -> tuple[float, float]:
    """Slice ``(Im z1, log|z2|^2) = (t, t a / beta)`` of the pointwise approach path."""
    if not (0.0 <= t < params.beta):
        raise ParamOutOfRange(f"t must lie in [0, beta), got {t!r}")
    return t, t * params.half_strip / params.beta


def convergence_profile(params: DomainParams, phi: BoundaryData, path: Path | str,
                        p: float, parameters: Sequence[float]) -> list[tuple[float, float]]:
    """Distances between interior slices along ``path`` and the E1 boundary value.

    For the product path ``parameters`` are the offsets ``delta`` and the
    distance is the ``L^p`` norm; for the coupled path they are the values of
    ``t`` and the distance is the maximum over the grid.
    """
    path = Path(path)
    target = boundary_szego(params, phi).phi1.values
    out = []
    for par in parameters:
        if path is Path.PRODUCT:
            _check_p(p)
            t, s = product_path_point(params, par)
            f = project_interior(params, phi, s + t, s)
            d = field_lp_integral(f.values - target, phi.grid, p) ** (1.0 / p)
        else:
            y, s = coupled_path_point(params, par)
            f = project_interior(params, phi, y, s)
            d = float(np.max(np.abs(f.values - target)))
        out.append((float(par), float(d)))
    return out


def mode_truncation_profile(params: DomainParams, phi: BoundaryData, y: float, s: float,
                            p: float, modes: Sequence[int]) -> list[tuple[int, float]]:
    """``||S_{y,s} phi - S^N_{y,s} phi||_p`` for each cut-off ``N``."""
    full = project_interior(params, phi, y, s).values
    return [(int(n), field_lp_integral(full - project_interior(params, phi, y, s, max_mode=n).values,
                                       phi.grid, p) ** (1.0 / p)) for n in modes]


# --- random data and empirical norms --------------------------------------------------

@dataclass(frozen=True)
class Band:
    """Frequency support of random test data: ``|xi| <= xi_band``, ``|j| <= j_band``."""

    xi_band: float = 2.0
    j_band: int = 2


def random_band_coeffs(grid: GridSpec, seed: int, trial: int, band: Band = Band(),
                       components: Sequence[int] = (0, 1, 2, 3)) -> np.ndarray:
    """Frequency coefficients (shape ``(4, Nx, Ngamma)``) of :func:`random_band_limited`."""
    rng = np.random.default_rng([int(seed), int(trial)])
    XI, J = np.meshgrid(grid.xi, grid.modes, indexing="ij")
    mask = (np.abs(XI) <= band.xi_band) & (np.abs(J) <= band.j_band)
    taper = np.exp(-(XI / band.xi_band) ** 2)
    n = int(mask.sum())
    coeffs = np.zeros((4,) + grid.shape, dtype=complex)
    for k in components:
        c = np.zeros(grid.shape, dtype=complex)
        c[mask] = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        coeffs[k] = c * taper
    return coeffs


def random_band_limited(grid: GridSpec, seed: int, trial: int, band: Band = Band(),
                        components: Sequence[int] = (0, 1, 2, 3)) -> BoundaryData:
    """Seeded random data with i.i.d. complex normal coefficients on the band.

    The stream for each ``(seed, trial)`` is independent of every other.
    """
    coeffs = random_band_coeffs(grid, seed, trial, band, components)
    values = np.zeros_like(coeffs)
    for k in components:
        values[k] = to_physical(FrequencyField(grid, coeffs[k])).values
    return BoundaryData.from_stacked(grid, values)


def _norm_of(out, p: float) -> float:
    if isinstance(out, BoundaryData):
        return lp_boundary_norm(out, p)
    return field_lp_norm(out, p)


def empirical_opnorm(op: Callable[[BoundaryData], BoundaryData | SampledField], p: float, trials: int,
                     seed: int, grid: GridSpec, band: Band = Band(),
                     components: Sequence[int] = (0, 1, 2, 3)) -> float:
    """Largest ratio ``||op phi||_p / ||phi||_p`` over seeded random inputs."""
    _check_p(p)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    best = 0.0
    for trial in range(trials):
        phi = random_band_limited(grid, seed, trial, band, components)
        best = max(best, _norm_of(op(phi), p) / lp_boundary_norm(phi, p))
    return best


def empirical_opnorms(ops: Sequence[Callable[[BoundaryData], BoundaryData | SampledField]],
                      p_list: Sequence[float], trials: int, seed: int, grid: GridSpec,
                      band: Band = Band(), components: Sequence[int] = (0, 1, 2, 3)) -> np.ndarray:
    """Same as :func:`empirical_opnorm` for many operators and exponents sharing the inputs.

    Returns an array of shape ``(len(ops), len(p_list))``.
    """
    for p in p_list:
        _check_p(p)
    best = np.zeros((len(ops), len(p_list)))
    for trial in range(trials):
        phi = random_band_limited(grid, seed, trial, band, components)
        base = [lp_boundary_norm(phi, p) for p in p_list]
        for i, op in enumerate(ops):
            out = op(phi)
            for k, p in enumerate(p_list):
                best[i, k] = max(best[i, k], _norm_of(out, p) / base[k])
    return best


def _lp_integrals(values: np.ndarray, grid: GridSpec, p_list: Sequence[float]) -> list[float]:
    m2 = values.real**2 + values.imag**2
    out = []
    for p in p_list:
        powed = m2 if p == 2 else m2 ** (0.5 * p)
        out.append(float(grid.dx * powed.sum() / grid.Ngamma))
    return out


def interior_opnorm_table(params: DomainParams, points: Sequence[tuple[float, float]],
                          p_list: Sequence[float], trials: int, seed: int, grid: GridSpec,
                          band: Band = Band()) -> np.ndarray:
    """:func:`empirical_opnorm` of ``S_{y,s}`` at many ``(y, s)`` on shared random inputs.

    Only the torus modes inside the band are synthesised, which gives the
    same field as the full transform at a fraction of the cost. Returns an
    array of shape ``(len(points), len(p_list))``.
    """
    for p in p_list:
        _check_p(p)
    for y, s in points:
        params.check_interior(y, s)
    cols = np.flatnonzero(np.abs(grid.modes) <= band.j_band)
    js = grid.modes[cols]
    synth = np.exp(2j * np.pi * np.outer(js, grid.gamma))
    XI, J = np.meshgrid(grid.xi, js, indexing="ij")
    syms = [interior_symbols(params, XI, J, y, s) for y, s in points]
    best = np.zeros((len(points), len(p_list)))
    for trial in range(trials):
        coeffs = random_band_coeffs(grid, seed, trial, band)
        base = np.zeros(len(p_list))
        for k in range(4):
            vals = x_inverse(coeffs[k][:, cols], grid) @ synth
            base += np.array(_lp_integrals(vals, grid, p_list))
        base = base ** (1.0 / np.asarray(p_list, dtype=float))
        sub = coeffs[:, :, cols]
        for i, sym in enumerate(syms):
            vals = x_inverse(np.sum(sym * sub, axis=0), grid) @ synth
            norms = np.array(_lp_integrals(vals, grid, p_list)) ** (1.0 / np.asarray(p_list, dtype=float))
            best[i] = np.maximum(best[i], norms / base)
    return best


def interior_l2_symbol_bound(params: DomainParams, y: float, s: float, grid: GridSpec) -> float:
    """``sup_(xi, j)`` of the Euclidean norm of the 4-component symbol row of ``S_{y,s}``.

    Equals ``sup exp(j s/2 - y xi) / (2 sqrt(W))`` over the grid.
    """
    XI, J = np.meshgrid(grid.xi, grid.modes, indexing="ij")
    lw = 2 * LOG2 + _log_weight(params, XI, J)
    return float(np.exp(0.5 * J * s - y * XI - 0.5 * lw).max())


__all__ = [
    "Band",
    "GrowthProfile",
    "Path",
    "SobolevOrder",
    "bessel_multiply",
    "bessel_symbol",
    "convergence_profile",
    "coupled_path_point",
    "empirical_opnorm",
    "empirical_opnorms",
    "field_lp_integral",
    "field_lp_norm",
    "growth_value",
    "h2_inner",
    "hp_growth",
    "interior_l2_symbol_bound",
    "interior_opnorm_table",
    "random_band_coeffs",
    "lp_boundary_norm",
    "mode_truncation_profile",
    "plancherel_sum",
    "product_path_point",
    "random_band_limited",
    "sobolev_norm",
    "weighted_h2_norm",
]
