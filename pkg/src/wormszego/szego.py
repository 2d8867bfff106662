"""The Szegő projection of D'_beta as mixed Fourier multipliers.

Write ``a = beta - pi/2``, ``W(xi, j) = ch(pi xi) ch(2a (xi - j/2))`` and let
``(V_l, S_l)`` be the values of ``(Im z1, log|z2|^2)`` on the component E_l.
With ``u_l(xi, j) = exp(j S_l / 2 - V_l xi)`` one has ``sum_l u_l^2 = 4 W``, so

    n_l = u_l / (2 sqrt(W))

is a unit vector and the boundary projector acts at each ``(xi, j)`` as the
rank-one matrix ``n n^T``. The interior operator ``S_{y,s}`` multiplies the
coefficients of ``phi_l`` by ``exp(j (s + S_l)/2 - (y + V_l) xi) / (4 W)``.
Every symbol is evaluated as the exponential of a log so nothing overflows.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np
from scipy import fft as sfft

from .domain import HALF_PI, Component, DomainParams, component_offsets
from .errors import GridMismatch, ParamOutOfRange, PWConditionViolated
from .grid import (
    FrequencyField,
    GridSpec,
    SampledField,
    checked_symbol,
    fft_workers,
    to_frequency,
    to_physical,
)
from .special import LOG2, log_cosh, weighted

#: relative level below which a weighted PW profile counts as decayed
PW_DECAY = 1e-12


# --- data containers ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BoundaryData:
    """One sampled field per distinguished-boundary component E1..E4."""

    phi1: SampledField
    phi2: SampledField
    phi3: SampledField
    phi4: SampledField

    def __post_init__(self):
        g = self.phi1.grid
        for f in (self.phi2, self.phi3, self.phi4):
            if f.grid != g:
                raise GridMismatch("all four boundary components must share one grid")

    @property
    def grid(self) -> GridSpec:
        return self.phi1.grid

    @property
    def components(self) -> tuple[SampledField, SampledField, SampledField, SampledField]:
        return (self.phi1, self.phi2, self.phi3, self.phi4)

    def stacked(self) -> np.ndarray:
        """Values as one array of shape ``(4, Nx, Ngamma)``."""
        return np.stack([f.values for f in self.components])

    @classmethod
    def from_stacked(cls, grid: GridSpec, values: np.ndarray) -> "BoundaryData":
        v = np.asarray(values, dtype=complex)
        if v.shape != (4,) + grid.shape:
            raise GridMismatch(f"expected shape {(4,) + grid.shape}, got {v.shape}")
        return cls(*(SampledField(grid, v[k]) for k in range(4)))

    @classmethod
    def zeros(cls, grid: GridSpec) -> "BoundaryData":
        return cls.from_stacked(grid, np.zeros((4,) + grid.shape, dtype=complex))

    @classmethod
    def single(cls, field: SampledField, component: Component = Component.E1) -> "BoundaryData":
        """Data supported on one component only."""
        v = np.zeros((4,) + field.grid.shape, dtype=complex)
        v[int(component)] = field.values
        return cls.from_stacked(field.grid, v)

    def __add__(self, other: "BoundaryData") -> "BoundaryData":
        _check_same(self, other)
        return BoundaryData.from_stacked(self.grid, self.stacked() + other.stacked())

    def __sub__(self, other: "BoundaryData") -> "BoundaryData":
        _check_same(self, other)
        return BoundaryData.from_stacked(self.grid, self.stacked() - other.stacked())

    def __mul__(self, c) -> "BoundaryData":
        return BoundaryData.from_stacked(self.grid, self.stacked() * c)

    __rmul__ = __mul__


def _check_same(a: BoundaryData, b: BoundaryData) -> None:
    if a.grid != b.grid:
        raise GridMismatch(f"grids differ: {a.grid} vs {b.grid}")


def boundary_to_frequency(phi: BoundaryData) -> np.ndarray:
    """Mixed transform of all four components, shape ``(4, Nx, Ngamma)``."""
    return np.stack([to_frequency(f).coeffs for f in phi.components])


def boundary_from_frequency(grid: GridSpec, coeffs: np.ndarray) -> BoundaryData:
    return BoundaryData(*(to_physical(FrequencyField(grid, c)) for c in coeffs))


Profile = np.ndarray | Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ModeCoefficients:
    """Paley-Wiener data ``{g_j}``: each entry is an array on ``grid.xi`` or a callable of ``xi``."""

    g: Mapping[int, Profile]

    @property
    def j_support(self) -> tuple[int, ...]:
        return tuple(sorted(int(j) for j in self.g))

    def profile(self, j: int, xi: np.ndarray) -> np.ndarray:
        p = self.g.get(j)
        if p is None:
            return np.zeros(np.shape(xi), dtype=complex)
        if callable(p):
            return np.asarray(p(np.asarray(xi, dtype=float)), dtype=complex)
        arr = np.asarray(p, dtype=complex)
        if arr.shape != np.shape(xi):
            raise GridMismatch(f"profile for mode {j} has shape {arr.shape}, expected {np.shape(xi)}")
        return arr


class Operator(enum.Enum):
    LAMBDA_S = "lambda_s"
    LAMBDA_PRIME_YS = "lambda_prime_ys"
    LAMBDA_I_S = "LambdaI_s"
    XI_I_T = "XiI_t"
    LAMBDA_II_S = "LambdaII_s"
    XI_II_T = "XiII_t"
    T_I_TS = "TI_ts"
    T_II_TS = "TII_ts"


@dataclass(frozen=True)
class OperatorTag:
    which: Operator
    t: float | None = None
    s: float | None = None
    y: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "which", Operator(self.which))


# --- symbols ----------------------------------------------------------------------

def log_four_w(params: DomainParams, xi, j) -> np.ndarray:
    """``log(4 ch(pi xi) ch(2a (xi - j/2)))``."""
    xi = np.asarray(xi, dtype=float)
    j = np.asarray(j, dtype=float)
    return 2 * LOG2 + log_cosh(np.pi * xi) + log_cosh(params.weight_scale * (xi - 0.5 * j))


def boundary_unit_vector(params: DomainParams, xi, j) -> np.ndarray:
    """``n_l(xi, j)`` stacked along a leading axis of length 4."""
    xi = np.asarray(xi, dtype=float)
    j = np.asarray(j, dtype=float)
    V, S = component_offsets(params)
    # normalising directly keeps |n| = 1 to rounding even when the exponents
    # reach the hundreds; analytically the norm is 2 sqrt(W)
    e = np.stack([0.5 * j * S[k] - V[k] * xi for k in range(4)])
    u = np.exp(e - e.max(axis=0))
    return u / np.sqrt(np.sum(u * u, axis=0))


def boundary_symbol_matrix(params: DomainParams, xi, j) -> np.ndarray:
    """4x4 symbol of the boundary projector, shape ``(..., 4, 4)``."""
    n = np.moveaxis(boundary_unit_vector(params, xi, j), 0, -1)
    return n[..., :, None] * n[..., None, :]


def interior_symbols(params: DomainParams, xi, j, y: float, s: float) -> np.ndarray:
    """Per-component symbols of ``S_{y,s}``, stacked along a leading axis of length 4."""
    xi = np.asarray(xi, dtype=float)
    j = np.asarray(j, dtype=float)
    V, S = component_offsets(params)
    lw = log_four_w(params, xi, j)
    return np.stack([np.exp(0.5 * j * (s + S[k]) - (y + V[k]) * xi - lw) for k in range(4)])


def _grid_mesh(grid: GridSpec):
    return np.meshgrid(grid.xi, grid.modes, indexing="ij")


def _mode_mask(grid: GridSpec, max_mode: int | None) -> np.ndarray | float:
    if max_mode is None:
        return 1.0
    return (np.abs(grid.modes) <= max_mode)[None, :].astype(float)


# --- operators --------------------------------------------------------------------

def project_interior(params: DomainParams, phi: BoundaryData, y: float, s: float,
                     max_mode: int | None = None) -> SampledField:
    """``S phi`` on the slice ``Im z1 = y``, ``log|z2|^2 = s`` (a field in ``(x, gamma)``).

    ``max_mode`` keeps only the torus modes ``|j| <= max_mode``.
    """
    params.check_interior(y, s)
    g = phi.grid
    XI, J = _grid_mesh(g)
    sym = checked_symbol(interior_symbols(params, XI, J, y, s))
    coeffs = np.sum(sym * boundary_to_frequency(phi), axis=0) * _mode_mask(g, max_mode)
    return to_physical(FrequencyField(g, coeffs))


def project_at_points(params: DomainParams, phi: BoundaryData, z1, s, gamma) -> np.ndarray:
    """``S phi`` at scattered interior points by direct summation over ``(xi, j)``."""
    z1 = np.atleast_1d(np.asarray(z1, dtype=complex))
    s = np.broadcast_to(np.asarray(s, dtype=float), z1.shape)
    gamma = np.broadcast_to(np.asarray(gamma, dtype=float), z1.shape)
    g = phi.grid
    F = boundary_to_frequency(phi)
    XI, J = _grid_mesh(g)
    out = np.empty(z1.shape, dtype=complex)
    for k, (w, sk, gk) in enumerate(zip(z1, s, gamma)):
        params.check_interior(w.imag, sk)
        sym = interior_symbols(params, XI, J, w.imag, sk)
        c = np.sum(sym * F, axis=0)
        phase_x = np.exp(1j * w.real * g.xi)
        phase_g = np.exp(2j * np.pi * g.modes * gk)
        out[k] = (g.dxi / (2 * np.pi)) * (phase_x @ c @ phase_g)
    return out


def boundary_szego_coeffs(params: DomainParams, grid: GridSpec, F: np.ndarray) -> np.ndarray:
    """The boundary projector on stacked coefficients of shape ``(4, Nx, Ngamma)``."""
    XI, J = _grid_mesh(grid)
    n = boundary_unit_vector(params, XI, J)
    dot = np.sum(n * F, axis=0)
    return n * dot[None]


def boundary_szego(params: DomainParams, phi: BoundaryData) -> BoundaryData:
    """Apply the boundary Szegő projector to all four components."""
    g = phi.grid
    return boundary_from_frequency(g, boundary_szego_coeffs(params, g, boundary_to_frequency(phi)))


def _diff_exp(p: float, q: float, u: np.ndarray, lc: np.ndarray) -> np.ndarray:
    """``(exp(-p u) - exp(-q u)) exp(-lc)`` without cancellation for small ``(q-p) u``."""
    small = np.abs((q - p) * u) < 1.0
    with np.errstate(over="ignore"):
        direct = np.exp(-p * u - lc) - np.exp(-q * u - lc)
        series = -np.exp(-p * u - lc) * np.expm1(-(q - p) * u)
    return np.where(small, series, direct)


def _check_t(t):
    if t is None or not (0.0 <= t < HALF_PI):
        raise ParamOutOfRange(f"t must lie in [0, pi/2), got {t!r}")
    return float(t)


def _check_s(params: DomainParams, s, closed: bool = False):
    a = params.half_strip
    ok = s is not None and (0.0 <= s <= a if closed else 0.0 <= s < a)
    if not ok:
        raise ParamOutOfRange(f"s must lie in [0, {a!r}{']' if closed else ')'}, got {s!r}")
    return float(s)


def operator_symbol(params: DomainParams, tag: OperatorTag, xi, j) -> np.ndarray:
    """Symbol of a factor operator at ``(xi, j)``.

    ``lambda_s``, ``Lambda^I_s`` and ``Lambda^II_s`` depend on ``xi - j/2``;
    the others on ``xi`` alone. The constant ``1/8`` of the ``T`` symbols is
    carried by the ``Lambda`` factors so that ``T = Lambda o Xi`` holds as
    written.
    """
    xi = np.asarray(xi, dtype=float)
    j = np.asarray(j, dtype=float)
    a = params.half_strip
    w = params.weight_scale
    u = xi - 0.5 * j
    lc_pi = log_cosh(np.pi * xi)
    lc_w = log_cosh(w * u)
    op = tag.which
    if op is Operator.LAMBDA_S:
        s = _check_s(params, tag.s, closed=True)
        return np.exp(-(a + s) * u - lc_w - 2 * LOG2)
    if op is Operator.LAMBDA_PRIME_YS:
        s = _check_s(params, tag.s)
        if tag.y is None:
            raise ParamOutOfRange("y is required")
        y = float(tag.y)
        if not abs(y - s) < HALF_PI:
            raise ParamOutOfRange(f"need |y - s| < pi/2, got y={y!r}, s={s!r}")
        return np.exp(-(HALF_PI - s + y) * xi - lc_pi)
    if op is Operator.XI_I_T:
        t = _check_t(tag.t)
        return _diff_exp(np.pi, HALF_PI + t, xi, lc_pi)
    if op is Operator.XI_II_T:
        t = _check_t(tag.t)
        return np.exp(-np.pi * xi - lc_pi) + np.exp(-(HALF_PI + t) * xi - lc_pi)
    if op is Operator.LAMBDA_I_S:
        s = _check_s(params, tag.s, closed=True)
        return (np.exp(-w * u - lc_w) + np.exp(-(a + s) * u - lc_w)) / 8.0
    if op is Operator.LAMBDA_II_S:
        s = _check_s(params, tag.s, closed=True)
        return _diff_exp(w, a + s, u, lc_w) / 8.0
    if op is Operator.T_I_TS:
        return (operator_symbol(params, OperatorTag(Operator.LAMBDA_I_S, s=tag.s), xi, j)
                * operator_symbol(params, OperatorTag(Operator.XI_I_T, t=tag.t), xi, j))
    if op is Operator.T_II_TS:
        return (operator_symbol(params, OperatorTag(Operator.LAMBDA_II_S, s=tag.s), xi, j)
                * operator_symbol(params, OperatorTag(Operator.XI_II_T, t=tag.t), xi, j))
    raise ValueError(f"unknown operator {op!r}")


def apply_symbol_field(field: SampledField, symbol: np.ndarray) -> SampledField:
    F = to_frequency(field)
    return to_physical(FrequencyField(field.grid, checked_symbol(symbol) * F.coeffs))


def factor_apply(params: DomainParams, tag: OperatorTag, phi: BoundaryData | SampledField) -> SampledField:
    """Apply a factor operator to the E1 component (or to a bare field)."""
    field = phi.phi1 if isinstance(phi, BoundaryData) else phi
    XI, J = _grid_mesh(field.grid)
    return apply_symbol_field(field, operator_symbol(params, tag, XI, J))


def mode_extract(field: SampledField, j: int) -> np.ndarray:
    """The ``j``-th torus coefficient of ``field`` as a profile in ``x``."""
    g = field.grid
    col = g.mode_index(j)
    c = sfft.fftshift(sfft.fft(field.values, axis=1, workers=fft_workers()), axes=1) / g.Ngamma
    return c[:, col]


# --- Paley-Wiener synthesis ---------------------------------------------------------

def pw_worm_synthesize(params: DomainParams, g: ModeCoefficients, grid: GridSpec) -> BoundaryData:
    """Boundary values of ``F = sum_j z2^j F^{-1}[e^{-Im z1 (.)} g_j]``.

    Component ``l`` receives the coefficient ``exp(j S_l/2 - V_l xi) g_j(xi)``.
    """
    V, S = component_offsets(params)
    xi = grid.xi
    coeffs = np.zeros((4,) + grid.shape, dtype=complex)
    edge = max(1, grid.Nx // 32)
    for j in g.j_support:
        col = grid.mode_index(j)
        prof = g.profile(j, xi)
        check = np.abs(weighted(prof, params.beta * np.abs(xi)))
        peak = check.max(initial=0.0)
        if peak > 0 and (not np.isfinite(peak)
                         or max(check[:edge].max(), check[-edge:].max()) > PW_DECAY * peak):
            raise PWConditionViolated(
                f"exp(beta |xi|) g_{j} has not decayed at the ends of the frequency grid"
            )
        for k in range(4):
            coeffs[k, :, col] = weighted(prof, 0.5 * j * S[k] - V[k] * xi)
    return boundary_from_frequency(grid, coeffs)


def pw_interior_field(params: DomainParams, g: ModeCoefficients, grid: GridSpec,
                      y: float, s: float) -> SampledField:
    """``sum_j e^{j s/2} e^{2 pi i j gamma} F^{-1}[e^{-y (.)} g_j]`` on the grid."""
    params.check_interior(y, s)
    coeffs = np.zeros(grid.shape, dtype=complex)
    for j in g.j_support:
        coeffs[:, grid.mode_index(j)] = weighted(g.profile(j, grid.xi), 0.5 * j * s - y * grid.xi)
    return to_physical(FrequencyField(grid, coeffs))


def pw_weighted_norm_sq(params: DomainParams, g: ModeCoefficients, grid: GridSpec) -> float:
    """``(2/pi) sum_j int |g_j|^2 W`` by the Riemann sum on the grid."""
    total = 0.0
    for j in g.j_support:
        prof = g.profile(j, grid.xi)
        lw = log_four_w(params, grid.xi, j) - 2 * LOG2
        total += float(np.sum(np.abs(weighted(prof * np.conj(prof), lw))) * grid.dxi)
    return 2.0 / math.pi * total


# --- density mollifier -----------------------------------------------------------------

def mollifier_values(params: DomainParams, eps: float, x: np.ndarray, component: Component) -> np.ndarray:
    """``G^eps(x + i V_l) = 1/(1 + eps (2 beta + i z1))``."""
    z1 = np.asarray(x, dtype=float) + 1j * Component(component).im_z1(params)
    return 1.0 / (1.0 + eps * (2.0 * params.beta + 1j * z1))


def mollify(params: DomainParams, phi: BoundaryData, eps: float) -> BoundaryData:
    if not eps > 0:
        raise ParamOutOfRange(f"eps must be positive, got {eps!r}")
    x = phi.grid.x
    out = [
        SampledField(phi.grid, f.values * mollifier_values(params, eps, x, Component(k))[:, None])
        for k, f in enumerate(phi.components)
    ]
    return BoundaryData(*out)


__all__ = [
    "BoundaryData",
    "ModeCoefficients",
    "Operator",
    "OperatorTag",
    "apply_symbol_field",
    "boundary_from_frequency",
    "boundary_symbol_matrix",
    "boundary_szego",
    "boundary_to_frequency",
    "boundary_unit_vector",
    "factor_apply",
    "interior_symbols",
    "log_four_w",
    "mode_extract",
    "mollifier_values",
    "mollify",
    "operator_symbol",
    "project_at_points",
    "project_interior",
    "pw_interior_field",
    "pw_weighted_norm_sq",
    "pw_worm_synthesize",
]
