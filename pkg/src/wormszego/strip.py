"""Hardy space of the symmetric strip ``S_b = {|Im z| < b}``.

The projection and boundary projector act on the pair of boundary functions
``(phi_plus, phi_minus)`` through the symbols

    exp(-(Im z + b) xi) / (2 ch(2 b xi)),   exp(-(Im z - b) xi) / (2 ch(2 b xi)).

The reproducing kernel is

    K(w, z) = 1/(4 pi) int exp(i (w - conj z) xi) / ch(2 b xi) dxi
            = sech(pi (w - conj z) / (4 b)) / (8 b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quadrature
from .errors import EpsOutOfRange, ParamOutOfRange, QuadratureNoConvergence, TailNotDecayed
from .grid import GridSpec, x_forward, x_inverse
from .special import log_cosh, weighted

#: decay rate below which the kernel integrand is treated as non-integrable
MIN_DECAY = 1e-3


@dataclass(frozen=True)
class StripParams:
    beta_strip: float

    def __post_init__(self):
        if not (self.beta_strip > 0 and math.isfinite(self.beta_strip)):
            raise ParamOutOfRange(f"strip half-width must be positive, got {self.beta_strip!r}")


@dataclass(frozen=True, eq=False)
class StripBoundaryPair:
    """Samples of ``phi_plus`` (upper edge) and ``phi_minus`` (lower edge)."""

    plus: np.ndarray
    minus: np.ndarray
    grid: GridSpec

    def __post_init__(self):
        p = np.asarray(self.plus, dtype=complex)
        m = np.asarray(self.minus, dtype=complex)
        if p.shape != (self.grid.Nx,) or m.shape != (self.grid.Nx,):
            raise ValueError("boundary samples must be 1-D arrays of length Nx")
        object.__setattr__(self, "plus", p)
        object.__setattr__(self, "minus", m)


def _inverse_at(coeffs: np.ndarray, grid: GridSpec, z) -> np.ndarray:
    """``(1/2pi) sum_k c_k exp(i z xi_k) dxi`` for arbitrary complex ``z``.

    ``coeffs`` may be 1-D (shared by every ``z``) or 2-D with one row per ``z``.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    xi = grid.xi
    phase = np.exp(1j * np.outer(z.real, xi))
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim == 1:
        c = np.broadcast_to(c, phase.shape)
    return (grid.dxi / (2.0 * np.pi)) * np.sum(c * phase, axis=-1)


def pw_extend(f0_hat: np.ndarray, z, strip: StripParams, grid: GridSpec):
    """Holomorphic extension ``F(z) = (1/2pi) int f0^(xi) exp(i z xi) dxi``.

    ``f0_hat`` holds the transform of the real-line restriction on
    ``grid.xi``. The weighted profile ``exp(b|xi|) f0^`` must have decayed by
    the ends of the grid.
    """
    f0_hat = np.asarray(f0_hat, dtype=complex)
    b = strip.beta_strip
    xi = grid.xi
    wprof = np.abs(weighted(f0_hat, b * np.abs(xi)))
    peak = wprof.max(initial=0.0)
    edge = max(1, grid.Nx // 32)
    if peak > 0 and (not np.isfinite(peak)
                     or max(wprof[:edge].max(), wprof[-edge:].max()) > 1e-12 * peak):
        raise TailNotDecayed("exp(b|xi|) f0^ has not decayed at the ends of the grid")
    z_arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(z_arr.imag) >= b):
        raise ParamOutOfRange("evaluation point outside the strip")
    zz = np.atleast_1d(z_arr)
    # exp(i z xi) = exp(i Re z xi) exp(-Im z xi): the weight is applied per point
    weights = weighted(f0_hat[None, :], -np.outer(zz.imag, xi))
    out = _inverse_at(weights, grid, zz.real)
    return out[0] if z_arr.ndim == 0 else out.reshape(z_arr.shape)


def _strip_symbols(b: float, xi: np.ndarray, y) -> tuple[np.ndarray, np.ndarray]:
    """``exp(-(y +/- b) xi)/(2 ch(2 b xi))`` evaluated in log form."""
    y = np.asarray(y, dtype=float)[..., None]
    lc = log_cosh(2.0 * b * xi) + math.log(2.0)
    up = np.exp(-(y + b) * xi - lc)
    down = np.exp(-(y - b) * xi - lc)
    return up, down


def strip_project(phi: StripBoundaryPair, z, strip: StripParams):
    """Evaluate ``S phi`` at interior points ``z`` of the strip."""
    b = strip.beta_strip
    z_arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(z_arr.imag) >= b):
        raise ParamOutOfRange("evaluation point outside the strip")
    zz = np.atleast_1d(z_arr)
    g = phi.grid
    ph = x_forward(phi.plus, g)
    mh = x_forward(phi.minus, g)
    up, down = _strip_symbols(b, g.xi, zz.imag)
    out = _inverse_at(up * ph[None, :] + down * mh[None, :], g, zz.real)
    return out[0] if z_arr.ndim == 0 else out.reshape(z_arr.shape)


def strip_symbol_matrix(strip: StripParams, xi) -> np.ndarray:
    """2x2 symbol of the boundary projector at each ``xi`` (shape ``(..., 2, 2)``)."""
    b = strip.beta_strip
    xi = np.asarray(xi, dtype=float)
    lc = log_cosh(2.0 * b * xi) + math.log(2.0)
    m = np.empty(xi.shape + (2, 2))
    m[..., 0, 0] = np.exp(-2.0 * b * xi - lc)
    m[..., 0, 1] = np.exp(-lc)
    m[..., 1, 0] = m[..., 0, 1]
    m[..., 1, 1] = np.exp(2.0 * b * xi - lc)
    return m


def strip_boundary_project(phi: StripBoundaryPair, strip: StripParams) -> StripBoundaryPair:
    g = phi.grid
    ph = x_forward(phi.plus, g)
    mh = x_forward(phi.minus, g)
    m = strip_symbol_matrix(strip, g.xi)
    plus = m[:, 0, 0] * ph + m[:, 0, 1] * mh
    minus = m[:, 1, 0] * ph + m[:, 1, 1] * mh
    return StripBoundaryPair(x_inverse(plus, g), x_inverse(minus, g), g)


def strip_boundary_values(f0_hat: np.ndarray, strip: StripParams, grid: GridSpec) -> StripBoundaryPair:
    """Boundary pair ``F^{-1}[exp(-/+ b xi) f0^]`` of the Paley-Wiener extension."""
    b = strip.beta_strip
    f0_hat = np.asarray(f0_hat, dtype=complex)
    return StripBoundaryPair(
        x_inverse(weighted(f0_hat, -b * grid.xi), grid),
        x_inverse(weighted(f0_hat, b * grid.xi), grid),
        grid,
    )


def strip_slice(phi: StripBoundaryPair, y: float, strip: StripParams) -> np.ndarray:
    """``S phi(x + i y)`` on the whole x-grid, via the FFT."""
    b = strip.beta_strip
    if abs(y) >= b:
        raise ParamOutOfRange("slice outside the strip")
    g = phi.grid
    up, down = _strip_symbols(b, g.xi, y)
    return x_inverse(up[0] * x_forward(phi.plus, g) + down[0] * x_forward(phi.minus, g), g)


def strip_kernel(strip: StripParams, w: complex, z: complex, mode: str = "integral",
                 tol: float = 1e-12) -> complex:
    """Reproducing kernel ``K(w, z)`` of ``H^2(S_b)``.

    ``mode="integral"`` integrates ``exp(i tau xi)/ch(2 b xi)/(4 pi)`` with
    ``tau = w - conj z``; ``mode="closed_form"`` returns
    ``sech(pi tau/(4b))/(8b)``.
    """
    b = strip.beta_strip
    tau = complex(w) - complex(z).conjugate()
    if mode == "closed_form":
        return complex(1.0 / (8.0 * b * np.cosh(np.pi * tau / (4.0 * b))))
    if mode != "integral":
        raise ValueError(f"unknown mode {mode!r}")
    rate = 2.0 * b - abs(tau.imag)
    if rate < MIN_DECAY:
        raise QuadratureNoConvergence(
            f"integrand decays like exp(-{rate:.2e}|xi|): Im(w - conj z) is too close to +/-2b"
        )
    # |integrand| <= exp(-rate |xi|)/(2 pi); cut where the tail is below 1e-17
    cut = (math.log(1.0 / (2.0 * math.pi * rate)) + 17.0 * math.log(10.0)) / rate
    cut = max(cut, 1.0)

    def f(xi):
        return np.exp(1j * tau.real * xi - tau.imag * xi - log_cosh(2.0 * b * xi)) / (4.0 * np.pi)

    val, _ = quadrature.integrate(f, -cut, cut, abs_tol=tol, breakpoints=(0.0,),
                                  initial_intervals=8)
    return complex(val)


def singular_kernel_pair(eps: float, y, strip: StripParams):
    """The pair ``(K_eps(y), Ktilde_eps(y))`` of the boundary-limit splitting."""
    b = strip.beta_strip
    if not (0.0 < eps < b):
        raise EpsOutOfRange(f"eps must lie in (0, {b}), got {eps!r}")
    y = np.asarray(y, dtype=float)
    q = np.pi / (4.0 * b)
    se, ce = math.sin(q * eps), math.cos(q * eps)
    shy = np.sinh(q * y)
    den = shy**2 + se**2
    k = np.cosh(q * y) * se / den / (2.0 * b)
    kt = shy * ce / den / (2.0 * b)
    return k, kt


def singular_kernel_mass(eps: float, strip: StripParams, tol: float = 1e-13) -> float:
    """``int_R K_eps(y) dy`` by adaptive quadrature."""
    b = strip.beta_strip
    q = np.pi / (4.0 * b)
    se = math.sin(q * eps)
    # tail beyond Y is at most (2 se / pi) / sh(q Y)
    Y = math.asinh(2.0 * se / (math.pi * 1e-16)) / q
    bps = [0.0]
    for k in range(12):
        c = eps * 4.0**k
        if c < Y:
            bps += [c, -c]
    val, _ = quadrature.integrate(lambda t: singular_kernel_pair(eps, t, strip)[0], -Y, Y,
                                  abs_tol=tol, breakpoints=bps)
    return float(val)
