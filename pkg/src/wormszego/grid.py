"""Sampled functions on R x T and the mixed Fourier transform.

Convention: the transform in ``x`` carries no prefactor,
``f^(xi) = int f(x) exp(-i x xi) dx``, its inverse carries ``1/(2 pi)``, and
the torus coefficients are plain means ``int_0^1 f exp(-2 pi i j gamma)``.

Physical samples live at ``x_m = -L + m 2L/Nx`` and ``gamma_n = n/Ngamma``
with ``Ngamma = 2 Nj + 1``. Frequency arrays are stored with ``xi``
ascending (``xi_k = pi k / L`` for ``k = -Nx/2 .. Nx/2 - 1``) along axis 0 and
``j = -Nj .. Nj`` along axis 1.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
import scipy.fft as sfft

from .errors import GridMismatch, ModeOutOfGrid, NonFinite, SymbolOverflow

SYMBOL_LIMIT = 1e300


def fft_workers() -> int:
    env = os.environ.get("WORM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class GridSpec:
    L: float
    Nx: int
    Nj: int = 0

    def __post_init__(self):
        if not (self.L > 0 and np.isfinite(self.L)):
            raise ValueError(f"L must be positive, got {self.L!r}")
        nx = int(self.Nx)
        if nx < 8 or nx & (nx - 1):
            raise ValueError(f"Nx must be a power of two >= 8, got {self.Nx!r}")
        if int(self.Nj) < 0:
            raise ValueError(f"Nj must be >= 0, got {self.Nj!r}")

    @property
    def Ngamma(self) -> int:
        return 2 * self.Nj + 1

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.Nx

    @property
    def dxi(self) -> float:
        return np.pi / self.L

    @property
    def x(self) -> np.ndarray:
        return -self.L + self.dx * np.arange(self.Nx)

    @property
    def gamma(self) -> np.ndarray:
        return np.arange(self.Ngamma) / self.Ngamma

    @property
    def xi(self) -> np.ndarray:
        return self.dxi * np.arange(-self.Nx // 2, self.Nx // 2)

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.Nj, self.Nj + 1)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.Nx, self.Ngamma)

    def mode_index(self, j: int) -> int:
        if abs(j) > self.Nj:
            raise ModeOutOfGrid(f"mode {j} outside |j| <= {self.Nj}")
        return j + self.Nj

    def zeros(self) -> "SampledField":
        return SampledField(self, np.zeros(self.shape, dtype=complex))


@dataclass(frozen=True, eq=False)
class SampledField:
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != self.grid.shape:
            raise GridMismatch(f"values of shape {v.shape} do not match grid {self.grid.shape}")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid: GridSpec, f: Callable[[np.ndarray, np.ndarray], np.ndarray]):
        X, G = np.meshgrid(grid.x, grid.gamma, indexing="ij")
        return cls(grid, np.broadcast_to(f(X, G), grid.shape))

    def __add__(self, other: "SampledField") -> "SampledField":
        _same_grid(self.grid, other.grid)
        return SampledField(self.grid, self.values + other.values)

    def __sub__(self, other: "SampledField") -> "SampledField":
        _same_grid(self.grid, other.grid)
        return SampledField(self.grid, self.values - other.values)

    def __mul__(self, c) -> "SampledField":
        return SampledField(self.grid, self.values * c)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class FrequencyField:
    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != self.grid.shape:
            raise GridMismatch(f"coefficients of shape {c.shape} do not match grid {self.grid.shape}")
        object.__setattr__(self, "coeffs", c)

    def mode(self, j: int) -> np.ndarray:
        return self.coeffs[:, self.grid.mode_index(j)]

    def __add__(self, other: "FrequencyField") -> "FrequencyField":
        _same_grid(self.grid, other.grid)
        return FrequencyField(self.grid, self.coeffs + other.coeffs)

    def __mul__(self, c) -> "FrequencyField":
        return FrequencyField(self.grid, self.coeffs * c)

    __rmul__ = __mul__


def _same_grid(a: GridSpec, b: GridSpec) -> None:
    if a != b:
        raise GridMismatch(f"grids differ: {a} vs {b}")


# --- one-dimensional transforms along axis 0 -------------------------------

def _alternating(n: int) -> np.ndarray:
    # exp(i L xi_k) = (-1)^k for the shifted frequency index k
    return np.where(np.arange(-n // 2, n // 2) % 2 == 0, 1.0, -1.0)


def x_forward(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Transform samples along axis 0 to ``xi``-ascending coefficients."""
    v = np.asarray(values, dtype=complex)
    c = sfft.fftshift(sfft.fft(v, axis=0, workers=fft_workers()), axes=0)
    sign = _alternating(grid.Nx).reshape((-1,) + (1,) * (v.ndim - 1))
    return grid.dx * sign * c


def x_inverse(coeffs: np.ndarray, grid: GridSpec) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    sign = _alternating(grid.Nx).reshape((-1,) + (1,) * (c.ndim - 1))
    v = sfft.ifft(sfft.ifftshift(sign * c, axes=0), axis=0, workers=fft_workers())
    return (grid.Nx / (2.0 * grid.L)) * v


# --- mixed transform ----------------------------------------------------------

def to_frequency(f: SampledField) -> FrequencyField:
    g = f.grid
    c = x_forward(f.values, g)
    c = sfft.fftshift(sfft.fft(c, axis=1, workers=fft_workers()), axes=1) / g.Ngamma
    return FrequencyField(g, c)


def to_physical(F: FrequencyField) -> SampledField:
    g = F.grid
    c = sfft.ifft(sfft.ifftshift(F.coeffs, axes=1), axis=1, workers=fft_workers()) * g.Ngamma
    return SampledField(g, x_inverse(c, g))


@dataclass(frozen=True)
class MultiplierSpec:
    """A symbol ``m(xi, j)``.

    With ``shift_half_j`` the callable takes a single argument ``u`` and is
    evaluated at ``u = xi - j/2``; otherwise it is called as ``m(xi, j)``
    with broadcastable arrays.
    """

    symbol: Callable
    shift_half_j: bool = False

    def evaluate(self, xi: np.ndarray, j: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        j = np.asarray(j)
        if self.shift_half_j:
            return np.asarray(self.symbol(xi - 0.5 * j), dtype=complex)
        return np.asarray(self.symbol(xi, j), dtype=complex)

    def on_grid(self, grid: GridSpec) -> np.ndarray:
        XI, J = np.meshgrid(grid.xi, grid.modes, indexing="ij")
        return np.broadcast_to(self.evaluate(XI, J), grid.shape)


def checked_symbol(values: np.ndarray) -> np.ndarray:
    v = np.asarray(values)
    if not np.all(np.isfinite(v)) or np.max(np.abs(v), initial=0.0) > SYMBOL_LIMIT:
        raise SymbolOverflow("symbol is non-finite or exceeds 1e300 on the grid")
    return v


def apply_multiplier(F: FrequencyField, m: MultiplierSpec | np.ndarray) -> FrequencyField:
    sym = m.on_grid(F.grid) if isinstance(m, MultiplierSpec) else np.asarray(m)
    return FrequencyField(F.grid, checked_symbol(sym) * F.coeffs)


def apply_physical(f: SampledField, m: MultiplierSpec | np.ndarray) -> SampledField:
    return to_physical(apply_multiplier(to_frequency(f), m))


def mihlin_bound(m: MultiplierSpec, xi_range: tuple[float, float], j: int = 0,
                 n: int = 4001) -> float:
    """``max |m(xi)| + |xi m'(xi)|`` over ``n`` points of ``xi_range``.

    The derivative is a central difference with step ``1e-5 (1 + |xi|)``.
    For ``shift_half_j`` symbols the one-variable profile is probed directly.
    """
    lo, hi = xi_range
    xi = np.linspace(lo, hi, n)
    h = 1e-5 * (1.0 + np.abs(xi))

    def prof(u):
        if m.shift_half_j:
            return np.asarray(m.symbol(u), dtype=complex)
        return np.asarray(m.symbol(u, np.full_like(u, j)), dtype=complex)

    with np.errstate(over="ignore", invalid="ignore"):
        val = prof(xi)
        der = (prof(xi + h) - prof(xi - h)) / (2.0 * h)
        bound = np.abs(val) + np.abs(xi * der)
    if not np.all(np.isfinite(bound)):
        raise NonFinite("symbol or its derivative is not finite on the requested range")
    return float(bound.max())


# --- serialisation ------------------------------------------------------------

def _fmt(v: float) -> str:
    return repr(float(v))


def write_field_csv(path: str | os.PathLike, f: SampledField) -> None:
    X, G = np.meshgrid(f.grid.x, f.grid.gamma, indexing="ij")
    with open(path, "w") as fh:
        fh.write("x,gamma,re,im\n")
        for x, g, v in zip(X.ravel(), G.ravel(), f.values.ravel()):
            fh.write(f"{_fmt(x)},{_fmt(g)},{_fmt(v.real)},{_fmt(v.imag)}\n")


def write_frequency_csv(path: str | os.PathLike, F: FrequencyField) -> None:
    XI, J = np.meshgrid(F.grid.xi, F.grid.modes, indexing="ij")
    with open(path, "w") as fh:
        fh.write("xi,j,re,im\n")
        for xi, j, v in zip(XI.ravel(), J.ravel(), F.coeffs.ravel()):
            fh.write(f"{_fmt(xi)},{int(j)},{_fmt(v.real)},{_fmt(v.imag)}\n")


def _read_csv(path, header):
    with open(path) as fh:
        first = fh.readline().strip()
        if first.replace(" ", "") != header:
            raise ValueError(f"{path}: expected header {header!r}, got {first!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return data


def read_field_csv(path: str | os.PathLike, grid: GridSpec) -> SampledField:
    """Read ``x,gamma,re,im`` rows. Rows must cover the grid; order is free."""
    data = _read_csv(path, "x,gamma,re,im")
    m = np.rint((data[:, 0] + grid.L) / grid.dx).astype(int)
    n = np.rint(data[:, 1] * grid.Ngamma).astype(int) % grid.Ngamma
    if data.shape[0] != grid.Nx * grid.Ngamma or m.min() < 0 or m.max() >= grid.Nx:
        raise GridMismatch(f"{path}: rows do not match grid {grid}")
    v = np.zeros(grid.shape, dtype=complex)
    v[m, n] = data[:, 2] + 1j * data[:, 3]
    return SampledField(grid, v)


def read_frequency_csv(path: str | os.PathLike, grid: GridSpec) -> FrequencyField:
    data = _read_csv(path, "xi,j,re,im")
    k = np.rint(data[:, 0] / grid.dxi).astype(int) + grid.Nx // 2
    j = np.rint(data[:, 1]).astype(int)
    if k.min() < 0 or k.max() >= grid.Nx or np.abs(j).max() > grid.Nj:
        raise GridMismatch(f"{path}: rows do not match grid {grid}")
    c = np.zeros(grid.shape, dtype=complex)
    c[k, j + grid.Nj] = data[:, 2] + 1j * data[:, 3]
    return FrequencyField(grid, c)


def write_binary(path: str | os.PathLike, values: np.ndarray) -> None:
    """Little-endian float64 (re, im interleaved) after an 8-byte header.

    The header holds the two array dimensions as little-endian uint32.
    """
    v = np.asarray(values, dtype=complex)
    if v.ndim == 1:
        v = v[:, None]
    rows, cols = v.shape
    with open(path, "wb") as fh:
        fh.write(struct.pack("<II", rows, cols))
        fh.write(np.ascontiguousarray(v).view("<f8").astype("<f8").tobytes())


def read_binary(path: str | os.PathLike) -> np.ndarray:
    raw = Path(path).read_bytes()
    rows, cols = struct.unpack("<II", raw[:8])
    flat = np.frombuffer(raw[8:], dtype="<f8")
    if flat.size != 2 * rows * cols:
        raise ValueError(f"{path}: payload size {flat.size} does not match header {rows}x{cols}")
    return flat.view(np.complex128).reshape(rows, cols).copy()
