"""Mode kernels ``k_j`` and the Szegő kernel series of D'_beta.

The j-th mode kernel is

    k_j(delta) = 1/(8 pi) int exp(i delta xi) / (ch(pi xi) ch(2a (xi - j/2))) dxi,

``a = beta - pi/2``, evaluated at ``delta = w1 - conj(zeta1)``. The full kernel
pairs an interior point ``w`` with a boundary point ``zeta``:

    K(w, zeta) = sum_j exp(j (s_w + s_zeta)/2) exp(2 pi i j (gamma_w - gamma_zeta)) k_j(delta).

Tail certificates
-----------------
With ``c = Im delta`` and ``sigma = s_w + s_zeta`` the bound
``1/(ch u ch v) <= 4 exp(-|u| - |v|)`` splits the integral at 0 and ``j/2``.
For ``j > 0``

    |term_j| <= (1/2pi) [ r1^j/(2 beta - c) + (j/2)(r1^j + r2^j) + r2^j/(c + 2 beta) ]

with ``r1 = exp(sigma/2 - a)`` and ``r2 = exp((sigma - c - pi)/2)``; negative
``j`` are handled by the reflection ``(j, sigma, c) -> (-j, -sigma, -c)``.
Summing the geometric series beyond ``J`` gives a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrature
from .domain import HALF_PI, BoundaryPoint, Component, DomainParams, InteriorPoint
from .errors import BoxNotCompact, DecayGuardViolated, TruncationBudgetExceeded
from .special import log_cosh

#: how close ``|Im delta|`` may come to ``2 beta``
DECAY_GUARD = 1e-3
#: largest truncation index ``szego_kernel`` will accept
MAX_MODES = 10_000
#: relative accuracy of one mode integral, measured against its majorant
MAJORANT_RTOL = 1e-13


@dataclass(frozen=True)
class ModeKernelQuery:
    j: int
    z1: complex
    z2_conj_arg: complex

    @property
    def delta(self) -> complex:
        return complex(self.z1) - complex(self.z2_conj_arg).conjugate()


@dataclass(frozen=True)
class Box:
    """Ranges of ``Im z1`` and ``log|z2|^2`` for the interior argument."""

    y_range: tuple[float, float]
    s_range: tuple[float, float]

    @classmethod
    def symmetric(cls, max_im_z1: float, max_log_mod: float) -> "Box":
        return cls((-abs(max_im_z1), abs(max_im_z1)), (-abs(max_log_mod), abs(max_log_mod)))

    @classmethod
    def point(cls, y: float, s: float) -> "Box":
        return cls((y, y), (s, s))


@dataclass(frozen=True)
class KernelTerm:
    j: int
    kj: complex
    partial_sum: complex
    tail_bound: float


@dataclass(frozen=True)
class KernelSeriesResult:
    value: complex
    j_min: int
    j_max: int
    tail_bound: float
    quadrature_error: float = 0.0
    terms: tuple[KernelTerm, ...] = field(default=(), repr=False)


def _log_majorant(params: DomainParams, j: int, c: float) -> float:
    """log of ``int exp(-c xi - pi|xi| - 2a|xi - j/2|) dxi`` (exact three-piece value)."""
    a = params.half_strip
    b = params.beta
    if j < 0:
        j, c = -j, -c
    # left piece, right piece, and the middle piece on [0, j/2]
    logs = [-a * j - math.log(2 * b - c), -(c + math.pi) * j / 2 - math.log(c + 2 * b)]
    if j > 0:
        x1, x2 = -a * j, -(c + math.pi) * j / 2
        hi, lo = max(x1, x2), min(x1, x2)
        gap = hi - lo
        if gap < 1e-12:
            logs.append(hi + math.log(j / 2))
        else:
            # (e^{hi} - e^{lo}) / |alpha| with |alpha| = gap / (j/2)
            logs.append(hi + math.log(-math.expm1(-gap)) - math.log(gap / (j / 2)))
    m = max(logs)
    return m + math.log(sum(math.exp(v - m) for v in logs))


def kj_eval_with_error(params: DomainParams, j: int, delta: complex,
                       tol: float | None = None) -> tuple[complex, float]:
    """``k_j(delta)`` and the quadrature error estimate.

    The error target is ``min(1e-12, 1e-13 * majorant)`` absolute or
    ``1e-13`` relative to the value, whichever is looser.
    """
    j = int(j)
    delta = complex(delta)
    b = params.beta
    a = params.half_strip
    c = delta.imag
    if abs(c) > 2 * b - DECAY_GUARD:
        raise DecayGuardViolated(
            f"|Im delta| = {abs(c)!r} exceeds 2*beta - {DECAY_GUARD} = {2 * b - DECAY_GUARD!r}"
        )
    log_maj = _log_majorant(params, j, c) - math.log(2 * math.pi)
    maj = math.exp(log_maj)
    if tol is None:
        tol = min(1e-12, MAJORANT_RTOL * maj)
        tol = max(tol, 1e-300)
    # tails beyond the kinks decay like exp(-(2 beta -/+ c)|xi|); drop them below tol/1e3
    target = math.log(tol * 1e-3)
    lo_k, hi_k = min(0.0, j / 2), max(0.0, j / 2)
    left = (target + a * j + math.log(2 * b - c) + math.log(2 * math.pi)) / (2 * b - c)
    right = (a * j - math.log(c + 2 * b) - math.log(2 * math.pi) - target) / (c + 2 * b)
    left = min(left, lo_k - 1.0)
    right = max(right, hi_k + 1.0)
    re, im = delta.real, c
    shift = 0.5 * j

    def f(xi):
        return np.exp(1j * re * xi - im * xi - log_cosh(np.pi * xi)
                      - log_cosh(2 * a * (xi - shift))) / (8 * np.pi)

    bps = sorted({0.0, shift})
    val, err = quadrature.integrate(f, left, right, abs_tol=tol, rel_tol=MAJORANT_RTOL,
                                    breakpoints=bps, initial_intervals=8)
    return complex(val), err


def kj_eval(params: DomainParams, j: int, delta: complex) -> complex:
    """The mode kernel ``k_j`` at ``delta = z1 - conj(z2)``."""
    return kj_eval_with_error(params, j, delta)[0]


def _ratios(params: DomainParams, sigma_range, c_range):
    """Worst-case ratios over the box, for positive and negative modes."""
    a, b = params.half_strip, params.beta
    s_lo, s_hi = sigma_range
    c_lo, c_hi = c_range
    pos = (
        math.exp(s_hi / 2 - a),
        math.exp((s_hi - c_lo - math.pi) / 2),
        2 * b - c_hi,
        c_lo + 2 * b,
    )
    neg = (
        math.exp(-s_lo / 2 - a),
        math.exp((-s_lo + c_hi - math.pi) / 2),
        2 * b + c_lo,
        2 * b - c_hi,
    )
    return pos, neg


def _half_tail(r1: float, r2: float, d1: float, d2: float, J: int) -> float:
    """``sum_{j > J}`` of the one-sided majorant."""
    n = J + 1
    total = 0.0
    for r, d in ((r1, d1), (r2, d2)):
        geo = r**n / (1 - r)
        # sum_{j>=n} j r^j
        lin = r**n * (n - (n - 1) * r) / (1 - r) ** 2
        total += geo / d + 0.5 * lin
    return total / (2 * math.pi)


def kernel_tail_bound(params: DomainParams, box: Box, component: Component, j_range: int) -> float:
    """Certified bound on ``sum_{|j| > j_range} |term_j|`` uniformly over ``box``.

    Raises ``BoxNotCompact`` if any geometric ratio reaches 1 on the box or the
    mode integrals stop converging (``|Im delta| >= 2 beta``).
    """
    if j_range < 0:
        raise ValueError("j_range must be non-negative")
    comp = Component(component)
    V, S = comp.im_z1(params), comp.log_mod(params)
    y_lo, y_hi = sorted(box.y_range)
    s_lo, s_hi = sorted(box.s_range)
    pos, neg = _ratios(params, (s_lo + S, s_hi + S), (y_lo + V, y_hi + V))
    for r1, r2, d1, d2 in (pos, neg):
        if not (r1 < 1 and r2 < 1 and d1 > 0 and d2 > 0):
            raise BoxNotCompact(
                f"box y in {box.y_range}, s in {box.s_range} is not compactly inside D'_beta "
                f"for component {comp.name}"
            )
    return _half_tail(*pos, j_range) + _half_tail(*neg, j_range)


def _mode_order(J: int):
    yield 0
    for m in range(1, J + 1):
        yield -m
        yield m


def szego_kernel(params: DomainParams, w: InteriorPoint, zeta: BoundaryPoint,
                 tol: float = 1e-10, keep_terms: bool = False) -> KernelSeriesResult:
    """Sum the Szegő kernel series to a certified accuracy ``tol``.

    The truncation index is the smallest ``J`` whose tail certificate is at
    most ``tol``. ``tail_bound`` in the result adds the quadrature error
    estimates of the retained modes to that certificate.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    w.validate(params)
    y, s = complex(w.z1).imag, float(w.s)
    box = Box.point(y, s)
    comp = Component(zeta.component)
    J = 0
    bound = kernel_tail_bound(params, box, comp, 0)
    while bound > tol:
        J += 1
        if J > MAX_MODES:
            raise TruncationBudgetExceeded(
                f"more than {MAX_MODES} modes needed for tol = {tol!r}"
            )
        bound = kernel_tail_bound(params, box, comp, J)
    z1 = zeta.z1(params)
    delta = complex(w.z1) - z1.conjugate()
    sigma = s + zeta.s(params)
    dgamma = float(w.gamma) - float(zeta.gamma)
    total = 0j
    qerr = 0.0
    terms = []
    for j in _mode_order(J):
        kj, err = kj_eval_with_error(params, j, delta)
        weight = math.exp(0.5 * j * sigma)
        phase = complex(math.cos(2 * math.pi * j * dgamma), math.sin(2 * math.pi * j * dgamma))
        total += weight * phase * kj
        qerr += weight * err
        if keep_terms:
            terms.append(KernelTerm(j, kj, total, kernel_tail_bound(params, box, comp, abs(j))))
    return KernelSeriesResult(total, -J, J, bound + qerr, qerr, tuple(terms))


__all__ = [
    "Box",
    "DECAY_GUARD",
    "HALF_PI",
    "KernelSeriesResult",
    "KernelTerm",
    "ModeKernelQuery",
    "kernel_tail_bound",
    "kj_eval",
    "kj_eval_with_error",
    "szego_kernel",
]
