"""Geometry of the worm domain D'_beta and its distinguished boundary.

Points are described by ``z1`` and by ``s = log|z2|^2`` plus the phase
``gamma`` of ``z2 = exp(s/2) exp(2 pi i gamma)``. The domain is

    |Im z1 - s| < pi/2,   |s| < beta - pi/2,

and its distinguished boundary is the union of four copies E1..E4 of R x T
on which both inequalities are equalities.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import BetaOutOfRange, NotInterior, ParamOutOfRange

HALF_PI = 0.5 * math.pi

#: absolute tolerance used to recognise the defining equalities
BOUNDARY_ATOL = 1e-12


@dataclass(frozen=True)
class DomainParams:
    """Half-width ``beta`` of the worm together with its derived constants."""

    beta: float
    half_strip: float = field(init=False)
    weight_scale: float = field(init=False)

    def __post_init__(self):
        if not math.isfinite(self.beta):
            raise BetaOutOfRange(f"beta must be finite, got {self.beta!r}")
        if self.beta <= HALF_PI:
            raise BetaOutOfRange(f"beta must exceed pi/2, got {self.beta!r}")
        hs = self.beta - HALF_PI
        object.__setattr__(self, "half_strip", hs)
        object.__setattr__(self, "weight_scale", 2.0 * hs)

    def contains(self, im_z1: float, s: float) -> bool:
        return abs(im_z1 - s) < HALF_PI and abs(s) < self.half_strip

    def check_interior(self, y: float, s: float) -> None:
        if not self.contains(y, s):
            raise NotInterior(
                f"(Im z1, log|z2|^2) = ({y!r}, {s!r}) is not inside D'_beta "
                f"for beta = {self.beta!r}"
            )


def validate_params(beta: float) -> DomainParams:
    return DomainParams(float(beta))


class Component(enum.IntEnum):
    """The four components of the distinguished boundary, numbered 0..3."""

    E1 = 0
    E2 = 1
    E3 = 2
    E4 = 3

    def im_z1(self, params: DomainParams) -> float:
        b = params.beta
        return (b, b - math.pi, -b, math.pi - b)[self]

    def log_mod(self, params: DomainParams) -> float:
        a = params.half_strip
        return (a, a, -a, -a)[self]


def component_offsets(params: DomainParams) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Return ``(Im z1, log|z2|^2)`` for E1..E4 as two 4-tuples."""
    comps = tuple(Component)
    return (
        tuple(c.im_z1(params) for c in comps),
        tuple(c.log_mod(params) for c in comps),
    )


class Region(enum.Enum):
    INTERIOR = "interior"
    EXTERIOR = "exterior"
    E1 = "E1"
    E2 = "E2"
    E3 = "E3"
    E4 = "E4"

    @property
    def is_boundary(self) -> bool:
        return self.name.startswith("E")

    @property
    def component(self) -> Component | None:
        return Component[self.name] if self.is_boundary else None


def classify_point(params: DomainParams, z1: complex, s: float, gamma: float = 0.0) -> Region:
    """Locate ``(z1, s, gamma)`` relative to D'_beta.

    ``EXTERIOR`` covers everything outside the open domain that is not on the
    distinguished boundary (including the rest of the topological boundary).
    The phase ``gamma`` and ``Re z1`` never matter.
    """
    y = complex(z1).imag
    s = float(s)
    if params.contains(y, s):
        return Region.INTERIOR
    for comp in Component:
        if (abs(y - comp.im_z1(params)) <= BOUNDARY_ATOL
                and abs(s - comp.log_mod(params)) <= BOUNDARY_ATOL):
            return Region[comp.name]
    return Region.EXTERIOR


@dataclass(frozen=True)
class InteriorPoint:
    z1: complex
    s: float
    gamma: float = 0.0

    def validate(self, params: DomainParams) -> "InteriorPoint":
        params.check_interior(complex(self.z1).imag, self.s)
        return self

    @property
    def z2(self) -> complex:
        return math.exp(0.5 * self.s) * complex(math.cos(2 * math.pi * self.gamma),
                                                math.sin(2 * math.pi * self.gamma))


@dataclass(frozen=True)
class BoundaryPoint:
    component: Component
    x: float
    gamma: float = 0.0

    def z1(self, params: DomainParams) -> complex:
        return complex(self.x, self.component.im_z1(params))

    def s(self, params: DomainParams) -> float:
        return self.component.log_mod(params)


@dataclass(frozen=True)
class ApproachParams:
    """A point ``(t, s)`` of ``[0, pi/2) x [0, beta - pi/2)``."""

    t: float
    s: float

    def validate(self, params: DomainParams) -> "ApproachParams":
        if not (0.0 <= self.t < HALF_PI):
            raise ParamOutOfRange(f"t must lie in [0, pi/2), got {self.t!r}")
        if not (0.0 <= self.s < params.half_strip):
            raise ParamOutOfRange(f"s must lie in [0, beta - pi/2), got {self.s!r}")
        return self

    def slices(self) -> tuple[tuple[float, float], ...]:
        """The four ``(Im z1, log|z2|^2)`` slices of the growth functional."""
        t, s = self.t, self.s
        return ((s + t, s), (-(s + t), -s), (s - t, s), (-(s - t), -s))
