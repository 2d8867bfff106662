"""Hardy space and Szegő projection machinery on the worm domain D'_beta.

Operators act on samples over ``R x T`` through the mixed Fourier transform;
see :mod:`wormszego.grid` for the conventions.
"""

from .domain import (
    ApproachParams,
    BoundaryPoint,
    Component,
    DomainParams,
    InteriorPoint,
    Region,
    classify_point,
    component_offsets,
    validate_params,
)
from .errors import WormError
from .grid import FrequencyField, GridSpec, MultiplierSpec, SampledField, to_frequency, to_physical
from .kernel import kj_eval, kernel_tail_bound, szego_kernel
from .strip import StripParams, pw_extend, strip_kernel, strip_project
from .szego import (
    BoundaryData,
    ModeCoefficients,
    boundary_szego,
    mollify,
    project_interior,
    pw_worm_synthesize,
)

__version__ = "0.1.0"

__all__ = [
    "ApproachParams",
    "BoundaryData",
    "BoundaryPoint",
    "Component",
    "DomainParams",
    "FrequencyField",
    "GridSpec",
    "InteriorPoint",
    "ModeCoefficients",
    "MultiplierSpec",
    "Region",
    "SampledField",
    "StripParams",
    "WormError",
    "boundary_szego",
    "classify_point",
    "component_offsets",
    "kernel_tail_bound",
    "kj_eval",
    "mollify",
    "project_interior",
    "pw_extend",
    "pw_worm_synthesize",
    "strip_kernel",
    "strip_project",
    "szego_kernel",
    "to_frequency",
    "to_physical",
    "validate_params",
]
