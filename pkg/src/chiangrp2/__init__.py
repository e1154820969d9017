"""Numerical toolkit for a Lagrangian RP^2 in CP^2 arising as an SU(2)-orbit of conics."""

from .lagrangian import (
    CHIANG,
    STANDARD_RP2,
    SpherePoint,
    chiang_from_sphere,
    orbit_intersections,
)
from .projective_core import ProjPoint, Tangent, canonicalize, fs_form, point, proj_eq
from .su2 import SU2Element, chiang_point
from .toric import CircleAction, moment
from .verify import run_suite

__version__ = "0.1.0"
