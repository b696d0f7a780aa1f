"""Exact invariants of quaternionic Shimura surfaces over a real quadratic field and their quotients."""

from .forms import BinaryForm
from .invariants import SurfaceParams
from .oracle import QuaternaryLattice
from .surfaces import CurveConfig, Divisor, InvariantSet

__all__ = ["BinaryForm", "CurveConfig", "Divisor", "InvariantSet", "QuaternaryLattice", "SurfaceParams"]
__version__ = "0.1.0"
