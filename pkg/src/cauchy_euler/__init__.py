"""Euler's formula by Cauchy's method, mechanized on triangulated surfaces."""

from .complex_core import (Complex2, CountVector, Simplex, ValidationReport, boundary_cycles,
                           compute_genus, counts, euler_characteristic, validate)
from .planar_rep import (EdgePair, IdentificationScheme, PlanarPolygon, boundary_chi,
                         build_quotient, surface, validate_scheme)

__all__ = [
    "Complex2", "CountVector", "Simplex", "ValidationReport", "boundary_cycles",
    "compute_genus", "counts", "euler_characteristic", "validate",
    "EdgePair", "IdentificationScheme", "PlanarPolygon", "boundary_chi",
    "build_quotient", "surface", "validate_scheme",
]
