"""Combinatorial topology of meshed manifolds."""

from .complex import (KINDS, BoundaryComplex, CellComplex, ManifoldReport, barycentric_subdivision,
                      boundary, build_complex, check_manifold, component_complexes,
                      connected_components, euler_characteristic, require_manifold)
from .homology import HomologyProfile, betti, boundary_matrices, smith_invariants
from .surfaces import (SurfaceClassification, classify_component, classify_surface,
                       eq_chi_condition, orientability, surface_from_invariants)

__all__ = [
    "KINDS", "BoundaryComplex", "CellComplex", "ManifoldReport", "barycentric_subdivision",
    "boundary", "build_complex", "check_manifold", "component_complexes",
    "connected_components", "euler_characteristic", "require_manifold",
    "HomologyProfile", "betti", "boundary_matrices", "smith_invariants",
    "SurfaceClassification", "classify_component", "classify_surface", "eq_chi_condition",
    "orientability", "surface_from_invariants",
]
