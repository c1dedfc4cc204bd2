"""Certify piecewise-interpolated maps between meshed manifolds.

The main entry point is :func:`certify`, which returns a :class:`Certificate`
naming the criterion that proves a map is a homeomorphism, the degree of a
covering, a topological obstruction, or the hypotheses that failed.
"""

from .engine import Certificate, Config, Hypothesis, certify, explain, invariant_screen, space_invariants
from .fixtures import Fixture
from .mapping import AmbientSimplyConnected, ExplicitDomain, PiecewiseMap
from .meshio import read_mesh, write_mesh

__all__ = [
    "Certificate", "Config", "Hypothesis", "certify", "explain", "invariant_screen",
    "space_invariants", "Fixture", "AmbientSimplyConnected", "ExplicitDomain", "PiecewiseMap",
    "read_mesh", "write_mesh",
]
