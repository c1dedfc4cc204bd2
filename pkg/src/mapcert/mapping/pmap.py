"""Piecewise-interpolated maps and target specifications."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import DimensionMismatch, LengthMismatch, MeshError
from ..geometry.jacobian import bilinear_eval, trilinear_eval
from ..topology.complex import CellComplex, boundary, BoundaryComplex


def _check_coords(coords, complex_: CellComplex, what: str) -> np.ndarray:
    coords = np.asarray(coords, dtype=float)
    if coords.ndim != 2 or coords.shape[0] != complex_.n_vertices:
        raise LengthMismatch(f"{what} realization has shape {coords.shape}, "
                             f"expected ({complex_.n_vertices}, d)")
    if not np.all(np.isfinite(coords)):
        raise MeshError(f"{what} realization has non-finite coordinates")
    if coords.shape[1] not in (complex_.dim, complex_.dim + 1) or coords.shape[1] > 3:
        raise DimensionMismatch(f"{what} realization of a {complex_.dim}-complex in R^{coords.shape[1]}")
    return coords


def eval_cell(kind: str, pts: np.ndarray, ref) -> np.ndarray:
    """Image of reference coordinates ``ref`` (..., k) under the cell interpolant.

    Simplices use (s, t[, u]) with vertex 0 at the origin; quads and hexes use
    the unit square / cube.
    """
    ref = np.asarray(ref, dtype=float)
    pts = np.asarray(pts, dtype=float)
    if kind in ("tri", "tet", "seg"):
        base = pts[0]
        return base + ref @ (pts[1:] - base)
    if kind == "quad":
        return bilinear_eval(pts, ref[..., 0], ref[..., 1])
    if kind == "hex":
        return trilinear_eval(pts, ref[..., 0], ref[..., 1], ref[..., 2])
    raise ValueError(f"unknown cell kind {kind!r}")


def reference_centroid(kind: str) -> np.ndarray:
    return {"seg": np.array([0.5]), "tri": np.array([1 / 3, 1 / 3]),
            "quad": np.array([0.5, 0.5]), "tet": np.array([0.25, 0.25, 0.25]),
            "hex": np.array([0.5, 0.5, 0.5])}[kind]


def in_reference(kind: str, ref, tol: float = 0.0) -> bool:
    ref = np.asarray(ref, dtype=float)
    if kind in ("tri", "tet", "seg"):
        return bool(np.all(ref >= -tol) and ref.sum() <= 1 + tol)
    return bool(np.all(ref >= -tol) and np.all(ref <= 1 + tol))


def on_reference_boundary(kind: str, ref, tol: float) -> list[int]:
    """Local facet indices whose closure contains ``ref`` within ``tol``."""
    r = np.asarray(ref, dtype=float)
    if kind == "seg":
        return [i for i, v in enumerate((r[0], 1 - r[0])) if abs(v) <= tol]
    if kind == "tri":
        # facets (0,1), (1,2), (2,0): t = 0, s + t = 1, s = 0
        vals = (r[1], 1 - r[0] - r[1], r[0])
    elif kind == "quad":
        vals = (r[1], 1 - r[0], 1 - r[1], r[0])
    elif kind == "tet":
        # facets opposite vertices 0..3
        vals = (1 - r.sum(), r[0], r[1], r[2])
    elif kind == "hex":
        # (z=0, z=1, y=0, y=1, x=0, x=1) in the facet table order
        vals = (r[2], 1 - r[2], r[1], 1 - r[1], r[0], 1 - r[0])
    else:
        raise ValueError(kind)
    return [i for i, v in enumerate(vals) if abs(v) <= tol]


@dataclass(frozen=True, eq=False)
class PiecewiseMap:
    """A map given by two realizations of one complex (reference -> physical)."""

    complex: CellComplex
    source: np.ndarray
    target: np.ndarray
    trusted_source: bool = False

    def __post_init__(self):
        src = _check_coords(self.source, self.complex, "source")
        tgt = _check_coords(self.target, self.complex, "target")
        if src.shape[1] != tgt.shape[1]:
            raise DimensionMismatch(f"source in R^{src.shape[1]} but target in R^{tgt.shape[1]}")
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "target", tgt)

    @property
    def dim(self) -> int:
        return self.complex.dim

    @property
    def ambient(self) -> int:
        return self.target.shape[1]

    @property
    def codim(self) -> int:
        return self.ambient - self.dim

    @cached_property
    def boundary(self) -> BoundaryComplex:
        return boundary(self.complex, check=False)

    def cell_points(self, c: int, which: str = "target") -> np.ndarray:
        coords = self.target if which == "target" else self.source
        return coords[list(self.complex.cells[c])]

    def evaluate(self, c: int, ref, which: str = "target") -> np.ndarray:
        return eval_cell(self.complex.kinds[c], self.cell_points(c, which), ref)

    @cached_property
    def cell_boxes(self) -> tuple[np.ndarray, np.ndarray]:
        """Axis-aligned boxes of the target cell images (corner hulls)."""
        lo = np.array([self.target[list(c)].min(axis=0) for c in self.complex.cells])
        hi = np.array([self.target[list(c)].max(axis=0) for c in self.complex.cells])
        return lo, hi

    def with_target(self, target) -> "PiecewiseMap":
        return PiecewiseMap(self.complex, self.source, target, self.trusted_source)


@dataclass(frozen=True)
class AmbientSimplyConnected:
    """Target is the whole of R^n; certify a homeomorphism onto the image."""


@dataclass(frozen=True, eq=False)
class ExplicitDomain:
    """Target manifold Y given by a complex and its realization."""

    complex: CellComplex
    coords: np.ndarray
    dist_tol: float | None = None
    same_mesh: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coords", _check_coords(self.coords, self.complex, "target-domain"))

    @property
    def tolerance(self) -> float:
        if self.dist_tol is not None:
            return float(self.dist_tol)
        used = self.coords[self.complex.used_vertices]
        diam = float(np.linalg.norm(used.max(axis=0) - used.min(axis=0))) if len(used) else 0.0
        return 1e-8 * diam

    @cached_property
    def boundary(self) -> BoundaryComplex:
        return boundary(self.complex, check=False)


TargetSpec = AmbientSimplyConnected | ExplicitDomain
