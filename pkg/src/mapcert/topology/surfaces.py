"""Orientability, compact-surface classification and the boundary χ condition."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import LengthMismatch, NotManifold, NotSurface
from .complex import KINDS, CellComplex, boundary, check_manifold, connected_components, \
    euler_characteristic, same_orientation


def orientability(c: CellComplex) -> tuple[bool, np.ndarray | None]:
    """Propagate cell orientations across facets.

    Returns ``(True, signs)`` where ``signs[i]`` is +1/-1 such that flipping
    the cells with sign -1 makes neighbouring cells induce opposite
    orientations on every shared facet, or ``(False, None)``.
    Each connected component is seeded independently.
    """
    rep = check_manifold(c)
    if rep.overfull_facets:
        raise NotManifold("facet with more than two cofacets")
    n = c.n_cells
    sign = np.zeros(n, dtype=np.int64)
    # neighbour list: (other cell, relation) with relation -1 when both cells
    # induce the same orientation on the shared facet (one must flip)
    nbrs = [[] for _ in range(n)]
    for fid, cof in enumerate(c.facet_cofacets):
        if len(cof) != 2:
            continue
        (c0, l0), (c1, l1) = cof
        f0 = tuple(c.cells[c0][i] for i in KINDS[c.kinds[c0]].facets[l0])
        f1 = tuple(c.cells[c1][i] for i in KINDS[c.kinds[c1]].facets[l1])
        rel = -1 if same_orientation(f0, f1) else 1
        nbrs[c0].append((c1, rel))
        nbrs[c1].append((c0, rel))
    for seed in range(n):
        if sign[seed]:
            continue
        sign[seed] = 1
        queue = deque([seed])
        while queue:
            x = queue.popleft()
            for y, rel in nbrs[x]:
                want = sign[x] * rel
                if sign[y] == 0:
                    sign[y] = want
                    queue.append(y)
                elif sign[y] != want:
                    return False, None
    return True, sign


@dataclass(frozen=True)
class SurfaceClassification:
    orientable: bool
    genus: int              # handles if orientable, cross-caps otherwise
    boundary_curves: int
    euler: int
    name: str | None

    def as_dict(self) -> dict:
        return {"orientable": self.orientable, "genus": self.genus,
                "boundary_curves": self.boundary_curves, "chi": self.euler,
                "name": self.name}


_NAMES = {
    (True, 0, 0): "sphere",
    (True, 0, 1): "disk",
    (True, 0, 2): "annulus",
    (True, 1, 0): "torus",
    (False, 1, 1): "moebius band",
    (False, 2, 0): "klein bottle",
}


def surface_from_invariants(orientable: bool, chi: int, b: int) -> SurfaceClassification:
    """Genus from (orientable, chi, b): chi = 2 - 2g - b, or chi = 2 - k - b."""
    if orientable:
        twice_g = 2 - chi - b
        if twice_g < 0 or twice_g % 2:
            raise NotSurface(f"no orientable surface has chi={chi}, b={b}")
        g = twice_g // 2
    else:
        g = 2 - chi - b
        if g < 1:
            raise NotSurface(f"no non-orientable surface has chi={chi}, b={b}")
    return SurfaceClassification(orientable, g, b, chi, _NAMES.get((orientable, g, b)))


def classify_surface(c: CellComplex) -> SurfaceClassification:
    """Classify a connected compact 2-manifold complex."""
    if c.dim != 2:
        raise NotSurface(f"expected a 2-complex, got dimension {c.dim}")
    if not check_manifold(c).ok:
        raise NotSurface("complex is not a 2-manifold")
    ncomp, _ = connected_components(c)
    if ncomp != 1:
        raise NotSurface(f"surface must be connected, found {ncomp} components")
    orientable, _ = orientability(c)
    b = boundary(c, check=False).n_components
    return surface_from_invariants(orientable, euler_characteristic(c), b)


def classify_component(c: CellComplex) -> dict:
    """Classification record for a connected closed boundary component."""
    if c.dim == 1:
        chi = euler_characteristic(c)
        return {"dim": 1, "chi": chi, "name": "circle" if chi == 0 else None}
    if c.dim == 2:
        return {"dim": 2, **classify_surface(c).as_dict()}
    if c.dim == 0:
        return {"dim": 0, "chi": c.n_vertices, "name": "point" if c.n_vertices == 1 else None}
    raise NotSurface(f"cannot classify a {c.dim}-dimensional component")


def eq_chi_condition(chis_a: Sequence[int], chis_b: Sequence[int]) -> bool:
    """True iff no integer m >= 2 has chi(A_i) = m * chi(B_i) for every i.

    Both sequences are paired after sorting in non-increasing order. All-zero
    sequences fail, since every m satisfies 0 = m * 0.
    """
    if len(chis_a) != len(chis_b):
        raise LengthMismatch(f"{len(chis_a)} vs {len(chis_b)} boundary components")
    a = sorted((int(x) for x in chis_a), reverse=True)
    b = sorted((int(x) for x in chis_b), reverse=True)
    m = None
    for x, y in zip(a, b):
        if y == 0:
            if x != 0:
                return True
            continue
        if x % y:
            return True
        q = x // y
        if m is None:
            m = q
        elif q != m:
            return True
    if m is None:
        return False        # every pair is 0 = m * 0
    return m < 2
