"""Interior and boundary immersion checks for piecewise maps.

Cells are certified individually (exact Jacobian signs). Local injectivity
at mesh vertices and edges is then checked by summing the signed tangent
angles of the incident image corners: 2 pi around interior vertices in 2D,
2 pi around interior edges and 4 pi of solid angle around interior
vertices in 3D.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..geometry.intersect import _wedges_overlap
from ..geometry.jacobian import QUAD_CORNERS, Sign, SignCertificate, _from_corner_signs, cell_certificate
from ..geometry.predicates import collinear3d, orient2d, orient2d_batch, orient3d
from ..topology.complex import KINDS, CellComplex
from ..topology.surfaces import orientability
from .pmap import PiecewiseMap

TWO_PI = 2 * np.pi
ANGLE_TOL = 1e-9
NEAR_TOL = 1e-6

VERIFIED, FAILED, INDETERMINATE = "Verified", "Failed", "Indeterminate"


def combine(*statuses) -> str:
    if FAILED in statuses:
        return FAILED
    if INDETERMINATE in statuses:
        return INDETERMINATE
    return VERIFIED


@dataclass
class ImmersionReport:
    certificates: list = field(default_factory=list)
    orientation: int = 0                     # +1 / -1 global sign, 0 if undetermined
    coherent: bool = True
    failing_cells: list = field(default_factory=list)
    indeterminate_cells: list = field(default_factory=list)
    failing_vertices: list = field(default_factory=list)
    failing_edges: list = field(default_factory=list)
    near_threshold: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.failing_cells or self.failing_vertices or self.failing_edges or not self.coherent:
            return FAILED
        if self.indeterminate_cells or self.near_threshold:
            return INDETERMINATE
        return VERIFIED

    @property
    def all_strict(self) -> bool:
        return bool(self.certificates) and all(c.strict for c in self.certificates)

    def evidence(self) -> dict:
        out = {"orientation": self.orientation, "cells_checked": len(self.certificates)}
        for key in ("failing_cells", "indeterminate_cells", "failing_vertices",
                    "failing_edges", "near_threshold", "notes"):
            val = getattr(self, key)
            if val:
                out[key] = val
        return out


@dataclass
class BoundaryImmersionReport:
    degenerate_facets: list = field(default_factory=list)    # parent vertex tuples
    folds: list = field(default_factory=list)                # vertices (2D) or edges (3D)
    indeterminate_vertices: list = field(default_factory=list)
    near_threshold: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.degenerate_facets or self.folds:
            return FAILED
        if self.indeterminate_vertices or self.near_threshold:
            return INDETERMINATE
        return VERIFIED

    def evidence(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v}


def _classify_sum(total: float, target: float) -> str:
    dev = abs(total - target)
    if dev <= ANGLE_TOL:
        return VERIFIED
    if dev <= NEAR_TOL:
        return INDETERMINATE
    return FAILED


def _corners(cx: CellComplex):
    """Flattened corner table: (cell, vertex, neighbour vertices) per cell corner."""
    cells, verts, nbrs = [], [], []
    for ci, (cell, kname) in enumerate(zip(cx.cells, cx.kinds)):
        for i, nb in enumerate(KINDS[kname].corners):
            cells.append(ci)
            verts.append(cell[i])
            nbrs.append([cell[j] for j in nb])
    return np.array(cells, dtype=np.int64), np.array(verts, dtype=np.int64), np.array(nbrs, dtype=np.int64)


def _boundary_vertex_mask(f: PiecewiseMap) -> np.ndarray:
    mask = np.zeros(f.complex.n_vertices, dtype=bool)
    mask[f.boundary.parent_vertices] = True
    return mask


def _boundary_edge_set(f: PiecewiseMap) -> set:
    pv = f.boundary.parent_vertices
    out = set()
    for a, b in f.boundary.complex.edges:
        u, v = int(pv[a]), int(pv[b])
        out.add((u, v) if u < v else (v, u))
    return out


def corner_angles_2d(T, verts, nbrs) -> np.ndarray:
    """Signed angle from the next edge to the previous edge at each 2D corner."""
    a = T[nbrs[:, 0]] - T[verts]
    b = T[nbrs[:, 1]] - T[verts]
    cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    dot = np.einsum("ij,ij->i", a, b)
    return np.arctan2(cross, dot)


def solid_angles(a, b, c) -> np.ndarray:
    """Signed solid angle of the trihedral cones (a, b, c) (Van Oosterom-Strackee)."""
    la, lb, lc = (np.linalg.norm(x, axis=1) for x in (a, b, c))
    det = np.einsum("ij,ij->i", a, np.cross(b, c))
    den = (la * lb * lc + np.einsum("ij,ij->i", a, b) * lc
           + np.einsum("ij,ij->i", a, c) * lb + np.einsum("ij,ij->i", b, c) * la)
    return 2 * np.arctan2(det, den)


def dihedral_angles(a, b, c) -> np.ndarray:
    """Signed angle around axis a from half-plane (a, b) to half-plane (a, c)."""
    ua = a / np.linalg.norm(a, axis=1)[:, None]
    bp = b - np.einsum("ij,ij->i", b, ua)[:, None] * ua
    cp = c - np.einsum("ij,ij->i", c, ua)[:, None] * ua
    return np.arctan2(np.einsum("ij,ij->i", ua, np.cross(bp, cp)), np.einsum("ij,ij->i", bp, cp))


def _cell_certificates(f: PiecewiseMap, max_depth: int) -> list[SignCertificate]:
    cx = f.complex
    T = f.target
    certs: list = [None] * cx.n_cells
    # batch the planar simplices and quads through the vectorized predicate
    if f.codim == 0 and cx.dim == 2:
        for kname, corner_sets in (("tri", ((0, 1, 2),)), ("quad", ((0, 1, 3), (0, 1, 2), (1, 2, 3), (2, 3, 0)))):
            ids = [i for i, k in enumerate(cx.kinds) if k == kname]
            if not ids:
                continue
            P = np.array([cx.cells[i] for i in ids])
            signs = np.stack([orient2d_batch(T[P[:, a]], T[P[:, b]], T[P[:, c]])
                              for a, b, c in corner_sets], axis=1)
            corners = QUAD_CORNERS if kname == "quad" else [(0.0, 0.0)]
            for row, ci in zip(signs, ids):
                certs[ci] = _from_corner_signs([int(s) for s in row], corners)
        return certs
    for ci, (cell, kname) in enumerate(zip(cx.cells, cx.kinds)):
        certs[ci] = cell_certificate(kname, T[list(cell)], max_depth=max_depth)
    return certs


def _surface_face_certificate(kind: str, pts) -> SignCertificate:
    """Nondegeneracy of a triangle or bilinear quad patch in R^3."""
    if kind == "tri":
        if collinear3d(*pts):
            return SignCertificate(Sign.ZERO, witness={"corner": 0})
        return SignCertificate(Sign.POSITIVE)
    zero = quad_normal_zero(pts)
    if zero is not None:
        return SignCertificate(Sign.ZERO, witness={"point": zero})
    return SignCertificate(Sign.POSITIVE)


def quad_normal_zero(pts):
    """Reference point where the normal of a bilinear patch in R^3 vanishes, or None.

    The normal x_xi cross x_eta is affine in (xi, eta); this solves
    n(xi, eta) = 0 on the unit square exactly.
    """
    P = [[Fraction(float(x)) for x in p] for p in pts]

    def sub(a, b):
        return [x - y for x, y in zip(a, b)]

    def cross(a, b):
        return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]

    a = sub(P[1], P[0])
    b = sub(P[3], P[0])
    c = sub(sub(P[2], P[3]), a)
    n0 = cross(a, b)
    A = cross(a, c)          # coefficient of xi
    B = cross(c, b)          # coefficient of eta
    AB = cross(A, B)
    if any(AB):
        if sum(x * y for x, y in zip(n0, AB)) != 0:
            return None
        # solve n0 + xi A + eta B = 0 using the largest 2x2 minor
        k = max(range(3), key=lambda i: abs(AB[i]))
        r0, r1 = [i for i in range(3) if i != k]
        det = A[r0] * B[r1] - A[r1] * B[r0]
        xi = (-n0[r0] * B[r1] + n0[r1] * B[r0]) / det
        eta = (-A[r0] * n0[r1] + A[r1] * n0[r0]) / det
        return (float(xi), float(eta)) if 0 <= xi <= 1 and 0 <= eta <= 1 else None
    # A and B parallel: the normal moves along a line, or is constant
    if not any(A) and not any(B):
        return (0.0, 0.0) if not any(n0) else None
    D, other = (A, B) if any(A) else (B, A)
    k = max(range(3), key=lambda i: abs(D[i]))
    lam = other[k] / D[k]
    t = -n0[k] / D[k]
    if any(n0[i] + t * D[i] for i in range(3)):
        return None
    # n vanishes where s + lam * u = t for (s, u) ranging over the square
    if min(0, lam) <= t <= 1 + max(0, lam):
        s = min(max(t, Fraction(0)), Fraction(1))
        u = (t - s) / lam if lam else Fraction(0)
        return (float(s), float(u)) if D is A else (float(u), float(s))
    return None


def check_interior_immersion(f: PiecewiseMap, max_depth: int = 8) -> ImmersionReport:
    if f.codim == 1:
        return _surface_interior_immersion(f)
    cx = f.complex
    rep = ImmersionReport()
    orientable, osign = orientability(cx)
    certs = _cell_certificates(f, max_depth)
    rep.certificates = certs
    if not orientable:
        rep.coherent = False
        rep.notes.append("source complex is not orientable, so it cannot immerse in R^n")
        return rep
    vals = np.array([c.value for c in certs], dtype=np.int64) * osign
    total = int(vals.sum())
    sigma = 1 if total >= 0 else -1
    rep.orientation = sigma
    for ci, c in enumerate(certs):
        if c.sign is Sign.ZERO or c.sign_change:
            rep.failing_cells.append(ci)
        elif c.sign is Sign.INDETERMINATE:
            rep.indeterminate_cells.append(ci)
        elif vals[ci] != sigma:
            rep.failing_cells.append(ci)
    good = np.zeros(cx.n_cells, dtype=bool)
    good[[i for i in range(cx.n_cells) if vals[i] == sigma]] = True
    cell_ids, verts, nbrs = _corners(cx)
    mult = (sigma * osign)[cell_ids].astype(float)
    on_bnd = _boundary_vertex_mask(f)
    bad_vertex = np.zeros(cx.n_vertices, dtype=bool)
    np.logical_or.at(bad_vertex, verts, ~good[cell_ids])
    T = f.target
    if cx.dim == 2:
        ang = corner_angles_2d(T, verts, nbrs) * mult
        sums = np.zeros(cx.n_vertices)
        np.add.at(sums, verts, ang)
        check = cx.used_vertices & ~on_bnd & ~bad_vertex
        for v in np.flatnonzero(check):
            st = _classify_sum(sums[v], TWO_PI)
            if st == FAILED:
                rep.failing_vertices.append({"vertex": int(v), "angle_sum": float(sums[v])})
            elif st == INDETERMINATE:
                rep.near_threshold.append({"vertex": int(v), "angle_sum": float(sums[v])})
        return rep
    # 3D: solid angles at vertices, dihedral angles at edges
    a = T[nbrs[:, 0]] - T[verts]
    b = T[nbrs[:, 1]] - T[verts]
    c = T[nbrs[:, 2]] - T[verts]
    omega = solid_angles(a, b, c) * mult
    vsum = np.zeros(cx.n_vertices)
    np.add.at(vsum, verts, omega)
    check = cx.used_vertices & ~on_bnd & ~bad_vertex
    for v in np.flatnonzero(check):
        st = _classify_sum(vsum[v], 2 * TWO_PI)
        if st == FAILED:
            rep.failing_vertices.append({"vertex": int(v), "solid_angle_sum": float(vsum[v])})
        elif st == INDETERMINATE:
            rep.near_threshold.append({"vertex": int(v), "solid_angle_sum": float(vsum[v])})
    bedges = _boundary_edge_set(f)
    esum: dict = {}
    ebad: set = set()
    frames = ((a, b, c, 0), (b, c, a, 1), (c, a, b, 2))
    for axis, p, q, col in frames:
        dih = dihedral_angles(axis, p, q) * mult
        other = nbrs[:, col]
        lower = verts < other
        for k in np.flatnonzero(lower):
            key = (int(verts[k]), int(other[k]))
            esum[key] = esum.get(key, 0.0) + dih[k]
            if not good[cell_ids[k]]:
                ebad.add(key)
    for key, total in esum.items():
        if key in bedges or key in ebad:
            continue
        st = _classify_sum(total, TWO_PI)
        if st == FAILED:
            rep.failing_edges.append({"edge": list(key), "dihedral_sum": float(total)})
        elif st == INDETERMINATE:
            rep.near_threshold.append({"edge": list(key), "dihedral_sum": float(total)})
    return rep


def _corner_wedges(faces, v):
    """(next, previous) neighbours of v in each face."""
    out = []
    for face in faces:
        i = face.index(v)
        n = len(face)
        out.append((face[(i + 1) % n], face[(i - 1) % n]))
    return out


def _cone_screen(coords, v, wedges) -> bool:
    """True when the corner cones at v form an embedded fan (exact, conservative)."""
    P = coords
    for i in range(len(wedges)):
        for j in range(i + 1, len(wedges)):
            wi, wj = wedges[i], wedges[j]
            shared = set(wi) & set(wj)
            if shared:
                if len(shared) > 1:
                    return False
                s = shared.pop()
                x1 = wi[0] if wi[1] == s else wi[1]
                x2 = wj[0] if wj[1] == s else wj[1]
                if _folded(P[v], P[s], P[x1], P[x2]):
                    return False
                continue
            if _wedges_overlap(P[v], (P[wi[0]], P[wi[1]]), (P[wj[0]], P[wj[1]])):
                return False
    return True


def _folded(u, w, x1, x2) -> bool:
    """Half-planes (u, w, x1) and (u, w, x2) along edge uw coincide locally."""
    if orient3d(u, w, x1, x2) != 0:
        return False
    U = [Fraction(float(t)) for t in u]
    e = [Fraction(float(t)) - s for t, s in zip(w, U)]
    p = [Fraction(float(t)) - s for t, s in zip(x1, U)]
    q = [Fraction(float(t)) - s for t, s in zip(x2, U)]

    def cross(a, b):
        return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]

    n1, n2 = cross(e, p), cross(e, q)
    return sum(x * y for x, y in zip(n1, n2)) > 0


def _surface_interior_immersion(f: PiecewiseMap) -> ImmersionReport:
    """A 2-complex realized in R^3: faces nondegenerate, vertex fans embedded."""
    cx = f.complex
    T = f.target
    rep = ImmersionReport(orientation=1)
    rep.certificates = [_surface_face_certificate(k, T[list(c)]) for c, k in zip(cx.cells, cx.kinds)]
    rep.failing_cells = [i for i, c in enumerate(rep.certificates) if not c.strict]
    on_bnd = _boundary_vertex_mask(f)
    bad = set(v for i in rep.failing_cells for v in cx.cells[i])
    for v in range(cx.n_vertices):
        if on_bnd[v] or v in bad or not cx.vertex_cells[v]:
            continue
        inc = cx.vertex_cells[v]
        wedges = _corner_wedges([cx.cells[i] for i in inc], v)
        if not _cone_screen(T, v, wedges):
            rep.near_threshold.append({"vertex": int(v), "reason": "vertex fan not certified embedded"})
    return rep


def check_boundary_immersion(f: PiecewiseMap, interior: ImmersionReport | None = None) -> BoundaryImmersionReport:
    rep = BoundaryImmersionReport()
    bd = f.boundary
    if bd.is_empty:
        return rep
    if bd.complex.dim == 1:
        _boundary_curves(f, rep)
    else:
        _boundary_surfaces(f, rep)
    if f.codim == 0 and interior is not None and interior.orientation:
        _boundary_fans(f, interior, rep)
    return rep


def _same_ray(p, a, b) -> bool:
    """a - p and b - p point along the same ray (exact)."""
    if len(p) == 2:
        if orient2d(p, a, b) != 0:
            return False
    elif not collinear3d(p, a, b):
        return False
    P = [Fraction(float(t)) for t in p]
    u = [Fraction(float(t)) - s for t, s in zip(a, P)]
    w = [Fraction(float(t)) - s for t, s in zip(b, P)]
    return sum(x * y for x, y in zip(u, w)) > 0


def _boundary_curves(f, rep):
    bd = f.boundary
    pv = bd.parent_vertices
    T = f.target
    nxt, prv = {}, {}
    for a, b in bd.complex.cells:
        u, w = int(pv[a]), int(pv[b])
        if np.array_equal(T[u], T[w]):
            rep.degenerate_facets.append([u, w])
        nxt[u] = w
        prv[w] = u
    bad = {v for e in rep.degenerate_facets for v in e}
    for v in sorted(nxt):
        if v in bad or v not in prv:
            continue
        if _same_ray(T[v], T[prv[v]], T[nxt[v]]):
            rep.folds.append({"vertex": v, "neighbours": [prv[v], nxt[v]]})


def _boundary_surfaces(f, rep):
    bd = f.boundary
    bc = bd.complex
    pv = bd.parent_vertices
    T = f.target
    faces = [tuple(int(pv[v]) for v in c) for c in bc.cells]
    degenerate = set()
    for i, (face, k) in enumerate(zip(faces, bc.kinds)):
        if not _surface_face_certificate(k, T[list(face)]).strict:
            rep.degenerate_facets.append(list(face))
            degenerate.add(i)
    # folds along boundary edges, tested at both endpoints
    for fid, cof in enumerate(bc.facet_cofacets):
        if len(cof) != 2 or cof[0][0] in degenerate or cof[1][0] in degenerate:
            continue
        u, w = (int(pv[x]) for x in bc.facets[fid])
        (c0, _), (c1, _) = cof
        for a, b in ((u, w), (w, u)):
            x1 = _corner_other(faces[c0], a, b)
            x2 = _corner_other(faces[c1], a, b)
            if _folded(T[a], T[b], T[x1], T[x2]):
                rep.folds.append({"edge": sorted([u, w]), "at": a})
                break
    # vertex fan screen
    inc: dict = {}
    for i, face in enumerate(faces):
        for v in face:
            inc.setdefault(v, []).append(i)
    folded = {v for fo in rep.folds for v in fo["edge"]}
    for v, ids in sorted(inc.items()):
        if v in folded or any(i in degenerate for i in ids):
            continue
        wedges = _corner_wedges([faces[i] for i in ids], v)
        if not _cone_screen(T, v, wedges):
            rep.indeterminate_vertices.append(v)


def _corner_other(face, a, b):
    """Neighbour of a in the face other than b."""
    n = len(face)
    i = face.index(a)
    p, q = face[(i + 1) % n], face[(i - 1) % n]
    return q if p == b else p


def _boundary_fans(f: PiecewiseMap, interior: ImmersionReport, rep: BoundaryImmersionReport):
    """Angle sums of the incident image cells at boundary vertices (2D) or edges and vertices (3D)."""
    cx = f.complex
    T = f.target
    _, osign = orientability(cx)
    if osign is None:
        return
    cell_ids, verts, nbrs = _corners(cx)
    mult = (interior.orientation * osign)[cell_ids].astype(float)
    on_bnd = _boundary_vertex_mask(f)
    skip = np.zeros(cx.n_vertices, dtype=bool)
    bad_cells = np.zeros(cx.n_cells, dtype=bool)
    bad_cells[interior.failing_cells + interior.indeterminate_cells] = True
    np.logical_or.at(skip, verts, bad_cells[cell_ids])

    def judge(total, full, label):
        if ANGLE_TOL < total < full - ANGLE_TOL:
            return
        if -NEAR_TOL < total < full + NEAR_TOL:
            rep.near_threshold.append({**label, "angle_sum": float(total)})
        else:
            rep.folds.append({**label, "angle_sum": float(total)})

    if cx.dim == 2:
        ang = corner_angles_2d(T, verts, nbrs) * mult
        sums = np.zeros(cx.n_vertices)
        np.add.at(sums, verts, ang)
        for v in np.flatnonzero(on_bnd & ~skip):
            judge(sums[v], TWO_PI, {"vertex": int(v)})
        return
    a = T[nbrs[:, 0]] - T[verts]
    b = T[nbrs[:, 1]] - T[verts]
    c = T[nbrs[:, 2]] - T[verts]
    omega = solid_angles(a, b, c) * mult
    vsum = np.zeros(cx.n_vertices)
    np.add.at(vsum, verts, omega)
    for v in np.flatnonzero(on_bnd & ~skip):
        judge(vsum[v], 2 * TWO_PI, {"vertex": int(v)})
    bedges = _boundary_edge_set(f)
    esum: dict = {}
    for axis, p, q, col in ((a, b, c, 0), (b, c, a, 1), (c, a, b, 2)):
        dih = dihedral_angles(axis, p, q) * mult
        other = nbrs[:, col]
        for k in np.flatnonzero(verts < other):
            key = (int(verts[k]), int(other[k]))
            if key in bedges and not skip[key[0]] and not skip[key[1]]:
                esum[key] = esum.get(key, 0.0) + dih[k]
    for key, total in sorted(esum.items()):
        judge(total, TWO_PI, {"edge": list(key)})
