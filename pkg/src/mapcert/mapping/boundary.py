"""Boundary containment f(dX) in dY and injectivity of f on the boundary."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from ..errors import DegenerateSegment, DegenerateTriangle
from ..geometry.bvh import brute_force_overlap_pairs, build_bvh, self_overlap_pairs
from ..geometry.intersect import SegClass, TriClass, segment_intersection, triangle_intersection
from ..geometry.predicates import collinear3d, orient2d_batch, orient3d, orient3d_batch
from .immersion import FAILED, INDETERMINATE, VERIFIED, _same_ray
from .pmap import ExplicitDomain, PiecewiseMap, eval_cell

# ---------------------------------------------------------------------------
# distances


def point_segment_distance(p, a, b) -> np.ndarray:
    """Row-wise distance from points p to segments [a, b]."""
    ab = b - a
    den = np.einsum("ij,ij->i", ab, ab)
    t = np.where(den > 0, np.einsum("ij,ij->i", p - a, ab) / np.where(den > 0, den, 1), 0.0)
    t = np.clip(t, 0.0, 1.0)
    return np.linalg.norm(p - (a + t[:, None] * ab), axis=1)


def point_triangle_distance(p, a, b, c) -> np.ndarray:
    """Row-wise distance from points to triangles in R^3 (closest-feature search)."""
    ab, ac = b - a, c - a
    n = np.cross(ab, ac)
    nn = np.einsum("ij,ij->i", n, n)
    ok = nn > 0
    safe = np.where(ok, nn, 1.0)
    ap = p - a
    # barycentric coordinates of the projection onto the plane
    v = np.einsum("ij,ij->i", np.cross(ap, ac), n) / safe
    w = np.einsum("ij,ij->i", np.cross(ab, ap), n) / safe
    inside = ok & (v >= 0) & (w >= 0) & (v + w <= 1)
    plane = np.abs(np.einsum("ij,ij->i", ap, n)) / np.sqrt(safe)
    edges = np.minimum(np.minimum(point_segment_distance(p, a, b), point_segment_distance(p, b, c)),
                       point_segment_distance(p, c, a))
    return np.where(inside, plane, edges)


@dataclass
class Primitives:
    """Segments or triangles realizing a boundary, with a centroid KD-tree."""

    verts: np.ndarray          # (P, k, d) primitive corner coordinates
    owner: np.ndarray          # primitive -> facet index of the source cell list

    def __post_init__(self):
        cen = self.verts.mean(axis=1)
        self.tree = cKDTree(cen)
        self.reach = float(np.max(np.linalg.norm(self.verts - cen[:, None, :], axis=2))) if len(cen) else 0.0

    def _dist_pairs(self, pts, prim):
        V = self.verts[prim]
        if V.shape[1] == 2:
            return point_segment_distance(pts, V[:, 0], V[:, 1])
        return point_triangle_distance(pts, V[:, 0], V[:, 1], V[:, 2])

    def distance(self, pts: np.ndarray) -> np.ndarray:
        """Exact (floating) minimum distance from each point to the primitive set."""
        pts = np.asarray(pts, dtype=float)
        if len(self.verts) == 0:
            return np.full(len(pts), np.inf)
        _, near = self.tree.query(pts, k=1)
        upper = self._dist_pairs(pts, near)
        cand = self.tree.query_ball_point(pts, upper + self.reach + 1e-300)
        counts = np.array([len(c) for c in cand])
        qi = np.repeat(np.arange(len(pts)), counts)
        pj = np.concatenate([np.asarray(c, dtype=np.int64) for c in cand]) if len(qi) else np.empty(0, np.int64)
        best = upper.copy()
        if len(qi):
            d = self._dist_pairs(pts[qi], pj)
            np.minimum.at(best, qi, d)
        return best


def _triangulate(cells, kinds):
    tris, owner = [], []
    for i, (c, k) in enumerate(zip(cells, kinds)):
        if len(c) == 3:
            tris.append(c)
            owner.append(i)
        else:
            tris += [(c[0], c[1], c[2]), (c[0], c[2], c[3])]
            owner += [i, i]
    return tris, owner


def boundary_primitives(domain: ExplicitDomain) -> Primitives:
    bc = domain.boundary.complex
    pv = domain.boundary.parent_vertices
    P = domain.coords
    cells = [tuple(int(pv[v]) for v in c) for c in bc.cells]
    if bc.dim == 1:
        return Primitives(P[np.array(cells, dtype=np.int64).reshape(-1, 2)], np.arange(len(cells)))
    tris, owner = _triangulate(cells, bc.kinds)
    return Primitives(P[np.array(tris, dtype=np.int64).reshape(-1, 3)], np.array(owner))


def surface_primitives(domain: ExplicitDomain) -> Primitives:
    """Triangulated cells of a 2-complex realized in R^3."""
    tris, owner = _triangulate(domain.complex.cells, domain.complex.kinds)
    return Primitives(domain.coords[np.array(tris, dtype=np.int64).reshape(-1, 3)], np.array(owner))


# ---------------------------------------------------------------------------
# containment


def _facet_samples(kind: str, n: int) -> np.ndarray:
    t = np.linspace(0.0, 1.0, n)
    if kind == "seg":
        return t[:, None]
    if kind == "quad":
        a, b = np.meshgrid(t, t, indexing="ij")
        return np.stack([a.ravel(), b.ravel()], axis=1)
    if kind == "tri":
        pts = [(i / (n - 1), j / (n - 1)) for i in range(n) for j in range(n - i)]
        return np.array(pts)
    raise ValueError(kind)


@dataclass
class ContainmentReport:
    status: str
    max_deviation: float
    dist_tol: float
    worst_facet: list | None = None
    violations: list = field(default_factory=list)

    def evidence(self) -> dict:
        out = {"max_deviation": self.max_deviation, "dist_tol": self.dist_tol}
        if self.violations:
            out["violations"] = self.violations[:20]
            out["n_violations"] = len(self.violations)
        return out


def sample_boundary_images(f: PiecewiseMap, n: int = 5):
    """Sample points on the images of the boundary facets of X."""
    bd = f.boundary
    pv = bd.parent_vertices
    pts, owner = [], []
    for i, (c, k) in enumerate(zip(bd.complex.cells, bd.complex.kinds)):
        ref = _facet_samples(k, n)
        corners = f.target[[int(pv[v]) for v in c]]
        pts.append(eval_cell(k, corners, ref))
        owner.append(np.full(len(ref), i))
    if not pts:
        return np.zeros((0, f.ambient)), np.zeros(0, dtype=np.int64)
    return np.concatenate(pts), np.concatenate(owner)


def check_boundary_containment(f: PiecewiseMap, target: ExplicitDomain, samples: int = 5) -> ContainmentReport:
    """Every sampled boundary image point lies within dist_tol of the realized dY."""
    tol = target.tolerance
    pts, owner = sample_boundary_images(f, samples)
    if len(pts) == 0:
        return ContainmentReport(VERIFIED, 0.0, tol)
    if target.boundary.is_empty:
        return ContainmentReport(FAILED, float("inf"), tol,
                                 violations=[{"reason": "target has empty boundary"}])
    d = boundary_primitives(target).distance(pts)
    worst = int(np.argmax(d))
    pv = f.boundary.parent_vertices
    bad = np.flatnonzero(d > tol)
    viol = []
    seen = set()
    for k in bad[np.argsort(-d[bad])]:
        fac = int(owner[k])
        if fac in seen:
            continue
        seen.add(fac)
        viol.append({"facet": [int(pv[v]) for v in f.boundary.complex.cells[fac]], "deviation": float(d[k])})
    return ContainmentReport(FAILED if len(bad) else VERIFIED, float(d[worst]), tol,
                             [int(pv[v]) for v in f.boundary.complex.cells[int(owner[worst])]], viol)


def image_in_target(f: PiecewiseMap, target: ExplicitDomain) -> ContainmentReport:
    """Screen: vertex and cell-centre images lie in the realized target Y."""
    tol = target.tolerance
    cx = f.complex
    verts = f.target[cx.used_vertices]
    centres = np.array([f.target[list(c)].mean(axis=0) for c in cx.cells])
    pts = np.concatenate([verts, centres])
    if f.codim == 1:
        d = surface_primitives(target).distance(pts)
        bad = np.flatnonzero(d > tol)
        dev = float(d.max()) if len(d) else 0.0
    else:
        inside = point_in_domain(target, pts)
        bad = np.flatnonzero(~inside)
        if len(bad) and not target.boundary.is_empty:
            near = boundary_primitives(target).distance(pts[bad]) <= tol
            bad = bad[~near]
        dev = 0.0 if not len(bad) else float("inf")
    viol = [{"point": pts[k].tolist()} for k in bad[:20]]
    return ContainmentReport(FAILED if len(bad) else VERIFIED, dev, tol, violations=viol)


def point_in_domain(domain: ExplicitDomain, pts: np.ndarray, chunk: int = 2048) -> np.ndarray:
    """Winding-number membership test for a full-dimensional realized domain."""
    bd = domain.boundary
    if bd.is_empty:
        return np.zeros(len(pts), dtype=bool)
    prim = boundary_primitives(domain)
    V = prim.verts
    out = np.zeros(len(pts), dtype=bool)
    for s in range(0, len(pts), chunk):
        q = pts[s:s + chunk]
        if V.shape[1] == 2:
            a = V[None, :, 0, :] - q[:, None, :]
            b = V[None, :, 1, :] - q[:, None, :]
            ang = np.arctan2(a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0], np.einsum("pqi,pqi->pq", a, b))
            w = ang.sum(axis=1) / (2 * np.pi)
        else:
            a = V[None, :, 0, :] - q[:, None, :]
            b = V[None, :, 1, :] - q[:, None, :]
            c = V[None, :, 2, :] - q[:, None, :]
            la, lb, lc = (np.linalg.norm(x, axis=2) for x in (a, b, c))
            det = np.einsum("pqi,pqi->pq", a, np.cross(b, c))
            den = (la * lb * lc + np.einsum("pqi,pqi->pq", a, b) * lc
                   + np.einsum("pqi,pqi->pq", a, c) * lb + np.einsum("pqi,pqi->pq", b, c) * la)
            w = (2 * np.arctan2(det, den)).sum(axis=1) / (4 * np.pi)
        out[s:s + chunk] = np.abs(w) > 0.5
    return out


# ---------------------------------------------------------------------------
# injectivity


@dataclass
class InjectivityReport:
    status: str
    scope: str
    violations: list = field(default_factory=list)      # pairs of facets (parent vertex tuples)
    indeterminate: list = field(default_factory=list)
    pairs_tested: int = 0

    @property
    def injective(self) -> bool:
        return self.status == VERIFIED

    def evidence(self) -> dict:
        out = {"scope": self.scope, "pairs_tested": self.pairs_tested}
        if self.violations:
            out["violations"] = self.violations[:20]
            out["n_violations"] = len(self.violations)
        if self.indeterminate:
            out["indeterminate"] = self.indeterminate[:20]
        return out


def _candidate_pairs(lo, hi, method):
    if method == "brute":
        return brute_force_overlap_pairs(lo, hi)
    return self_overlap_pairs(build_bvh(lo, hi))


def segment_violations(P: np.ndarray, segs: np.ndarray, method: str = "bvh",
                       same_group: np.ndarray | None = None):
    """Violating segment pairs of a 2D polyline set (indices into ``segs``).

    Segments sharing a source vertex may only meet at that vertex; all other
    pairs must be disjoint. Returns ``(pairs, degenerate, n_candidates)``.
    """
    P = np.asarray(P, dtype=float)
    segs = np.asarray(segs, dtype=np.int64)
    A, B = P[segs[:, 0]], P[segs[:, 1]]
    degenerate = np.flatnonzero(np.all(A == B, axis=1))
    pairs = _candidate_pairs(np.minimum(A, B), np.maximum(A, B), method)
    if same_group is not None and len(pairs):
        pairs = pairs[same_group[pairs[:, 0]] == same_group[pairs[:, 1]]]
    if len(degenerate) and len(pairs):
        dmask = np.zeros(len(segs), dtype=bool)
        dmask[degenerate] = True
        pairs = pairs[~(dmask[pairs[:, 0]] | dmask[pairs[:, 1]])]
    n_cand = len(pairs)
    if not n_cand:
        return np.empty((0, 2), dtype=np.int64), degenerate, 0
    i, j = pairs[:, 0], pairs[:, 1]
    a1, b1, a2, b2 = segs[i, 0], segs[i, 1], segs[j, 0], segs[j, 1]
    share = (a1 == a2).astype(int) + (a1 == b2) + (b1 == a2) + (b1 == b2)
    bad = np.zeros(n_cand, dtype=bool)
    bad |= share >= 2
    # pairs sharing one vertex: violation iff the other ends lie on one ray
    one = np.flatnonzero(share == 1)
    if len(one):
        v = np.where((a1 == a2) | (a1 == b2), a1, b1)[one]
        x = np.where(a1[one] == v, b1[one], a1[one])
        y = np.where(a2[one] == v, b2[one], a2[one])
        o = orient2d_batch(P[v], P[x], P[y])
        for k in np.flatnonzero(o == 0):
            bad[one[k]] = _same_ray(P[v[k]], P[x[k]], P[y[k]])
    zero = np.flatnonzero(share == 0)
    if len(zero):
        p1, q1, p2, q2 = P[a1[zero]], P[b1[zero]], P[a2[zero]], P[b2[zero]]
        o1 = orient2d_batch(p1, q1, p2)
        o2 = orient2d_batch(p1, q1, q2)
        o3 = orient2d_batch(p2, q2, p1)
        o4 = orient2d_batch(p2, q2, q1)
        sep = (o1 * o2 > 0) | (o3 * o4 > 0)
        cross = (o1 * o2 < 0) & (o3 * o4 < 0)
        bad[zero[cross]] = True
        for k in np.flatnonzero(~sep & ~cross):
            cls = segment_intersection((p1[k], q1[k]), (p2[k], q2[k]))
            bad[zero[k]] = cls is not SegClass.DISJOINT
    return pairs[bad], degenerate, n_cand


def _segments3d_meet(p1, q1, p2, q2) -> bool:
    if orient3d(p1, q1, p2, q2) != 0:
        return False
    pts = np.array([p1, q1, p2, q2], dtype=float)
    n = np.cross(q1 - p1, p2 - p1)
    if not np.any(n):
        n = np.cross(q1 - p1, q2 - p1)
    if np.any(n):
        ax = int(np.argmax(np.abs(n)))
    else:   # all four collinear: drop the axis the line varies least along
        ax = int(np.argmin(np.abs(q1 - p1)))
    keep = [i for i in range(3) if i != ax]
    s = pts[:, keep]
    return segment_intersection((s[0], s[1]), (s[2], s[3])) is not SegClass.DISJOINT


def _segment3d_violations(P, segs, method, same_group):
    A, B = P[segs[:, 0]], P[segs[:, 1]]
    degenerate = np.flatnonzero(np.all(A == B, axis=1))
    pairs = _candidate_pairs(np.minimum(A, B), np.maximum(A, B), method)
    if same_group is not None and len(pairs):
        pairs = pairs[same_group[pairs[:, 0]] == same_group[pairs[:, 1]]]
    bad = []
    dset = set(degenerate.tolist())
    for i, j in pairs:
        if i in dset or j in dset:
            continue
        si, sj = set(segs[i]), set(segs[j])
        common = si & sj
        if len(common) >= 2:
            bad.append((i, j))
        elif len(common) == 1:
            v = common.pop()
            x, = si - {v}
            y, = sj - {v}
            if _same_ray(P[v], P[x], P[y]):
                bad.append((i, j))
        elif _segments3d_meet(P[segs[i, 0]], P[segs[i, 1]], P[segs[j, 0]], P[segs[j, 1]]):
            bad.append((i, j))
    return np.array(bad, dtype=np.int64).reshape(-1, 2), degenerate, len(pairs)


def _quad_split_ok(pts) -> bool:
    """Planar, strictly convex quad: its bilinear image is the union of the two triangles."""
    if orient3d(*pts) != 0:
        return False
    P = [[Fraction(float(x)) for x in p] for p in pts]

    def normal(i):
        a, b, c = P[(i - 1) % 4], P[i], P[(i + 1) % 4]
        u = [x - y for x, y in zip(c, b)]
        w = [x - y for x, y in zip(a, b)]
        return [u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]]

    ns = [normal(i) for i in range(4)]
    if any(not any(n) for n in ns):
        return False
    return all(sum(x * y for x, y in zip(ns[0], n)) > 0 for n in ns[1:])


def face_violations(P: np.ndarray, faces, kinds, method: str = "bvh", same_group=None):
    """Violating face pairs of a 2-complex realized in R^3.

    Returns ``(pairs, degenerate_faces, undecided_faces, n_candidates)``.
    Non-planar or non-convex quads cannot be decided through their two
    triangles and are reported as undecided.
    """
    P = np.asarray(P, dtype=float)
    undecided, degenerate = [], []
    tris, owner = [], []
    for i, (c, k) in enumerate(zip(faces, kinds)):
        pts = P[list(c)]
        if len(c) == 3:
            if collinear3d(*pts):
                degenerate.append(i)
                continue
            tris.append(tuple(c))
            owner.append(i)
            continue
        if not _quad_split_ok(pts):
            undecided.append(i)
            continue
        tris += [(c[0], c[1], c[2]), (c[0], c[2], c[3])]
        owner += [i, i]
    if not tris:
        return np.empty((0, 2), dtype=np.int64), degenerate, undecided, 0
    T = np.array(tris, dtype=np.int64)
    owner = np.array(owner)
    V = P[T]
    pairs = _candidate_pairs(V.min(axis=1), V.max(axis=1), method)
    if len(pairs):
        pairs = pairs[owner[pairs[:, 0]] != owner[pairs[:, 1]]]
    if same_group is not None and len(pairs):
        g = np.asarray(same_group)[owner]
        pairs = pairs[g[pairs[:, 0]] == g[pairs[:, 1]]]
    n_cand = len(pairs)
    if not n_cand:
        return np.empty((0, 2), dtype=np.int64), degenerate, undecided, 0
    i, j = pairs[:, 0], pairs[:, 1]
    shares = np.zeros(n_cand, dtype=np.int64)
    for a in range(3):
        for b in range(3):
            shares += T[i, a] == T[j, b]
    sep = np.zeros(n_cand, dtype=bool)
    nz = np.flatnonzero(shares == 0)
    if len(nz):
        # a strict separating plane through either triangle decides most pairs
        for s, t in ((i, j), (j, i)):
            o = np.stack([orient3d_batch(V[s[nz], 0], V[s[nz], 1], V[s[nz], 2], V[t[nz], k])
                          for k in range(3)], axis=1)
            sep[nz] |= np.all(o > 0, axis=1) | np.all(o < 0, axis=1)
    bad = []
    for k in np.flatnonzero(~sep):
        ti, tj = T[i[k]], T[j[k]]
        shared = [(a, b) for a in range(3) for b in range(3) if ti[a] == tj[b]]
        try:
            cls = triangle_intersection(V[i[k]], V[j[k]], shared)
        except DegenerateTriangle:
            cls = TriClass.IMPROPER_CONTACT
        if cls is TriClass.IMPROPER_CONTACT:
            bad.append((owner[i[k]], owner[j[k]]))
    bad = sorted(set(tuple(sorted(p)) for p in bad))
    return np.array(bad, dtype=np.int64).reshape(-1, 2), degenerate, undecided, n_cand


def check_boundary_injectivity(f: PiecewiseMap, scope: str = "whole", method: str = "bvh") -> InjectivityReport:
    """Injectivity of f on the boundary, globally or per boundary component."""
    if scope not in ("whole", "per-component"):
        raise ValueError(f"unknown scope {scope!r}")
    bd = f.boundary
    if bd.is_empty:
        return InjectivityReport(VERIFIED, scope)
    pv = bd.parent_vertices
    cells = [tuple(int(pv[v]) for v in c) for c in bd.complex.cells]
    group = bd.labels if scope == "per-component" else None
    return _injectivity(f.target, cells, bd.complex.kinds, bd.complex.dim, scope, method, group)


def _injectivity(P, cells, kinds, dim, scope, method, group) -> InjectivityReport:
    if dim == 1:
        segs = np.array(cells, dtype=np.int64).reshape(-1, 2)
        if P.shape[1] == 2:
            bad, degen, n = segment_violations(P, segs, method, group)
        else:
            bad, degen, n = _segment3d_violations(P, segs, method, group)
        viol = [{"pair": [list(cells[a]), list(cells[b])]} for a, b in bad]
        viol += [{"degenerate": list(cells[d])} for d in degen]
        return InjectivityReport(FAILED if viol else VERIFIED, scope, viol, [], n)
    bad, degen, undecided, n = face_violations(P, cells, kinds, method, group)
    viol = [{"pair": [list(cells[a]), list(cells[b])]} for a, b in bad]
    viol += [{"degenerate": list(cells[d])} for d in degen]
    und = [{"face": list(cells[u]), "reason": "non-planar or non-convex quad"} for u in undecided]
    status = FAILED if viol else (INDETERMINATE if und else VERIFIED)
    return InjectivityReport(status, scope, viol, und, n)


def surface_injectivity(P, complex_, method: str = "bvh") -> InjectivityReport:
    """Global injectivity of a 2-complex realized in R^3 (used to verify embeddings)."""
    return _injectivity(np.asarray(P, dtype=float), complex_.cells, complex_.kinds, 2, "whole", method, None)
