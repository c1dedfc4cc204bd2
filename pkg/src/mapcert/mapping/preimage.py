"""Preimage counting for piecewise maps and the sampled covering degree."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import (HypothesesNotVerified, ImmersionNotVerified, InternalInconsistency,
                      PointOnImageBoundary, SamplesDisagree)
from ..geometry.jacobian import trilinear_derivatives
from ..topology.complex import euler_characteristic
from .pmap import ExplicitDomain, PiecewiseMap, eval_cell, in_reference, on_reference_boundary, \
    reference_centroid

REF_TOL = 1e-10          # acceptance slack in reference coordinates
RESIDUAL = 1e-10         # relative residual for accepted solutions
DEDUP = 1e-9
ON_BOUNDARY = 1e-9


@dataclass
class PreimageCount:
    point: tuple
    count: int
    solutions: list = field(default_factory=list)    # (cell, reference coordinates)


def _scale(f: PiecewiseMap) -> float:
    T = f.target
    return max(1.0, float(np.linalg.norm(T.max(axis=0) - T.min(axis=0))))


def _polish(func, jac, x, y, steps=2):
    """Extra Newton steps past the acceptance tolerance, kept only while they help."""
    best = np.linalg.norm(func(x) - y)
    for _ in range(steps):
        r = func(x) - y
        try:
            cand = x + np.linalg.lstsq(jac(x), -r, rcond=None)[0]
        except np.linalg.LinAlgError:
            break
        err = np.linalg.norm(func(cand) - y)
        if not err < best:
            break
        x, best = cand, err
    return x


def _newton(func, jac, x0, y, tol, iters=30):
    x = np.array(x0, dtype=float)
    for _ in range(iters):
        r = func(x) - y
        if np.linalg.norm(r) <= tol:
            return _polish(func, jac, x, y), True
        J = jac(x)
        try:
            dx = np.linalg.lstsq(J, -r, rcond=None)[0]
        except np.linalg.LinAlgError:
            return x, False
        x = x + dx
        if not np.all(np.isfinite(x)) or np.any(np.abs(x) > 10):
            return x, False
    return x, bool(np.linalg.norm(func(x) - y) <= tol)


def _invert_simplex(pts, y):
    base = pts[0]
    M = (pts[1:] - base).T
    if M.shape[0] == M.shape[1]:
        try:
            return [np.linalg.solve(M, y - base)]
        except np.linalg.LinAlgError:
            return []
    return [np.linalg.lstsq(M, y - base, rcond=None)[0]]


def _invert_planar_quad(p, y):
    """Roots of the planar bilinear inverse via a quadratic in eta."""
    def cr(u, v):
        return u[0] * v[1] - u[1] * v[0]

    a = p[1] - p[0]
    b = p[3] - p[0]
    c = p[2] - p[3] - p[1] + p[0]
    e = y - p[0]
    A = cr(b, c)
    B = cr(b, a) - cr(e, c)
    C = -cr(e, a)
    scale = max(abs(A), abs(B), abs(C), 1e-300)
    if abs(A) <= 1e-14 * scale:
        etas = [-C / B] if B != 0 else []
    else:
        disc = B * B - 4 * A * C
        if disc < 0:
            if disc < -1e-12 * B * B:
                return []
            disc = 0.0
        sq = np.sqrt(disc)
        q = -0.5 * (B + np.copysign(sq, B))
        etas = [q / A, C / q] if q != 0 else [0.0]
    out = []
    for eta in etas:
        d = a + eta * c
        r = e - eta * b
        k = int(np.argmax(np.abs(d)))
        if d[k] == 0:
            continue
        out.append(np.array([r[k] / d[k], eta]))
    return out


def _multilinear_boxes(kind, pts, y, tol, depth=6):
    """Sub-boxes of the reference cell where every residual component may vanish."""
    k = 3 if kind == "hex" else 2
    boxes = [(np.zeros(k), 1.0)]
    corners = np.array(np.meshgrid(*[[0.0, 1.0]] * k, indexing="ij")).reshape(k, -1).T
    for _ in range(depth):
        nxt = []
        for lo, h in boxes:
            vals = eval_cell(kind, pts, lo + h * corners) - y
            if np.any(np.all(vals > tol, axis=0) | np.all(vals < -tol, axis=0)):
                continue
            for off in corners:
                nxt.append((lo + off * h / 2, h / 2))
        boxes = nxt
        if len(boxes) > 512:
            break
    return boxes


def _jacobian_fn(kind, pts):
    if kind == "hex":
        def jac(x):
            a, b, c = trilinear_derivatives(pts, x[0], x[1], x[2])
            return np.stack([a, b, c], axis=1)
        return jac

    def jac(x):
        xi, eta = x
        dxi = (1 - eta) * (pts[1] - pts[0]) + eta * (pts[2] - pts[3])
        deta = (1 - xi) * (pts[3] - pts[0]) + xi * (pts[2] - pts[1])
        return np.stack([dxi, deta], axis=1)
    return jac


def _invert_multilinear(kind, pts, y, tol):
    func = lambda x: eval_cell(kind, pts, x)
    jac = _jacobian_fn(kind, pts)
    sols = []
    for lo, h in _multilinear_boxes(kind, pts, y, tol * 10):
        x, ok = _newton(func, jac, lo + h / 2, y, tol)
        if ok:
            sols.append(x)
    return sols


def _cell_solutions(f: PiecewiseMap, c: int, y, tol):
    kind = f.complex.kinds[c]
    pts = f.cell_points(c)
    if kind in ("tri", "tet"):
        cand = _invert_simplex(pts, y)
    elif kind == "quad" and f.ambient == 2:
        cand = _invert_planar_quad(pts, y)
    else:
        cand = _invert_multilinear(kind, pts, y, tol)
    out = []
    for ref in cand:
        if not in_reference(kind, ref, REF_TOL):
            continue
        ref = np.clip(ref, 0.0, 1.0)
        if kind in ("quad", "hex"):
            x, ok = _newton(lambda r: eval_cell(kind, pts, r), _jacobian_fn(kind, pts), ref, y, tol, iters=3)
            if ok and in_reference(kind, x, REF_TOL):
                ref = x
        if np.linalg.norm(eval_cell(kind, pts, ref) - y) <= tol:
            out.append(ref)
    return out


def count_preimages(f: PiecewiseMap, y, immersion_verified: bool = True) -> PreimageCount:
    """Count the points of X mapped to y, deduplicating hits on shared faces."""
    if not immersion_verified:
        raise ImmersionNotVerified("preimage counting requires a verified interior immersion")
    y = np.asarray(y, dtype=float)
    scale = _scale(f)
    tol = RESIDUAL * scale
    lo, hi = f.cell_boxes
    slack = 1e-9 * scale
    cand = np.flatnonzero(np.all((lo - slack <= y) & (y <= hi + slack), axis=1))
    bfacets = set(f.complex.boundary_facets)
    sols, seen = [], []
    src_scale = max(1.0, float(np.linalg.norm(f.source.max(axis=0) - f.source.min(axis=0))))
    for c in cand:
        kind = f.complex.kinds[c]
        for ref in _cell_solutions(f, int(c), y, tol):
            for loc in on_reference_boundary(kind, ref, ON_BOUNDARY):
                if f.complex.cell_facets[c][loc] in bfacets:
                    raise PointOnImageBoundary(f"query {y.tolist()} lies on the image of the boundary")
            xs = f.evaluate(int(c), ref, which="source")
            if any(np.linalg.norm(xs - s) <= DEDUP * src_scale for s in seen):
                continue
            seen.append(xs)
            sols.append((int(c), tuple(float(t) for t in ref)))
    return PreimageCount(tuple(float(t) for t in y), len(sols), sols)


# ---------------------------------------------------------------------------
# sampling and degree


def sample_target_points(target: ExplicitDomain, rng: np.random.Generator):
    """Endless generator of jittered centroids of randomly chosen target cells."""
    cx = target.complex
    P = target.coords
    while True:
        c = int(rng.integers(cx.n_cells))
        kind = cx.kinds[c]
        pts = P[list(cx.cells[c])]
        diam = float(np.max(np.linalg.norm(pts[:, None] - pts[None], axis=2)))
        ref = reference_centroid(kind)
        if P.shape[1] == cx.dim:
            yield eval_cell(kind, pts, ref) + rng.uniform(-1e-3, 1e-3, size=P.shape[1]) * diam
        else:
            # stay on the realized surface: jitter in reference coordinates
            yield eval_cell(kind, pts, ref + rng.uniform(-1e-3, 1e-3, size=len(ref)))


@dataclass
class CoveringResult:
    degree: int
    counts: list
    points: list
    method: str = "preimage-sampling"
    chi_check: str = ""
    rejected: int = 0

    def evidence(self) -> dict:
        return {"degree": self.degree, "counts": self.counts, "points": self.points,
                "method": self.method, "chi_check": self.chi_check, "rejected_samples": self.rejected}


def sampled_counts(f: PiecewiseMap, target: ExplicitDomain, k: int = 7, seed: int = 0,
                   max_attempts: int = 50):
    """Preimage counts at k generic target points.

    A sample hitting the image of the boundary is discarded and redrawn, at
    most ``max_attempts`` times per point.
    """
    rng = np.random.default_rng(seed)
    gen = sample_target_points(target, rng)
    counts, points, rejected = [], [], 0
    for _ in range(k):
        for _attempt in range(max_attempts):
            y = next(gen)
            try:
                pc = count_preimages(f, y)
            except PointOnImageBoundary:
                rejected += 1
                continue
            counts.append(pc.count)
            points.append([float(t) for t in y])
            break
        else:
            raise PointOnImageBoundary(f"no generic sample found in {max_attempts} attempts")
    return counts, points, rejected


def covering_degree(f: PiecewiseMap, target: ExplicitDomain, hypotheses_verified: bool,
                    samples: int = 7, seed: int = 0, chi_x: int | None = None,
                    chi_y: int | None = None) -> CoveringResult:
    """Sheet count m of a map satisfying the covering hypotheses."""
    if not hypotheses_verified:
        raise HypothesesNotVerified("covering degree needs every covering hypothesis verified")
    counts, points, rejected = sampled_counts(f, target, samples, seed)
    if len(set(counts)) != 1:
        raise SamplesDisagree(counts)
    m = counts[0]
    chi_x = euler_characteristic(f.complex) if chi_x is None else chi_x
    chi_y = euler_characteristic(target.complex) if chi_y is None else chi_y
    if chi_y != 0:
        if chi_x != m * chi_y:
            raise InternalInconsistency(f"chi(X)={chi_x} but m*chi(Y)={m}*{chi_y}")
        note = f"chi(X) = {chi_x} = {m} * chi(Y)"
    else:
        note = "chi(Y) = 0, no Euler characteristic cross-check"
    return CoveringResult(m, counts, points, chi_check=note, rejected=rejected)
