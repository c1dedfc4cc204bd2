"""Exact segment/segment (2D) and triangle/triangle (3D) intersection classes."""

from __future__ import annotations

import enum
from fractions import Fraction

from ..errors import DegenerateSegment, DegenerateTriangle
from .predicates import collinear3d, orient2d, orient3d


class SegClass(enum.Enum):
    DISJOINT = "Disjoint"
    SHARED_ENDPOINT = "SharedEndpoint"
    PROPER_CROSS = "ProperCross"
    OVERLAP = "Overlap"
    TOUCH_INTERIOR = "TouchInterior"


class TriClass(enum.Enum):
    DISJOINT = "Disjoint"
    SHARED_FEATURE = "SharedFeature"
    IMPROPER_CONTACT = "ImproperContact"


def _pt(p):
    return tuple(float(x) for x in p)


def _on_segment(p, q, r) -> bool:
    """r collinear with pq: is r in the closed segment?"""
    return (min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]))


def segment_intersection(s1, s2) -> SegClass:
    """Classify the intersection of two closed 2D segments exactly.

    SharedEndpoint means the segments meet in exactly one point that is an
    endpoint of both.
    """
    p1, q1 = _pt(s1[0]), _pt(s1[1])
    p2, q2 = _pt(s2[0]), _pt(s2[1])
    if p1 == q1 or p2 == q2:
        raise DegenerateSegment("segment with coincident endpoints")
    o1 = orient2d(p1, q1, p2)
    o2 = orient2d(p1, q1, q2)
    o3 = orient2d(p2, q2, p1)
    o4 = orient2d(p2, q2, q1)
    if o1 == 0 and o2 == 0:
        # collinear: compare parameter intervals along the dominant axis
        ax = 0 if abs(q1[0] - p1[0]) >= abs(q1[1] - p1[1]) else 1
        a0, a1 = sorted((p1[ax], q1[ax]))
        b0, b1 = sorted((p2[ax], q2[ax]))
        lo, hi = max(a0, b0), min(a1, b1)
        if lo < hi:
            return SegClass.OVERLAP
        if lo == hi:
            return SegClass.SHARED_ENDPOINT
        return SegClass.DISJOINT
    if o1 * o2 < 0 and o3 * o4 < 0:
        return SegClass.PROPER_CROSS
    if {p1, q1} & {p2, q2}:
        # one common endpoint; non-collinear lines meet in at most one point
        return SegClass.SHARED_ENDPOINT
    touch = ((o1 == 0 and _on_segment(p1, q1, p2)) or (o2 == 0 and _on_segment(p1, q1, q2))
             or (o3 == 0 and _on_segment(p2, q2, p1)) or (o4 == 0 and _on_segment(p2, q2, q1)))
    return SegClass.TOUCH_INTERIOR if touch else SegClass.DISJOINT


# ---------------------------------------------------------------------------
# 3D triangles

def _fr(p):
    return [Fraction(x) for x in p]


def _sub(a, b):
    return [x - y for x, y in zip(a, b)]


def _cross(a, b):
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _normal(t):
    a, b, c = (_fr(p) for p in t)
    return _cross(_sub(b, a), _sub(c, a))


def _drop_axis(n) -> int:
    return max(range(3), key=lambda i: abs(n[i]))


def _proj(p, ax):
    return tuple(p[i] for i in range(3) if i != ax)


def _point_in_tri2d(p, a, b, c) -> bool:
    s1, s2, s3 = orient2d(a, b, p), orient2d(b, c, p), orient2d(c, a, p)
    return (s1 >= 0 and s2 >= 0 and s3 >= 0) or (s1 <= 0 and s2 <= 0 and s3 <= 0)


def _seg_tri_coplanar(p, q, t, ax) -> bool:
    a, b, c = (_proj(x, ax) for x in t)
    p2, q2 = _proj(p, ax), _proj(q, ax)
    if _point_in_tri2d(p2, a, b, c) or _point_in_tri2d(q2, a, b, c):
        return True
    for u, v in ((a, b), (b, c), (c, a)):
        if segment_intersection((p2, q2), (u, v)) is not SegClass.DISJOINT:
            return True
    return False


def segment_meets_triangle(p, q, t) -> bool:
    """Closed segment pq against closed triangle t in R^3, exactly."""
    a, b, c = t
    op, oq = orient3d(a, b, c, p), orient3d(a, b, c, q)
    if op * oq > 0:
        return False
    if op == 0 and oq == 0:
        return _seg_tri_coplanar(p, q, t, _drop_axis(_normal(t)))
    s1, s2, s3 = orient3d(p, q, a, b), orient3d(p, q, b, c), orient3d(p, q, c, a)
    return (s1 >= 0 and s2 >= 0 and s3 >= 0) or (s1 <= 0 and s2 <= 0 and s3 <= 0)


def triangles_meet(t1, t2) -> bool:
    """Exact closed-triangle intersection test (no shared features assumed)."""
    for i in range(3):
        if segment_meets_triangle(t1[i], t1[(i + 1) % 3], t2):
            return True
        if segment_meets_triangle(t2[i], t2[(i + 1) % 3], t1):
            return True
    return False


def _ray_in_wedge(r, e1, e2, n) -> bool:
    """Ray r (in the wedge plane, normal n = e1 x e2) lies in the closed wedge."""
    return _dot(_cross(e1, r), n) >= 0 and _dot(_cross(r, e2), n) >= 0


def _wedges_overlap(u, a, b) -> bool:
    """Do the corner cones at shared apex u of triangles (u, a1, a2) and (u, b1, b2) share a ray?"""
    U = _fr(u)
    e1, e2 = _sub(_fr(a[0]), U), _sub(_fr(a[1]), U)
    f1, f2 = _sub(_fr(b[0]), U), _sub(_fr(b[1]), U)
    n1, n2 = _cross(e1, e2), _cross(f1, f2)
    d = _cross(n1, n2)
    if any(d):
        for r in (d, [-x for x in d]):
            if _ray_in_wedge(r, e1, e2, n1) and _ray_in_wedge(r, f1, f2, n2):
                return True
        return False
    # coplanar cones: some boundary ray of one lies in the other
    return (_ray_in_wedge(f1, e1, e2, n1) or _ray_in_wedge(f2, e1, e2, n1)
            or _ray_in_wedge(e1, f1, f2, n2) or _ray_in_wedge(e2, f1, f2, n2))


def triangle_intersection(t1, t2, shared=()) -> TriClass:
    """Classify two closed triangles in R^3.

    ``shared`` lists pairs (i, j) declaring t1[i] and t2[j] to be the same
    source vertex. The result is SharedFeature only when the intersection is
    exactly the declared common vertex or edge.
    """
    t1 = [_pt(p) for p in t1]
    t2 = [_pt(p) for p in t2]
    for t in (t1, t2):
        if collinear3d(*t):
            raise DegenerateTriangle("triangle with collinear vertices")
    shared = list(shared)
    for i, j in shared:
        if t1[i] != t2[j]:
            return TriClass.IMPROPER_CONTACT if triangles_meet(t1, t2) else TriClass.DISJOINT
    if not shared:
        return TriClass.IMPROPER_CONTACT if triangles_meet(t1, t2) else TriClass.DISJOINT
    if len(shared) >= 3:
        return TriClass.IMPROPER_CONTACT
    if len(shared) == 2:
        (i0, j0), (i1, j1) = shared
        a = next(k for k in range(3) if k not in (i0, i1))
        b = next(k for k in range(3) if k not in (j0, j1))
        u, v = t1[i0], t1[i1]
        if orient3d(u, v, t1[a], t2[b]) != 0:
            return TriClass.SHARED_FEATURE
        U = _fr(u)
        e = _sub(_fr(v), U)
        n1 = _cross(e, _sub(_fr(t1[a]), U))
        n2 = _cross(e, _sub(_fr(t2[b]), U))
        return TriClass.IMPROPER_CONTACT if _dot(n1, n2) > 0 else TriClass.SHARED_FEATURE
    (i0, j0), = shared
    a = [t1[k] for k in range(3) if k != i0]
    b = [t2[k] for k in range(3) if k != j0]
    if _wedges_overlap(t1[i0], a, b):
        return TriClass.IMPROPER_CONTACT
    return TriClass.SHARED_FEATURE
