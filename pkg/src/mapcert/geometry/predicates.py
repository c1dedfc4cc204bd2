"""Robust orientation predicates.

A floating-point evaluation is accepted when its magnitude clears a
forward error bound; otherwise the determinant is recomputed exactly with
:class:`fractions.Fraction` (binary floats convert losslessly).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

_EPS = np.finfo(float).eps / 2          # 2^-53, unit roundoff
CCW_ERRBOUND = (3.0 + 16.0 * _EPS) * _EPS
O3D_ERRBOUND = (7.0 + 56.0 * _EPS) * _EPS


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def orient2d_exact(a, b, c) -> int:
    ax, ay = Fraction(float(a[0])), Fraction(float(a[1]))
    bx, by = Fraction(float(b[0])), Fraction(float(b[1]))
    cx, cy = Fraction(float(c[0])), Fraction(float(c[1]))
    return _sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def orient2d(a, b, c) -> int:
    """Sign of det[b - a, c - a]: +1 counterclockwise, -1 clockwise, 0 collinear."""
    detleft = (float(a[0]) - float(c[0])) * (float(b[1]) - float(c[1]))
    detright = (float(a[1]) - float(c[1])) * (float(b[0]) - float(c[0]))
    det = detleft - detright
    bound = CCW_ERRBOUND * (abs(detleft) + abs(detright))
    if det > bound or -det > bound:
        return _sign(det)
    return orient2d_exact(a, b, c)


def orient3d_exact(a, b, c, d) -> int:
    A = [Fraction(float(x)) for x in a]
    u = [Fraction(float(x)) - y for x, y in zip(b, A)]
    v = [Fraction(float(x)) - y for x, y in zip(c, A)]
    w = [Fraction(float(x)) - y for x, y in zip(d, A)]
    det = (u[0] * (v[1] * w[2] - v[2] * w[1])
           - u[1] * (v[0] * w[2] - v[2] * w[0])
           + u[2] * (v[0] * w[1] - v[1] * w[0]))
    return _sign(det)


def orient3d(a, b, c, d) -> int:
    """Sign of det[b - a, c - a, d - a]; +1 for a positively oriented tetrahedron."""
    ax, ay, az = float(a[0]), float(a[1]), float(a[2])
    ux, uy, uz = float(b[0]) - ax, float(b[1]) - ay, float(b[2]) - az
    vx, vy, vz = float(c[0]) - ax, float(c[1]) - ay, float(c[2]) - az
    wx, wy, wz = float(d[0]) - ax, float(d[1]) - ay, float(d[2]) - az
    t1 = vy * wz - vz * wy
    t2 = vx * wz - vz * wx
    t3 = vx * wy - vy * wx
    det = ux * t1 - uy * t2 + uz * t3
    perm = (abs(ux) * (abs(vy * wz) + abs(vz * wy))
            + abs(uy) * (abs(vx * wz) + abs(vz * wx))
            + abs(uz) * (abs(vx * wy) + abs(vy * wx)))
    bound = O3D_ERRBOUND * perm
    if det > bound or -det > bound:
        return _sign(det)
    return orient3d_exact(a, b, c, d)


def orient2d_batch(a, b, c) -> np.ndarray:
    """Vectorized :func:`orient2d` over stacked (N, 2) arrays."""
    a, b, c = (np.asarray(x, dtype=float) for x in (a, b, c))
    detleft = (a[:, 0] - c[:, 0]) * (b[:, 1] - c[:, 1])
    detright = (a[:, 1] - c[:, 1]) * (b[:, 0] - c[:, 0])
    det = detleft - detright
    bound = CCW_ERRBOUND * (np.abs(detleft) + np.abs(detright))
    out = np.sign(det).astype(np.int64)
    unsure = ~(np.abs(det) > bound)
    for i in np.flatnonzero(unsure):
        out[i] = orient2d_exact(a[i], b[i], c[i])
    return out


def orient3d_batch(a, b, c, d) -> np.ndarray:
    """Vectorized :func:`orient3d` over stacked (N, 3) arrays."""
    a, b, c, d = (np.asarray(x, dtype=float) for x in (a, b, c, d))
    u, v, w = b - a, c - a, d - a
    t1 = v[:, 1] * w[:, 2] - v[:, 2] * w[:, 1]
    t2 = v[:, 0] * w[:, 2] - v[:, 2] * w[:, 0]
    t3 = v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0]
    det = u[:, 0] * t1 - u[:, 1] * t2 + u[:, 2] * t3
    perm = (np.abs(u[:, 0]) * (np.abs(v[:, 1] * w[:, 2]) + np.abs(v[:, 2] * w[:, 1]))
            + np.abs(u[:, 1]) * (np.abs(v[:, 0] * w[:, 2]) + np.abs(v[:, 2] * w[:, 0]))
            + np.abs(u[:, 2]) * (np.abs(v[:, 0] * w[:, 1]) + np.abs(v[:, 1] * w[:, 0])))
    out = np.sign(det).astype(np.int64)
    unsure = ~(np.abs(det) > O3D_ERRBOUND * perm)
    for i in np.flatnonzero(unsure):
        out[i] = orient3d_exact(a[i], b[i], c[i], d[i])
    return out


def collinear3d(a, b, c) -> bool:
    """Exact test that three 3D points are collinear."""
    A = [Fraction(float(x)) for x in a]
    u = [Fraction(float(x)) - y for x, y in zip(b, A)]
    v = [Fraction(float(x)) - y for x, y in zip(c, A)]
    return (u[1] * v[2] - u[2] * v[1] == 0 and u[2] * v[0] - u[0] * v[2] == 0
            and u[0] * v[1] - u[1] * v[0] == 0)


def coplanar(a, b, c, d) -> bool:
    return orient3d(a, b, c, d) == 0
