"""Certified sign of the Jacobian determinant of per-cell interpolation maps.

Affine cells reduce to one orientation predicate. For a planar bilinear quad
the determinant is an affine function of the reference coordinates, so its
four corner values decide the sign exactly. For a trilinear hex it has
degree two in each reference variable; it is written in the tensor Bernstein
basis of degree (2, 2, 2) using exact integer arithmetic and subdivided until
all coefficients share a sign, a sign change is witnessed at exactly
evaluated points, or the depth/box budget runs out.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..topology.complex import HEX_REFERENCE
from .predicates import orient2d, orient3d


class Sign(enum.Enum):
    POSITIVE = 1
    NEGATIVE = -1
    ZERO = 0
    INDETERMINATE = 2


@dataclass(frozen=True)
class SignCertificate:
    sign: Sign
    sign_change: bool = False       # both signs witnessed at exact points
    witness: dict = field(default_factory=dict)
    depth: int = 0

    @property
    def strict(self) -> bool:
        return self.sign in (Sign.POSITIVE, Sign.NEGATIVE)

    @property
    def value(self) -> int:
        """+1/-1 for strict signs, 0 otherwise."""
        return self.sign.value if self.strict else 0


def _from_corner_signs(signs, corners) -> SignCertificate:
    signs = list(signs)
    if any(s == 0 for s in signs):
        i = signs.index(0)
        return SignCertificate(Sign.ZERO, witness={"corner": i, "point": corners[i]})
    if all(s > 0 for s in signs):
        return SignCertificate(Sign.POSITIVE)
    if all(s < 0 for s in signs):
        return SignCertificate(Sign.NEGATIVE)
    # report a corner with the minority sign
    npos = sum(s > 0 for s in signs)
    minority = 1 if npos <= len(signs) - npos else -1
    i = next(k for k, s in enumerate(signs) if s == minority)
    return SignCertificate(Sign.INDETERMINATE, sign_change=True,
                           witness={"corner": i, "point": corners[i], "corner_signs": signs})


QUAD_CORNERS = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))


def quad_corner_signs(p) -> list[int]:
    """Exact signs of the bilinear Jacobian at the four reference corners."""
    p0, p1, p2, p3 = p
    return [orient2d(p0, p1, p3), orient2d(p0, p1, p2), orient2d(p1, p2, p3), orient2d(p2, p3, p0)]


def bilinear_jacobian_certificate(quad) -> SignCertificate:
    """Sign certificate for a planar bilinear quad given counterclockwise over the unit square."""
    return _from_corner_signs(quad_corner_signs(quad), QUAD_CORNERS)


def affine_certificate(pts) -> SignCertificate:
    pts = [tuple(p) for p in pts]
    if len(pts) == 3:
        s = orient2d(*pts)
    elif len(pts) == 4:
        s = orient3d(*pts)
    else:
        raise ValueError("affine certificate needs a triangle in 2D or a tetrahedron in 3D")
    return _from_corner_signs([s], [(0.0,) * (len(pts) - 1)])


# ---------------------------------------------------------------------------
# trilinear hexahedra

def _to_scaled_ints(values) -> tuple[list[int], int]:
    """Integers n_i and a common denominator 2^k with values[i] = n_i / 2^k exactly."""
    ratios = [float(v).as_integer_ratio() for v in values]
    den = max(d for _, d in ratios)
    return [n * (den // d) for n, d in ratios], den


def _det3(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


_W = ((2, 0), (1, 1), (0, 2))     # 2 * (1 - t, t) at t = 0, 1/2, 1


def _hex_grid_values(hexpts):
    """Exact Jacobian values on {0, 1/2, 1}^3 scaled by 64 * den^3, and den."""
    flat = [x for p in hexpts for x in p]
    ints, den = _to_scaled_ints(flat)
    X = {}
    for n, (a, b, c) in enumerate(HEX_REFERENCE):
        X[(a, b, c)] = ints[3 * n:3 * n + 3]

    def diff(axis, j, k):
        lo = [0, 0, 0]
        hi = [0, 0, 0]
        others = [i for i in range(3) if i != axis]
        lo[others[0]] = hi[others[0]] = j
        lo[others[1]] = hi[others[1]] = k
        hi[axis] = 1
        p, q = X[tuple(hi)], X[tuple(lo)]
        return [p[t] - q[t] for t in range(3)]

    D = [[[diff(ax, j, k) for k in (0, 1)] for j in (0, 1)] for ax in range(3)]

    def partial(ax, u, v):
        # 4 * derivative along ax at transverse half-grid indices (u, v)
        wu, wv = _W[u], _W[v]
        return [sum(wu[j] * wv[k] * D[ax][j][k][t] for j in (0, 1) for k in (0, 1)) for t in range(3)]

    vals = np.empty((3, 3, 3), dtype=object)
    for i in range(3):
        for j in range(3):
            for k in range(3):
                vals[i, j, k] = _det3(partial(0, j, k), partial(1, i, k), partial(2, i, j))
    return vals, den


def _to_bernstein_axis(v, axis):
    v0 = np.take(v, 0, axis=axis)
    vh = np.take(v, 1, axis=axis)
    v2 = np.take(v, 2, axis=axis)
    return np.stack([2 * v0, 4 * vh - v0 - v2, 2 * v2], axis=axis)


def _scaled_bernstein(hexpts):
    vals, den = _hex_grid_values(hexpts)
    b = vals
    for ax in range(3):
        b = _to_bernstein_axis(b, ax)
    return b, 64 * 8 * den ** 3


def trilinear_bernstein(hexpts) -> np.ndarray:
    """The 27 Bernstein coefficients of the hex Jacobian determinant as exact Fractions."""
    b, scale = _scaled_bernstein(hexpts)
    out = np.empty((3, 3, 3), dtype=object)
    for idx in np.ndindex(3, 3, 3):
        out[idx] = Fraction(int(b[idx]), scale)
    return out


def _split(b, axis):
    b0 = np.take(b, 0, axis=axis)
    b1 = np.take(b, 1, axis=axis)
    b2 = np.take(b, 2, axis=axis)
    mid = b0 + 2 * b1 + b2
    left = np.stack([4 * b0, 2 * b0 + 2 * b1, mid], axis=axis)
    right = np.stack([mid, 2 * b1 + 2 * b2, 4 * b2], axis=axis)
    return left, right


_CORNER_IDX = [(i, j, k) for i in (0, 2) for j in (0, 2) for k in (0, 2)]


def _sgn(x):
    return (x > 0) - (x < 0)


def trilinear_jacobian_certificate(hexpts, max_depth: int = 8, max_boxes: int = 4096) -> SignCertificate:
    """Bernstein-subdivision sign certificate for a trilinear hex (VTK corner order).

    Boxes are processed breadth first. Corner Bernstein coefficients equal the
    exact (scaled) Jacobian at box corners, so they serve as point witnesses.
    """
    b, _ = _scaled_bernstein(hexpts)
    witness_pos = witness_neg = None
    unresolved = None
    queue = [((Fraction(0),) * 3, Fraction(1), b, 0)]
    processed = 0
    deepest = 0
    while queue:
        nxt = []
        for lo, h, coef, d in queue:
            processed += 1
            deepest = max(deepest, d)
            for ci in _CORNER_IDX:
                s = _sgn(coef[ci])
                pt = tuple(float(lo[t] + h * (ci[t] // 2)) for t in range(3))
                if s == 0:
                    return SignCertificate(Sign.ZERO, witness={"point": pt}, depth=d)
                if s > 0 and witness_pos is None:
                    witness_pos = pt
                elif s < 0 and witness_neg is None:
                    witness_neg = pt
            if witness_pos is not None and witness_neg is not None:
                return SignCertificate(Sign.INDETERMINATE, sign_change=True, depth=d,
                                       witness={"positive": witness_pos, "negative": witness_neg})
            flat = coef.ravel()
            if all(x > 0 for x in flat) or all(x < 0 for x in flat):
                continue
            if d >= max_depth or processed + len(nxt) >= max_boxes:
                if unresolved is None:
                    unresolved = {"box": (tuple(float(x) for x in lo), tuple(float(x + h) for x in lo)),
                                  "depth": d}
                continue
            children = [(lo, coef)]
            for ax in range(3):
                new = []
                for clo, cc in children:
                    left, right = _split(cc, ax)
                    rlo = list(clo)
                    rlo[ax] = clo[ax] + h / 2
                    new.append((clo, left))
                    new.append((tuple(rlo), right))
                children = new
            nxt.extend((clo, h / 2, cc, d + 1) for clo, cc in children)
        queue = nxt
        if unresolved is not None:
            break
    if unresolved is not None:
        return SignCertificate(Sign.INDETERMINATE, witness=unresolved, depth=deepest)
    return SignCertificate(Sign.POSITIVE if witness_pos is not None else Sign.NEGATIVE, depth=deepest)


def cell_certificate(kind: str, pts, max_depth: int = 8) -> SignCertificate:
    """Dispatch on cell kind: affine simplices, bilinear quads, trilinear hexes."""
    if kind in ("tri", "tet"):
        return affine_certificate(pts)
    if kind == "quad":
        return bilinear_jacobian_certificate(pts)
    if kind == "hex":
        return trilinear_jacobian_certificate(pts, max_depth=max_depth)
    raise ValueError(f"no Jacobian certificate for cell kind {kind!r}")


# ---------------------------------------------------------------------------
# floating-point evaluation (sampling, Newton)

def bilinear_eval(p, xi, eta):
    p = np.asarray(p, dtype=float)
    xi = np.asarray(xi, dtype=float)[..., None]
    eta = np.asarray(eta, dtype=float)[..., None]
    return ((1 - xi) * (1 - eta) * p[0] + xi * (1 - eta) * p[1]
            + xi * eta * p[2] + (1 - xi) * eta * p[3])


def bilinear_jacobian(p, xi, eta):
    """Jacobian determinant of the planar bilinear map at reference points."""
    p = np.asarray(p, dtype=float)
    xi = np.asarray(xi, dtype=float)[..., None]
    eta = np.asarray(eta, dtype=float)[..., None]
    dxi = (1 - eta) * (p[1] - p[0]) + eta * (p[2] - p[3])
    deta = (1 - xi) * (p[3] - p[0]) + xi * (p[2] - p[1])
    return dxi[..., 0] * deta[..., 1] - dxi[..., 1] * deta[..., 0]


_HEX_REF = np.array(HEX_REFERENCE, dtype=float)


def _hex_shape(xi, eta, zeta):
    r = _HEX_REF
    fx = np.where(r[:, 0] == 1, xi[..., None], 1 - xi[..., None])
    fy = np.where(r[:, 1] == 1, eta[..., None], 1 - eta[..., None])
    fz = np.where(r[:, 2] == 1, zeta[..., None], 1 - zeta[..., None])
    return fx, fy, fz


def trilinear_eval(p, xi, eta, zeta):
    p = np.asarray(p, dtype=float)
    xi, eta, zeta = (np.asarray(t, dtype=float) for t in (xi, eta, zeta))
    fx, fy, fz = _hex_shape(xi, eta, zeta)
    return (fx * fy * fz) @ p


def trilinear_derivatives(p, xi, eta, zeta):
    """(dx/dxi, dx/deta, dx/dzeta), each of shape (..., 3)."""
    p = np.asarray(p, dtype=float)
    xi, eta, zeta = (np.asarray(t, dtype=float) for t in (xi, eta, zeta))
    fx, fy, fz = _hex_shape(xi, eta, zeta)
    sx = np.where(_HEX_REF[:, 0] == 1, 1.0, -1.0)
    sy = np.where(_HEX_REF[:, 1] == 1, 1.0, -1.0)
    sz = np.where(_HEX_REF[:, 2] == 1, 1.0, -1.0)
    return (sx * fy * fz) @ p, (fx * sy * fz) @ p, (fx * fy * sz) @ p


def trilinear_jacobian(p, xi, eta, zeta):
    a, b, c = trilinear_derivatives(p, xi, eta, zeta)
    return np.einsum("...i,...i->...", a, np.cross(b, c))
