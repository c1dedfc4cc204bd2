"""Independent reference computations shared by the test modules."""

import numpy as np

from mapcert.topology.complex import HEX_REFERENCE


def quad_jacobian_oracle(p, n=101):
    """Independent dense sampling of the bilinear Jacobian."""
    t = np.linspace(0, 1, n)
    xi, eta = np.meshgrid(t, t, indexing="ij")
    dxi = (1 - eta)[..., None] * (p[1] - p[0]) + eta[..., None] * (p[2] - p[3])
    deta = (1 - xi)[..., None] * (p[3] - p[0]) + xi[..., None] * (p[2] - p[1])
    return dxi[..., 0] * deta[..., 1] - dxi[..., 1] * deta[..., 0]


def hex_jacobian_oracle(p, n=21):
    t = np.linspace(0, 1, n)
    x, y, z = np.meshgrid(t, t, t, indexing="ij")
    ref = np.array(HEX_REFERENCE, dtype=float)
    grads = np.zeros(x.shape + (3, 3))
    for k, (a, b, c) in enumerate(ref):
        wx = x if a else 1 - x
        wy = y if b else 1 - y
        wz = z if c else 1 - z
        sx = 1 if a else -1
        sy = 1 if b else -1
        sz = 1 if c else -1
        d = np.stack([sx * wy * wz, wx * sy * wz, wx * wy * sz], axis=-1)
        grads += d[..., None, :] * p[k][None, None, None, :, None]
    return np.linalg.det(grads)


def shoelace(p):
    """Signed area of a planar polygon given in order."""
    x, y = np.asarray(p, dtype=float).T
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))
