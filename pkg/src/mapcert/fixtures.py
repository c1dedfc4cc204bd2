"""Canonical mesh and map generators used by the tests, the CLI and demos.

Every generator returns a :class:`Fixture`: one connectivity plus named
realizations. ``default`` is the reference (computational) embedding and,
where the fixture describes a map, ``physical`` is the target realization.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .topology.complex import HEX_REFERENCE, KINDS, CellComplex, boundary, build_complex


@dataclass
class Fixture:
    complex: CellComplex
    realizations: dict
    meta: dict = field(default_factory=dict)

    @property
    def default(self) -> np.ndarray:
        return self.realizations["default"]


def _quad_torus_cells(nu, nv, flip=False):
    """Quads on an nu x nv periodic grid; ``flip`` reverses v across the u-seam."""
    def vid(i, j):
        if i == nu:
            i = 0
            if flip:
                j = -j
        return i * nv + (j % nv)

    cells = []
    for i in range(nu):
        for j in range(nv):
            cells.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)))
    return cells


def _square_point(t):
    """Unit square perimeter (half-width 1) traversed counterclockwise, t in [0, 1)."""
    s = (t % 1.0) * 4
    side = min(int(math.floor(s + 1e-12)), 3)
    f = s - side
    if abs(f) < 1e-12:
        f = 0.0
    if side == 0:
        return 1.0, -1.0 + 2 * f
    if side == 1:
        return 1.0 - 2 * f, 1.0
    if side == 2:
        return -1.0, 1.0 - 2 * f
    return -1.0 + 2 * f, -1.0


def sphere(levels: int = 0) -> Fixture:
    """Octahedron projected to the unit sphere, refined ``levels`` times 4:1."""
    pts = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    tris = [(0, 2, 4), (2, 1, 4), (1, 3, 4), (3, 0, 4),
            (2, 0, 5), (1, 2, 5), (3, 1, 5), (0, 3, 5)]
    pts = [np.array(p, dtype=float) for p in pts]
    for _ in range(levels):
        mids = {}

        def mid(a, b):
            key = (a, b) if a < b else (b, a)
            if key not in mids:
                p = pts[a] + pts[b]
                pts.append(p / np.linalg.norm(p))
                mids[key] = len(pts) - 1
            return mids[key]

        new = []
        for a, b, c in tris:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
        tris = new
    cx = build_complex(tris, 2, len(pts), kinds=["tri"] * len(tris))
    return Fixture(cx, {"default": np.array(pts)}, {"classification": "sphere"})


def torus(nu: int = 4, nv: int = 4, R: float = 2.0, a: float = 0.5) -> Fixture:
    """Square-section tube revolved about the z axis.

    Section nodes run around the square; with nv a multiple of 4 every quad
    lies in a plane of constant radius or height, so it is exactly planar.
    """
    if nu < 3 or nv < 3:
        raise ValueError("torus needs nu, nv >= 3")
    cells = _quad_torus_cells(nu, nv)
    pts = np.zeros((nu * nv, 3))
    for i in range(nu):
        ang = 2 * math.pi * i / nu
        cu, su = math.cos(ang), math.sin(ang)
        for j in range(nv):
            sr, sz = _square_point(j / nv)
            rho = R + a * sr
            pts[i * nv + j] = (rho * cu, rho * su, a * sz)
    cx = build_complex(cells, 2, nu * nv, kinds=["quad"] * len(cells))
    return Fixture(cx, {"default": pts}, {"classification": "torus"})


def klein(nu: int = 4, nv: int = 4) -> Fixture:
    """Klein bottle: torus grid glued with a reflection across one seam.

    Coordinates are the flat parameter grid; there is no embedding.
    """
    if nu < 3 or nv < 3:
        raise ValueError("klein needs nu, nv >= 3")
    cells = _quad_torus_cells(nu, nv, flip=True)
    uu, vv = np.meshgrid(np.arange(nu) / nu, np.arange(nv) / nv, indexing="ij")
    pts = np.stack([uu, vv], axis=-1).reshape(-1, 2)
    cx = build_complex(cells, 2, nu * nv, kinds=["quad"] * len(cells))
    return Fixture(cx, {"default": pts}, {"classification": "klein bottle", "embedded": False})


def moebius(n: int = 5) -> Fixture:
    """Moebius band made of n x 2 quads with a half twist."""
    if n < 3:
        raise ValueError("moebius needs n >= 3")

    def vid(i, j):
        if i == n:
            return 2 - j
        return i * 3 + j

    cells = [(vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1))
             for i in range(n) for j in range(2)]
    pts = []
    for i in range(n):
        t = 2 * np.pi * i / n
        for j in range(3):
            w = (j - 1) * 0.4
            pts.append(((1 + w * np.cos(t / 2)) * np.cos(t), (1 + w * np.cos(t / 2)) * np.sin(t),
                        w * np.sin(t / 2)))
    cx = build_complex(cells, 2, 3 * n, kinds=["quad"] * len(cells))
    return Fixture(cx, {"default": np.array(pts)},
                   {"classification": "moebius band", "embedded": False})


def rect_grid(nx: int = 10, ny: int = 10) -> Fixture:
    def vid(i, j):
        return j * (nx + 1) + i

    cells = [(vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1))
             for j in range(ny) for i in range(nx)]
    xx, yy = np.meshgrid(np.arange(nx + 1) / nx, np.arange(ny + 1) / ny, indexing="xy")
    pts = np.stack([xx.ravel(), yy.ravel()], axis=-1)
    cx = build_complex(cells, 2, (nx + 1) * (ny + 1), kinds=["quad"] * len(cells))
    return Fixture(cx, {"default": pts}, {"classification": "disk", "nx": nx, "ny": ny})


def disk(rings: int = 3, sectors: int = 12) -> Fixture:
    """Polar disk: a triangle fan at the centre and quads outside (hybrid mesh)."""
    if sectors < 3 or rings < 1:
        raise ValueError("disk needs rings >= 1, sectors >= 3")
    cells, kinds = [], []
    for s in range(sectors):
        cells.append((0, 1 + s, 1 + (s + 1) % sectors))
        kinds.append("tri")
    for k in range(rings - 1):
        for s in range(sectors):
            a = 1 + k * sectors
            b = a + sectors
            cells.append((a + s, b + s, b + (s + 1) % sectors, a + (s + 1) % sectors))
            kinds.append("quad")
    th = 2 * np.pi * np.arange(sectors) / sectors
    pts = [(0.0, 0.0)]
    for k in range(1, rings + 1):
        r = k / rings
        pts += list(zip(r * np.cos(th), r * np.sin(th)))
    cx = build_complex(cells, 2, 1 + rings * sectors, kinds=kinds)
    return Fixture(cx, {"default": np.array(pts)}, {"classification": "disk"})


def annulus(rings: int = 2, sectors: int = 16, r0: float = 1.0, r1: float = 2.0) -> Fixture:
    """Structured polar ring: ``rings`` radial layers of quads between r0 and r1."""
    if sectors < 3 or rings < 1 or not 0 < r0 < r1:
        raise ValueError("annulus needs rings >= 1, sectors >= 3, 0 < r0 < r1")
    cells = []
    for k in range(rings):
        a = k * sectors
        b = a + sectors
        for s in range(sectors):
            cells.append((a + s, b + s, b + (s + 1) % sectors, a + (s + 1) % sectors))
    th = 2 * np.pi * np.arange(sectors) / sectors
    pts = []
    for k in range(rings + 1):
        r = r0 + (r1 - r0) * k / rings
        pts += list(zip(r * np.cos(th), r * np.sin(th)))
    cx = build_complex(cells, 2, (rings + 1) * sectors, kinds=["quad"] * len(cells))
    return Fixture(cx, {"default": np.array(pts)}, {"classification": "annulus"})


def _polygon_point(radius, t, corners):
    """Point at parameter t in [0, 1) on a regular polygon with given corner count."""
    x = t * corners
    c = int(math.floor(x + 1e-12)) % corners
    f = x - math.floor(x + 1e-12)
    a0 = 2 * math.pi * c / corners
    a1 = 2 * math.pi * (c + 1) / corners
    p0 = np.array([radius * math.cos(a0), radius * math.sin(a0)])
    p1 = np.array([radius * math.cos(a1), radius * math.sin(a1)])
    if f == 0:
        return p0
    return p0 + f * (p1 - p0)


def double_cover_annulus(rings: int = 3, sectors: int = 16) -> Fixture:
    """Annulus map that doubles the angle.

    The reference annulus is a regular (sectors/2)-gon ring whose edges carry
    one midpoint vertex each; ``physical`` sends vertex j of every ring to
    polygon corner j mod (sectors/2), so the target image wraps twice around
    the same polygonal annulus and its boundary lies exactly on the reference
    boundary.
    """
    if sectors % 2 or sectors < 6 or rings < 1:
        raise ValueError("double-cover-annulus needs an even sectors >= 6 and rings >= 1")
    half = sectors // 2
    fx = annulus(rings, sectors)
    src, dst = [], []
    for k in range(rings + 1):
        r = 1.0 + k / rings
        for j in range(sectors):
            if j % 2 == 0:
                src.append(_polygon_point(r, (j // 2) / half, half))
            else:
                a = _polygon_point(r, ((j - 1) // 2) / half, half)
                b = _polygon_point(r, (((j + 1) // 2) % half) / half, half)
                src.append(0.5 * (a + b))
            dst.append(_polygon_point(r, (j % half) / half, half))
    return Fixture(fx.complex, {"default": np.array(src), "physical": np.array(dst)},
                   {"classification": "annulus", "degree": 2})


def _hex_lattice(shape, present=None):
    """Hexes of a structured (nx, ny, nz) block; ``present`` masks voxels."""
    nx, ny, nz = shape

    def vid(i, j, k):
        return (k * (ny + 1) + j) * (nx + 1) + i

    cells = []
    for k in range(nz):
        for j in range(ny):
            for i in range(nx):
                if present is not None and not present[i, j, k]:
                    continue
                cells.append(tuple(vid(i + a, j + b, k + c) for a, b, c in HEX_REFERENCE))
    return cells, (nx + 1) * (ny + 1) * (nz + 1)


def _compact(cells, pts):
    used = sorted({v for c in cells for v in c})
    local = {v: i for i, v in enumerate(used)}
    return [tuple(local[v] for v in c) for c in cells], np.asarray(pts)[used]


def ball_hex(n: int = 3) -> Fixture:
    """Structured n^3 hex grid of the unit cube."""
    cells, nv = _hex_lattice((n, n, n))
    g = np.arange(n + 1) / n
    zz, yy, xx = np.meshgrid(g, g, g, indexing="ij")
    pts = np.stack([xx.ravel(), yy.ravel(), zz.ravel()], axis=-1)
    cx = build_complex(cells, 3, nv, kinds=["hex"] * len(cells))
    return Fixture(cx, {"default": pts}, {"classification": "ball"})


def _revolved_hexes(nu, na, nb, wrap_b, point):
    """Hexes on an (a, u, b) grid revolved around the z axis.

    Reference axes are ordered (a, u, b) so that a positive cross-section
    frame (a, b) yields positively oriented hexes. ``point(a, b)`` returns the
    cross-section coordinates (rho, z).
    """
    nbv = nb if wrap_b else nb + 1

    def vid(a, u, b):
        return (u % nu) * ((na + 1) * nbv) + a * nbv + (b % nbv if wrap_b else b)

    cells = []
    for u in range(nu):
        for a in range(na):
            for b in range(nb):
                cells.append(tuple(vid(a + x, u + y, b + z) for x, y, z in HEX_REFERENCE))
    pts = np.zeros((nu * (na + 1) * nbv, 3))
    for u in range(nu):
        ang = 2 * math.pi * u / nu
        cu, su = math.cos(ang), math.sin(ang)
        for a in range(na + 1):
            for b in range(nbv):
                rho, z = point(a, b)
                pts[vid(a, u, b)] = (rho * cu, rho * su, z)
    return cells, pts


def solid_torus(nu: int = 8, nv: int = 2, nw: int = 2, R: float = 2.0, a: float = 0.5) -> Fixture:
    """Square-section solid torus: nv x nw quads in the section, nu around."""
    if nu < 3:
        raise ValueError("solid-torus needs nu >= 3")

    def point(i, k):
        return R - a + 2 * a * i / nv, -a + 2 * a * k / nw

    cells, pts = _revolved_hexes(nu, nv, nw, False, point)
    cx = build_complex(cells, 3, len(pts), kinds=["hex"] * len(cells))
    return Fixture(cx, {"default": pts}, {"classification": "solid torus"})


def torus_shell(nu: int = 8, nv: int = 8, nw: int = 1, R: float = 3.0,
                a0: float = 0.5, a1: float = 1.0) -> Fixture:
    """Torus x interval: solid square-section torus with a smaller one removed.

    ``nv`` (multiple of 4) nodes run around the square section, ``nw`` layers
    go from the inner square (half-width a0) to the outer one (a1). Both
    boundary tori consist of exactly planar quads.
    """
    if nv % 4 or nv < 4 or nu < 3 or nw < 1:
        raise ValueError("torus-shell needs nv a positive multiple of 4, nu >= 3, nw >= 1")

    def point(k, j):
        half = a0 + (a1 - a0) * k / nw
        sr, sz = _square_point(j / nv)
        return R + half * sr, half * sz

    cells, pts = _revolved_hexes(nu, nw, nv, True, point)
    cx = build_complex(cells, 3, len(pts), kinds=["hex"] * len(cells))
    return Fixture(cx, {"default": pts}, {"classification": "torus shell"})


def handlebody_surface(genus: int = 0, holes: int = 0, scale: int = 2) -> Fixture:
    """Closed orientable genus-g surface minus ``holes`` open quads.

    The surface is the boundary of a voxel plate with ``genus`` square
    tunnels; removed quads are chosen with pairwise disjoint vertex sets.
    """
    if genus < 0 or holes < 0:
        raise ValueError("genus and holes must be non-negative")
    s = scale
    nx, ny, nz = (2 * genus + 1) * s, 3 * s, s
    present = np.ones((nx, ny, nz), dtype=bool)
    for h in range(genus):
        present[(2 * h + 1) * s:(2 * h + 2) * s, s:2 * s, :] = False
    cells, nv = _hex_lattice((nx, ny, nz), present)
    zz, yy, xx = np.meshgrid(np.arange(nz + 1), np.arange(ny + 1), np.arange(nx + 1), indexing="ij")
    lattice = np.stack([xx.ravel(), yy.ravel(), zz.ravel()], axis=-1).astype(float)
    cells, lattice = _compact(cells, lattice)
    solid = build_complex(cells, 3, len(lattice), kinds=["hex"] * len(cells))
    bnd = boundary(solid)
    surf = bnd.complex
    pts = lattice[bnd.parent_vertices]
    faces = list(surf.cells)
    removed = []
    blocked = set()
    step = max(1, len(faces) // max(holes, 1))
    order = list(range(0, len(faces), step)) + list(range(len(faces)))
    for f in order:
        if len(removed) == holes:
            break
        if f in removed or blocked.intersection(faces[f]):
            continue
        removed.append(f)
        blocked.update(faces[f])
        for other in range(len(faces)):
            if set(faces[other]) & set(faces[f]):
                blocked.update(faces[other])
    if len(removed) < holes:
        raise ValueError("surface too coarse for the requested number of holes")
    keep = [faces[i] for i in range(len(faces)) if i not in set(removed)]
    keep, pts = _compact(keep, pts)
    cx = build_complex(keep, 2, len(pts), kinds=["quad"] * len(keep))
    return Fixture(cx, {"default": pts}, {"genus": genus, "boundary_curves": holes})


# ---------------------------------------------------------------------------
# map fixtures derived from a base mesh


def _opposite_corner(kind: str, i: int):
    if kind == "quad":
        return (i + 2) % 4
    if kind == "hex":
        a, b, c = HEX_REFERENCE[i]
        return HEX_REFERENCE.index((1 - a, 1 - b, 1 - c))
    return None


def tangle(fx: Fixture, cell: int, base: str | None = None) -> Fixture:
    """Invert ``cell`` by pushing one of its interior vertices past the opposite corner/face."""
    cx = fx.complex
    if not 0 <= cell < cx.n_cells:
        raise ValueError(f"cell {cell} out of range")
    base = base or ("physical" if "physical" in fx.realizations else "default")
    pts = np.array(fx.realizations[base], dtype=float)
    bnd_verts = set(boundary(cx, check=False).parent_vertices.tolist())
    verts = cx.cells[cell]
    kind = cx.kinds[cell]
    choice = next((i for i, v in enumerate(verts) if v not in bnd_verts), None)
    if choice is None:
        raise ValueError(f"cell {cell} has no interior vertex to displace")
    v = verts[choice]
    opp = _opposite_corner(kind, choice)
    if opp is not None:
        target = pts[verts[opp]]
    else:
        others = [verts[j] for j in range(len(verts)) if j != choice]
        target = pts[others].mean(axis=0)
    pts[v] = target + 0.25 * (target - pts[v])
    reals = dict(fx.realizations)
    reals["physical"] = pts
    if base != "default" and "default" not in reals:
        reals["default"] = fx.realizations[base]
    meta = dict(fx.meta, tangled_cell=cell, displaced_vertex=int(v))
    return Fixture(cx, reals, meta)


def tangle_random(fx: Fixture, seed: int = 0, amplitude: float = 0.1, base: str | None = None) -> Fixture:
    """Jitter every interior vertex by ``amplitude`` times the mean edge length."""
    cx = fx.complex
    base = base or ("physical" if "physical" in fx.realizations else "default")
    pts = np.array(fx.realizations[base], dtype=float)
    e = cx.edges
    h = float(np.mean(np.linalg.norm(pts[e[:, 0]] - pts[e[:, 1]], axis=1))) if len(e) else 1.0
    bnd_verts = set(boundary(cx, check=False).parent_vertices.tolist())
    rng = np.random.default_rng(seed)
    interior = np.array([v for v in range(cx.n_vertices) if v not in bnd_verts], dtype=np.int64)
    pts[interior] += rng.uniform(-amplitude * h, amplitude * h, size=(len(interior), pts.shape[1]))
    reals = dict(fx.realizations)
    reals["physical"] = pts
    return Fixture(cx, reals, dict(fx.meta, random_seed=seed, amplitude=amplitude))


def tfi(curves: dict) -> Fixture:
    """Transfinite interpolation grid from four boundary polylines.

    ``curves`` maps ``bottom``/``top`` (nx+1 points, left to right) and
    ``left``/``right`` (ny+1 points, bottom to top) to point lists whose
    corners agree. ``default`` is the uniform unit-square grid.
    """
    B = np.asarray(curves["bottom"], dtype=float)
    T = np.asarray(curves["top"], dtype=float)
    L = np.asarray(curves["left"], dtype=float)
    Rt = np.asarray(curves["right"], dtype=float)
    if len(B) != len(T) or len(L) != len(Rt) or len(B) < 2 or len(L) < 2:
        raise ValueError("opposite boundary curves must have equal point counts (>= 2)")
    for p, q in ((B[0], L[0]), (B[-1], Rt[0]), (T[0], L[-1]), (T[-1], Rt[-1])):
        if not np.allclose(p, q):
            raise ValueError("boundary curve corners do not match")
    nx, ny = len(B) - 1, len(L) - 1
    fx = rect_grid(nx, ny)
    xi = np.arange(nx + 1) / nx
    eta = np.arange(ny + 1) / ny
    pts = np.zeros(((nx + 1) * (ny + 1), B.shape[1]))
    for j in range(ny + 1):
        for i in range(nx + 1):
            s, t = xi[i], eta[j]
            p = ((1 - t) * B[i] + t * T[i] + (1 - s) * L[j] + s * Rt[j]
                 - ((1 - s) * (1 - t) * B[0] + s * (1 - t) * B[-1]
                    + (1 - s) * t * T[0] + s * t * T[-1]))
            pts[j * (nx + 1) + i] = p
    # boundary nodes take the given curve points exactly
    for i in range(nx + 1):
        pts[i] = B[i]
        pts[ny * (nx + 1) + i] = T[i]
    for j in range(ny + 1):
        pts[j * (nx + 1)] = L[j]
        pts[j * (nx + 1) + nx] = Rt[j]
    return Fixture(fx.complex, {"default": fx.default, "physical": pts}, {"classification": "disk"})


def load_curves(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


GENERATORS = {
    "sphere": (sphere, ("levels",)),
    "torus": (torus, ("nu", "nv")),
    "klein": (klein, ("nu", "nv")),
    "moebius": (moebius, ("n",)),
    "disk": (disk, ("rings", "sectors")),
    "annulus": (annulus, ("rings", "sectors", "r0", "r1")),
    "rect-grid": (rect_grid, ("nx", "ny")),
    "ball-hex": (ball_hex, ("n",)),
    "solid-torus": (solid_torus, ("nu", "nv", "nw")),
    "torus-shell": (torus_shell, ("nu", "nv", "nw")),
    "double-cover-annulus": (double_cover_annulus, ("rings", "sectors")),
    "surface": (handlebody_surface, ("genus", "holes")),
}
