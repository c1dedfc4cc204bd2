"""Combinatorial cell complexes (triangles, quads, tets, hexes) and their skeleta."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ..errors import DegenerateCell, MixedDimension, NotManifold, OutOfRangeIndex


@dataclass(frozen=True)
class CellKind:
    name: str
    dim: int
    nverts: int
    # codimension-1 faces as local vertex tuples, oriented outward for a
    # positively ordered cell
    facets: tuple
    edges: tuple
    # per corner: local indices of the neighbours along the cell edges,
    # ordered so that a positively oriented cell has a positive corner frame
    corners: tuple = ()


def _hex_corners():
    ref = HEX_REFERENCE
    out = []
    for a, b, c in ref:
        nx = ref.index((1 - a, b, c))
        ny = ref.index((a, 1 - b, c))
        nz = ref.index((a, b, 1 - c))
        out.append((nx, ny, nz) if (a + b + c) % 2 == 0 else (nx, nz, ny))
    return tuple(out)


HEX_REFERENCE = ((0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
                 (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1))
QUAD_REFERENCE = ((0, 0), (1, 0), (1, 1), (0, 1))

KINDS = {
    "vertex": CellKind("vertex", 0, 1, (), ()),
    "seg": CellKind("seg", 1, 2, ((0,), (1,)), ((0, 1),)),
    "tri": CellKind("tri", 2, 3, ((0, 1), (1, 2), (2, 0)), ((0, 1), (1, 2), (2, 0)),
                    ((1, 2), (2, 0), (0, 1))),
    "quad": CellKind("quad", 2, 4, ((0, 1), (1, 2), (2, 3), (3, 0)),
                     ((0, 1), (1, 2), (2, 3), (3, 0)),
                     ((1, 3), (2, 0), (3, 1), (0, 2))),
    "tet": CellKind("tet", 3, 4, ((1, 2, 3), (0, 3, 2), (0, 1, 3), (0, 2, 1)),
                    ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)),
                    ((1, 2, 3), (0, 3, 2), (3, 0, 1), (2, 1, 0))),
    "hex": CellKind("hex", 3, 8,
                    ((0, 3, 2, 1), (4, 5, 6, 7), (0, 1, 5, 4),
                     (3, 7, 6, 2), (0, 4, 7, 3), (1, 2, 6, 5)),
                    ((0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6),
                     (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7))),
}
KINDS["hex"] = CellKind(**{**KINDS["hex"].__dict__, "corners": _hex_corners()})


def facet_kind(nverts: int) -> str:
    return {1: "vertex", 2: "seg", 3: "tri", 4: "quad"}[nverts]


def same_orientation(a: Sequence[int], b: Sequence[int]) -> bool:
    """True if two oriented facets on the same vertex set agree in orientation.

    Segments compare directly; polygons compare as cyclic sequences.
    """
    if len(a) <= 2:
        return tuple(a) == tuple(b)
    k = list(b).index(a[0])
    n = len(a)
    return all(a[i] == b[(k + i) % n] for i in range(n))


class CellComplex:
    """An immutable pure-dimensional complex built from tagged vertex tuples.

    Derived skeleta are computed lazily and cached. Codimension-1 cells are
    called *facets* and carry the list of (cell, local facet index) cofacets.
    """

    def __init__(self, dim: int, n_vertices: int, cells: Sequence[tuple], kinds: Sequence[str]):
        self.dim = dim
        self.n_vertices = n_vertices
        self.cells = tuple(tuple(int(v) for v in c) for c in cells)
        self.kinds = tuple(kinds)

    def __repr__(self):
        return f"CellComplex(dim={self.dim}, vertices={self.n_vertices}, cells={len(self.cells)})"

    def __eq__(self, other):
        return (isinstance(other, CellComplex) and self.dim == other.dim
                and self.n_vertices == other.n_vertices
                and self.cells == other.cells and self.kinds == other.kinds)

    def __hash__(self):
        return hash((self.dim, self.n_vertices, self.cells, self.kinds))

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    def kind(self, c: int) -> CellKind:
        return KINDS[self.kinds[c]]

    @cached_property
    def _facet_data(self):
        index: dict = {}
        oriented: list = []
        cofacets: list = []
        cell_facets = []
        for ci, (cell, kname) in enumerate(zip(self.cells, self.kinds)):
            ids = []
            for li, loc in enumerate(KINDS[kname].facets):
                f = tuple(cell[i] for i in loc)
                key = tuple(sorted(f))
                fid = index.get(key)
                if fid is None:
                    fid = len(oriented)
                    index[key] = fid
                    oriented.append(f)
                    cofacets.append([])
                cofacets[fid].append((ci, li))
                ids.append(fid)
            cell_facets.append(tuple(ids))
        # canonical order: sort by key, then remap
        keys = sorted(index)
        remap = np.empty(len(keys), dtype=np.int64)
        for new, key in enumerate(keys):
            remap[index[key]] = new
        oriented_s = [None] * len(keys)
        cof_s = [None] * len(keys)
        for old, f in enumerate(oriented):
            oriented_s[remap[old]] = f
            cof_s[remap[old]] = tuple(cofacets[old])
        cell_facets = tuple(tuple(int(remap[i]) for i in ids) for ids in cell_facets)
        return ({k: i for i, k in enumerate(keys)}, tuple(oriented_s), tuple(cof_s), cell_facets)

    @property
    def facet_index(self) -> dict:
        return self._facet_data[0]

    @property
    def facets(self) -> tuple:
        """Oriented representative of each facet, in canonical (sorted-key) order."""
        return self._facet_data[1]

    @property
    def facet_cofacets(self) -> tuple:
        return self._facet_data[2]

    @property
    def cell_facets(self) -> tuple:
        return self._facet_data[3]

    @cached_property
    def edges(self) -> np.ndarray:
        """Sorted (E, 2) array of vertex pairs with a < b."""
        if self.dim == 0:
            return np.zeros((0, 2), dtype=np.int64)
        seen = set()
        for cell, kname in zip(self.cells, self.kinds):
            for i, j in KINDS[kname].edges:
                a, b = cell[i], cell[j]
                seen.add((a, b) if a < b else (b, a))
        if not seen:
            return np.zeros((0, 2), dtype=np.int64)
        return np.array(sorted(seen), dtype=np.int64)

    @cached_property
    def edge_index(self) -> dict:
        return {(int(a), int(b)): i for i, (a, b) in enumerate(self.edges)}

    @cached_property
    def faces(self) -> tuple:
        """Oriented 2-cells: the top cells in 2D, the facets in 3D."""
        if self.dim == 2:
            return self.cells
        if self.dim == 3:
            return self.facets
        return ()

    @cached_property
    def f_vector(self) -> tuple:
        counts = [self.n_vertices]
        if self.dim >= 1:
            counts.append(len(self.edges))
        if self.dim >= 2:
            counts.append(len(self.faces))
        if self.dim >= 3:
            counts.append(len(self.cells))
        return tuple(counts)

    @cached_property
    def boundary_facets(self) -> tuple:
        return tuple(i for i, cf in enumerate(self.facet_cofacets) if len(cf) == 1)

    @cached_property
    def vertex_cells(self) -> tuple:
        inc = [[] for _ in range(self.n_vertices)]
        for ci, cell in enumerate(self.cells):
            for v in cell:
                inc[v].append(ci)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def used_vertices(self) -> np.ndarray:
        mask = np.zeros(self.n_vertices, dtype=bool)
        for cell in self.cells:
            mask[list(cell)] = True
        return mask

    def is_closed(self) -> bool:
        return not self.boundary_facets


def build_complex(cells: Iterable, n: int, vertex_count: int, kinds: Sequence[str] | None = None) -> CellComplex:
    """Validate tagged cells and return a :class:`CellComplex`.

    ``cells`` holds either ``(kind, vertices)`` pairs or bare vertex tuples
    accompanied by a parallel ``kinds`` sequence.
    """
    cells = list(cells)
    if kinds is None:
        kinds = [k for k, _ in cells]
        verts = [tuple(v) for _, v in cells]
    else:
        kinds = list(kinds)
        verts = [tuple(v) for v in cells]
        if len(kinds) != len(verts):
            raise MixedDimension("kinds and cells differ in length")
    seen = set()
    for ci, (k, cell) in enumerate(zip(kinds, verts)):
        kind = KINDS.get(k)
        if kind is None:
            raise MixedDimension(f"cell {ci}: unknown kind {k!r}")
        if kind.dim != n:
            raise MixedDimension(f"cell {ci}: kind {k} has dimension {kind.dim}, complex has {n}")
        if len(cell) != kind.nverts:
            raise MixedDimension(f"cell {ci}: {k} needs {kind.nverts} vertices, got {len(cell)}")
        for v in cell:
            if not 0 <= v < vertex_count:
                raise OutOfRangeIndex(f"cell {ci}: vertex {v} outside [0, {vertex_count})")
        if len(set(cell)) != len(cell):
            raise DegenerateCell(f"cell {ci}: repeated vertex in {cell}")
        key = (k, tuple(sorted(cell)))
        if key in seen:
            raise DegenerateCell(f"cell {ci}: duplicate of an earlier cell {cell}")
        seen.add(key)
    return CellComplex(n, vertex_count, verts, kinds)


# ---------------------------------------------------------------------------
# manifold checks


@dataclass
class ManifoldReport:
    overfull_facets: list = field(default_factory=list)   # facet ids with > 2 cofacets
    bad_vertices: dict = field(default_factory=dict)       # vertex -> reason
    isolated_vertices: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.overfull_facets or self.bad_vertices or self.isolated_vertices)

    def summary(self) -> str:
        if self.ok:
            return "manifold"
        parts = []
        if self.overfull_facets:
            parts.append(f"{len(self.overfull_facets)} facets with >2 cofacets")
        if self.bad_vertices:
            parts.append(f"{len(self.bad_vertices)} vertices with bad links")
        if self.isolated_vertices:
            parts.append(f"{len(self.isolated_vertices)} isolated vertices")
        return "; ".join(parts)


def _components_of_graph(nodes, edges) -> int:
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return len({find(x) for x in nodes})


def _link_1d(links: list) -> str | None:
    """Check a vertex link given as a list of (a, b) arcs; return reason or None."""
    deg = defaultdict(int)
    for a, b in links:
        deg[a] += 1
        deg[b] += 1
    if any(d > 2 for d in deg.values()):
        return "link has a branch point"
    if _components_of_graph(list(deg), links) != 1:
        return "link is disconnected"
    return None


def _link_2d(tris: list) -> str | None:
    """Check a vertex link made of triangles: connected disk or sphere."""
    if len({tuple(sorted(t)) for t in tris}) != len(tris):
        return "link has duplicate triangles"
    edge_count = defaultdict(int)
    for t in tris:
        for i in range(3):
            a, b = t[i], t[(i + 1) % 3]
            edge_count[(a, b) if a < b else (b, a)] += 1
    if any(c > 2 for c in edge_count.values()):
        return "link edge with more than two triangles"
    nodes = {v for t in tris for v in t}
    links = [(t[0], t[1]) for t in tris] + [(t[1], t[2]) for t in tris]
    if _components_of_graph(list(nodes), links) != 1:
        return "link is disconnected"
    # the link itself must be a surface: check its own vertex links
    for w in nodes:
        arcs = []
        for t in tris:
            if w in t:
                others = [x for x in t if x != w]
                arcs.append(tuple(others))
        reason = _link_1d(arcs)
        if reason is not None:
            return "link is not a surface (" + reason + ")"
    chi = len(nodes) - len(edge_count) + len(tris)
    closed = all(c == 2 for c in edge_count.values())
    if closed and chi != 2:
        return f"closed link with chi={chi} (expected sphere)"
    if not closed:
        bnd = [e for e, c in edge_count.items() if c == 1]
        if chi != 1 or _components_of_graph({v for e in bnd for v in e}, bnd) != 1:
            return f"bounded link with chi={chi} (expected disk)"
    return None


def check_manifold(c: CellComplex) -> ManifoldReport:
    """Report codim-1 cofacet violations and non-manifold vertex links."""
    rep = ManifoldReport()
    rep.overfull_facets = [i for i, cf in enumerate(c.facet_cofacets) if len(cf) > 2]
    rep.isolated_vertices = [int(v) for v in np.flatnonzero(~c.used_vertices)] if c.dim > 0 else []
    if c.dim == 1:
        for v, inc in enumerate(c.vertex_cells):
            if len(inc) > 2:
                rep.bad_vertices[v] = "more than two segments meet"
        return rep
    if c.dim == 2:
        links = defaultdict(list)
        for cell, kname in zip(c.cells, c.kinds):
            corners = KINDS[kname].corners
            for i, v in enumerate(cell):
                a, b = corners[i]
                links[v].append((cell[a], cell[b]))
        for v, arcs in links.items():
            reason = _link_1d(arcs)
            if reason is not None:
                rep.bad_vertices[v] = reason
    elif c.dim == 3:
        links = defaultdict(list)
        for cell, kname in zip(c.cells, c.kinds):
            corners = KINDS[kname].corners
            for i, v in enumerate(cell):
                links[v].append(tuple(cell[j] for j in corners[i]))
        for v, tris in links.items():
            reason = _link_2d(tris)
            if reason is not None:
                rep.bad_vertices[v] = reason
    return rep


def require_manifold(c: CellComplex) -> None:
    rep = check_manifold(c)
    if not rep.ok:
        raise NotManifold(rep.summary())


# ---------------------------------------------------------------------------
# connectivity, boundary, euler characteristic


def connected_components(c: CellComplex) -> tuple[int, np.ndarray]:
    """Components of the cell adjacency graph (cells joined across facets)."""
    n = c.n_cells
    if n == 0:
        return 0, np.zeros(0, dtype=np.int64)
    parent = np.arange(n)

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for cof in c.facet_cofacets:
        if len(cof) > 1:
            r0 = find(cof[0][0])
            for ci, _ in cof[1:]:
                r = find(ci)
                if r != r0:
                    parent[r] = r0
    roots = np.array([find(i) for i in range(n)])
    _, labels = np.unique(roots, return_inverse=True)
    # relabel by first appearance for determinism
    order = {}
    out = np.empty(n, dtype=np.int64)
    for i, lab in enumerate(labels):
        out[i] = order.setdefault(int(lab), len(order))
    return len(order), out


@dataclass(frozen=True)
class BoundaryComplex:
    """Closed (n-1)-complex on local vertex ids, with parent-vertex injection."""

    complex: CellComplex
    parent_vertices: np.ndarray     # local vertex -> vertex of the parent complex
    parent_facets: tuple            # boundary cell -> facet id in the parent
    labels: np.ndarray              # boundary cell -> component label
    n_components: int

    @property
    def is_empty(self) -> bool:
        return self.complex.n_cells == 0

    def component(self, k: int) -> CellComplex:
        """Component ``k`` as a standalone complex (vertices renumbered)."""
        idx = np.flatnonzero(self.labels == k)
        return _subcomplex(self.complex, idx)[0]

    def component_cells(self, k: int) -> np.ndarray:
        return np.flatnonzero(self.labels == k)


def _subcomplex(c: CellComplex, cell_ids) -> tuple[CellComplex, np.ndarray]:
    cells = [c.cells[i] for i in cell_ids]
    kinds = [c.kinds[i] for i in cell_ids]
    used = sorted({v for cell in cells for v in cell})
    local = {v: i for i, v in enumerate(used)}
    cells = [tuple(local[v] for v in cell) for cell in cells]
    return CellComplex(c.dim, len(used), cells, kinds), np.array(used, dtype=np.int64)


def boundary(c: CellComplex, check: bool = True) -> BoundaryComplex:
    """Extract the oriented boundary of a manifold complex.

    Boundary facets keep the orientation induced by their single cofacet, so
    for a positively ordered 3D mesh the boundary faces point outward.
    """
    if check:
        require_manifold(c)
    fids = c.boundary_facets
    oriented = [c.facets[i] for i in fids]
    used = sorted({v for f in oriented for v in f})
    local = {v: i for i, v in enumerate(used)}
    cells = [tuple(local[v] for v in f) for f in oriented]
    kinds = [facet_kind(len(f)) for f in oriented]
    bc = CellComplex(c.dim - 1, len(used), cells, kinds)
    ncomp, labels = connected_components(bc) if bc.dim > 0 else (len(cells), np.arange(len(cells)))
    return BoundaryComplex(bc, np.array(used, dtype=np.int64), tuple(fids), labels, ncomp)


def euler_characteristic(c: CellComplex) -> int:
    return int(sum((-1) ** k * n for k, n in enumerate(c.f_vector)))


def component_complexes(c: CellComplex) -> list[tuple[CellComplex, np.ndarray]]:
    ncomp, labels = connected_components(c)
    return [_subcomplex(c, np.flatnonzero(labels == k)) for k in range(ncomp)]


def barycentric_subdivision(c: CellComplex, coords: np.ndarray | None = None):
    """One level of barycentric refinement of a 2-complex.

    Every polygon becomes a fan of triangles around its barycentre, split at
    edge midpoints; orientation is preserved. Returns ``(complex, coords)``.
    """
    if c.dim != 2:
        raise ValueError("barycentric subdivision is implemented for 2-complexes")
    nv = c.n_vertices
    eidx = c.edge_index
    mid = nv
    centre = nv + len(c.edges)
    cells = []
    for ci, cell in enumerate(c.cells):
        k = len(cell)
        ctr = centre + ci
        for i in range(k):
            a, b = cell[i], cell[(i + 1) % k]
            m = mid + eidx[(a, b) if a < b else (b, a)]
            cells.append((ctr, a, m))
            cells.append((ctr, m, b))
    total = nv + len(c.edges) + c.n_cells
    out = CellComplex(2, total, cells, ["tri"] * len(cells))
    if coords is None:
        return out, None
    coords = np.asarray(coords, dtype=float)
    mids = 0.5 * (coords[c.edges[:, 0]] + coords[c.edges[:, 1]])
    ctrs = np.array([coords[list(cell)].mean(axis=0) for cell in c.cells])
    return out, np.vstack([coords, mids, ctrs])
