"""Integer homology of cell complexes via Smith normal form."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .complex import KINDS, CellComplex, same_orientation


@dataclass(frozen=True)
class HomologyProfile:
    betti: tuple          # b_0 .. b_n
    torsion: tuple        # per dimension: tuple of invariant factors > 1

    @property
    def euler(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))


def boundary_matrices(c: CellComplex) -> list[tuple[dict, int, int]]:
    """Sparse boundary maps d_k: C_k -> C_{k-1} for k = 1..dim.

    Each map is returned as ``(columns, nrows, ncols)`` where ``columns`` maps a
    k-cell index to a ``{row: coefficient}`` dict.
    """
    mats = []
    if c.dim >= 1:
        if c.dim == 1:
            d1 = {}
            for j, cell in enumerate(c.cells):
                a, b = cell
                d1[j] = {b: 1, a: -1}
            mats.append((d1, c.n_vertices, c.n_cells))
        else:
            d1 = {j: {int(b): 1, int(a): -1} for j, (a, b) in enumerate(c.edges)}
            mats.append((d1, c.n_vertices, len(c.edges)))
    if c.dim >= 2:
        eidx = c.edge_index
        d2 = {}
        for j, face in enumerate(c.faces):
            col = {}
            k = len(face)
            for i in range(k):
                a, b = face[i], face[(i + 1) % k]
                if a < b:
                    col[eidx[(a, b)]] = col.get(eidx[(a, b)], 0) + 1
                else:
                    col[eidx[(b, a)]] = col.get(eidx[(b, a)], 0) - 1
            d2[j] = {r: v for r, v in col.items() if v}
        mats.append((d2, len(c.edges), len(c.faces)))
    if c.dim >= 3:
        d3 = {}
        for j, (cell, kname) in enumerate(zip(c.cells, c.kinds)):
            col = {}
            for loc, fid in zip(KINDS[kname].facets, c.cell_facets[j]):
                f = tuple(cell[i] for i in loc)
                sign = 1 if same_orientation(f, c.facets[fid]) else -1
                col[fid] = col.get(fid, 0) + sign
            d3[j] = {r: v for r, v in col.items() if v}
        mats.append((d3, len(c.facets), c.n_cells))
    return mats


def _dense_snf(rows: list[list[int]]) -> list[int]:
    """Invariant factors of a small dense integer matrix (absolute values)."""
    a = [r[:] for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        a[t], a[pi] = a[pi], a[t]
        for r in a:
            r[t], r[pj] = r[pj], r[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    for r in a:
                        r[j] -= q * r[t]
                    if a[t][j]:
                        done = False
            if done:
                # divisibility: every remaining entry must be a multiple of p
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if a[i][j] % p), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest nonzero of row/col t to the pivot and retry
            cand = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, pi, pj = min(cand)
            a[t], a[pi] = a[pi], a[t]
            for r in a:
                r[t], r[pj] = r[pj], r[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def smith_invariants(columns: dict, nrows: int, ncols: int) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix.

    Unit pivots are eliminated sparsely (fewest-entries column first); whatever
    is left without a unit entry is handed to a dense Smith reduction.
    """
    cols = {j: dict(col) for j, col in columns.items() if col}
    rows: dict = {}
    for j, col in cols.items():
        for i in col:
            rows.setdefault(i, set()).add(j)
    units = 0
    heap = [(len(col), j) for j, col in cols.items()]
    heapq.heapify(heap)
    while heap:
        size, j = heapq.heappop(heap)
        col = cols.get(j)
        if col is None:
            continue
        if size != len(col):
            heapq.heappush(heap, (len(col), j))
            continue
        pivot_row = None
        best = None
        for i, v in col.items():
            if v in (1, -1):
                cost = len(rows[i])
                if best is None or cost < best:
                    best, pivot_row = cost, i
        if pivot_row is None:
            # revisited if a later elimination touches this column
            continue
        i0 = pivot_row
        p = col[i0]
        # clear row i0 using column operations with column j
        for k in list(rows[i0]):
            if k == j:
                continue
            ck = cols[k]
            q = ck[i0] * p     # p = +-1 so q = ck[i0] / p
            for i, v in col.items():
                nv = ck.get(i, 0) - q * v
                if nv:
                    if i not in ck:
                        rows[i].add(k)
                    ck[i] = nv
                else:
                    if i in ck:
                        del ck[i]
                        rows[i].discard(k)
            if not ck:
                del cols[k]
            else:
                heapq.heappush(heap, (len(ck), k))
        for i in col:
            rows[i].discard(j)
        del rows[i0]
        del cols[j]
        units += 1
    rest = [j for j in cols if cols[j]]
    if not rest:
        return [1] * units
    rset = sorted({i for j in rest for i in cols[j]})
    rpos = {i: k for k, i in enumerate(rset)}
    dense = [[0] * len(rest) for _ in rset]
    for cj, j in enumerate(rest):
        for i, v in cols[j].items():
            dense[rpos[i]][cj] = v
    return [1] * units + _dense_snf(dense)


def betti(c: CellComplex) -> HomologyProfile:
    """Betti numbers and torsion of ``c`` over the integers."""
    dims = list(c.f_vector)
    if c.dim == 1:
        dims = [c.n_vertices, c.n_cells]
    invariants = [smith_invariants(*m) for m in boundary_matrices(c)]
    ranks = [len(inv) for inv in invariants]
    b = []
    tors = []
    for k in range(c.dim + 1):
        rank_out = ranks[k - 1] if k >= 1 else 0
        rank_in = ranks[k] if k < len(ranks) else 0
        b.append(dims[k] - rank_out - rank_in)
        tk = invariants[k] if k < len(invariants) else []
        tors.append(tuple(sorted(d for d in tk if d > 1)))
    return HomologyProfile(tuple(b), tuple(tors))
