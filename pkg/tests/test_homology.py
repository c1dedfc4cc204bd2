import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from mapcert import fixtures as F
from mapcert.topology import betti, boundary_matrices, build_complex, euler_characteristic, \
    smith_invariants

OCTA = [(0, 2, 4), (2, 1, 4), (1, 3, 4), (3, 0, 4), (2, 0, 5), (1, 2, 5), (3, 1, 5), (0, 3, 5)]


def dense(columns, nrows, ncols):
    m = sympy.zeros(nrows, ncols)
    for j, col in columns.items():
        for i, v in col.items():
            m[i, j] = v
    return m


def sympy_invariants(m):
    if m.rows == 0 or m.cols == 0:
        return []
    snf = smith_normal_form(m, domain=sympy.ZZ)
    return sorted(abs(int(snf[i, i])) for i in range(min(m.shape)) if snf[i, i] != 0)


def sympy_homology(c):
    """Independent homology oracle: sympy Smith forms of dense boundary matrices."""
    mats = [dense(*m) for m in boundary_matrices(c)]
    dims = list(c.f_vector)
    ranks = [m.rank() for m in mats]
    b, tors = [], []
    for k in range(c.dim + 1):
        rank_out = ranks[k - 1] if k >= 1 else 0
        rank_in = ranks[k] if k < len(ranks) else 0
        b.append(dims[k] - rank_out - rank_in)
        inv = sympy_invariants(mats[k]) if k < len(mats) else []
        tors.append(tuple(d for d in inv if d > 1))
    return tuple(b), tuple(tors)


SMALL = {
    "octahedron": build_complex(OCTA, 2, 6, ["tri"] * 8),
    "torus": F.torus(4, 4).complex,
    "klein": F.klein(4, 4).complex,
    "moebius": F.moebius(5).complex,
    "disk": F.disk(2, 6).complex,
    "cube": F.ball_hex(1).complex,
}


@pytest.mark.parametrize("name", sorted(SMALL))
def test_snf_matches_sympy(name):
    c = SMALL[name]
    for cols, nr, nc in boundary_matrices(c):
        assert sorted(smith_invariants(cols, nr, nc)) == sympy_invariants(dense(cols, nr, nc))


@pytest.mark.parametrize("name", sorted(SMALL))
def test_homology_matches_sympy(name):
    c = SMALL[name]
    hp = betti(c)
    b, tors = sympy_homology(c)
    assert hp.betti == b
    assert tuple(tuple(t) for t in hp.torsion) == tors


def test_boundary_squared_is_zero():
    for c in SMALL.values():
        mats = [dense(*m) for m in boundary_matrices(c)]
        for d1, d2 in zip(mats, mats[1:]):
            assert (d1 * d2).is_zero_matrix


def test_betti_examples():
    assert betti(SMALL["octahedron"]).betti == (1, 0, 1)
    assert betti(SMALL["octahedron"]).torsion == ((), (), ())
    assert betti(F.torus(4, 4).complex).betti == (1, 2, 1)
    k = betti(F.klein(4, 4).complex)
    assert k.betti == (1, 1, 0)
    assert tuple(k.torsion[1]) == (2,)


@pytest.mark.parametrize("fx", [F.sphere(1), F.torus(6, 5), F.klein(5, 4), F.moebius(7), F.disk(3, 10),
                                F.annulus(2, 12), F.ball_hex(2), F.solid_torus(), F.torus_shell(8, 8, 1)])
def test_euler_equals_alternating_betti(fx):
    assert betti(fx.complex).euler == euler_characteristic(fx.complex)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=3, max_size=5))
def test_smith_invariants_property(rows):
    m = sympy.Matrix(rows)
    cols = {j: {i: rows[i][j] for i in range(len(rows)) if rows[i][j]} for j in range(4)}
    assert sorted(smith_invariants(cols, len(rows), 4)) == sympy_invariants(m)
