import numpy as np
import pytest
from hypothesis import given, strategies as st

from mapcert import fixtures as F
from mapcert.errors import LengthMismatch, NotSurface
from mapcert.topology import (barycentric_subdivision, build_complex, classify_surface,
                              eq_chi_condition, orientability, surface_from_invariants)


def test_orientability_examples():
    assert orientability(F.torus(4, 4).complex)[0]
    assert not orientability(F.moebius(5).complex)[0]
    assert not orientability(F.klein(4, 4).complex)[0]


def test_orientation_signs_make_neighbours_coherent():
    c = F.sphere(1).complex
    ok, signs = orientability(c)
    assert ok
    seen = {}
    for ci, cell in enumerate(c.cells):
        oriented = cell if signs[ci] > 0 else cell[::-1]
        for i in range(3):
            e = (oriented[i], oriented[(i + 1) % 3])
            assert e not in seen, "coherent orientations traverse every edge once each way"
            seen[e] = ci


def _relabel(c, perm_cells, perm_verts):
    cells = [tuple(int(perm_verts[v]) for v in c.cells[i]) for i in perm_cells]
    return build_complex(cells, c.dim, c.n_vertices, [c.kinds[i] for i in perm_cells])


@given(st.integers(0, 2 ** 31 - 1))
def test_orientability_is_relabeling_invariant(seed):
    rng = np.random.default_rng(seed)
    for fx, expect in ((F.torus(4, 3), True), (F.moebius(5), False), (F.klein(4, 3), False)):
        c = fx.complex
        d = _relabel(c, rng.permutation(c.n_cells), rng.permutation(c.n_vertices))
        assert orientability(d)[0] is expect


@pytest.mark.parametrize("orientable,chi,b,name,g", [
    (True, 2, 0, "sphere", 0),
    (True, 0, 2, "annulus", 0),
    (True, 1, 1, "disk", 0),
    (True, 0, 0, "torus", 1),
    (False, 0, 0, "klein bottle", 2),
    (False, 0, 1, "moebius band", 1),
])
def test_surface_from_invariants(orientable, chi, b, name, g):
    s = surface_from_invariants(orientable, chi, b)
    assert s.name == name and s.genus == g and s.boundary_curves == b


def test_orientable_formula_and_unnamed():
    s = surface_from_invariants(True, -3, 1)
    assert (s.genus, s.name) == (2, None)
    assert s.euler == 2 - 2 * s.genus - s.boundary_curves
    with pytest.raises(NotSurface):
        surface_from_invariants(True, 1, 0)
    with pytest.raises(NotSurface):
        surface_from_invariants(False, 2, 0)


@pytest.mark.parametrize("fx,name", [(F.sphere(1), "sphere"), (F.torus(5, 4), "torus"),
                                     (F.klein(4, 4), "klein bottle"), (F.moebius(5), "moebius band"),
                                     (F.disk(2, 8), "disk"), (F.annulus(2, 10), "annulus")])
def test_classify_fixture_surfaces(fx, name):
    assert classify_surface(fx.complex).name == name


@pytest.mark.parametrize("fx", [F.torus(4, 4), F.klein(4, 4), F.moebius(5), F.annulus(1, 8),
                                F.handlebody_surface(2, 1)])
def test_classification_survives_subdivision(fx):
    sub, _ = barycentric_subdivision(fx.complex)
    assert classify_surface(sub) == classify_surface(fx.complex)


def test_classify_rejects_non_surface():
    with pytest.raises(NotSurface):
        classify_surface(F.ball_hex(1).complex)
    two = build_complex([(0, 1, 2), (3, 4, 5)], 2, 6, ["tri", "tri"])
    with pytest.raises(NotSurface):
        classify_surface(two)


@pytest.mark.parametrize("a,b,holds", [
    ((2,), (2,), True),
    ((4,), (2,), False),
    ((0, 0), (0, 0), False),
    ((2, 0), (2, 0), True),
    ((-2,), (-1,), False),
])
def test_eq_chi_table(a, b, holds):
    assert eq_chi_condition(a, b) is holds


def test_eq_chi_length_mismatch():
    with pytest.raises(LengthMismatch):
        eq_chi_condition((2, 0), (2,))


def brute_eq_chi(a, b):
    a = sorted(a, reverse=True)
    b = sorted(b, reverse=True)
    return not any(all(x == m * y for x, y in zip(a, b)) for m in range(2, 200))


chis = st.lists(st.integers(-12, 4), min_size=1, max_size=4)


@given(chis, st.integers(1, 4), st.randoms(use_true_random=False))
def test_eq_chi_matches_brute_force(b, m, rnd):
    a = [m * x for x in b]
    if rnd.random() < 0.5:
        a[rnd.randrange(len(a))] += rnd.choice([-2, -1, 1, 2])
    assert eq_chi_condition(a, b) == brute_eq_chi(a, b)


@given(chis, chis, st.randoms(use_true_random=False))
def test_eq_chi_depends_only_on_sorted_sequences(a, b, rnd):
    n = min(len(a), len(b))
    a, b = a[:n], b[:n]
    a2, b2 = a[:], b[:]
    rnd.shuffle(a2)
    rnd.shuffle(b2)
    assert eq_chi_condition(a, b) == eq_chi_condition(a2, b2)
