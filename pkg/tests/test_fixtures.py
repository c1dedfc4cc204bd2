import numpy as np
import pytest

from mapcert import fixtures as F
from mapcert.topology.complex import boundary, check_manifold, connected_components, euler_characteristic
from mapcert.topology.surfaces import classify_component, classify_surface, orientability

# (chi, boundary components, orientable, boundary component names)
EXPECTED = {
    "sphere": (2, 0, True, []),
    "torus": (0, 0, True, []),
    "klein bottle": (0, 0, False, []),
    "moebius band": (0, 1, False, ["circle"]),
    "disk": (1, 1, True, ["circle"]),
    "annulus": (0, 2, True, ["circle", "circle"]),
    "ball": (1, 1, True, ["sphere"]),
    "solid torus": (0, 1, True, ["torus"]),
    "torus shell": (0, 2, True, ["torus", "torus"]),
}


def describe(fx):
    cx = fx.complex
    bd = boundary(cx)
    names = []
    if not bd.is_empty:
        for k in range(bd.n_components):
            sub = bd.component(k)
            names.append(classify_component(sub)["name"])
    return euler_characteristic(cx), bd.n_components, orientability(cx)[0], sorted(names)


@pytest.mark.parametrize("name", sorted(set(F.GENERATORS) - {"surface"}))
def test_generator_is_declared_manifold(name):
    fn, _ = F.GENERATORS[name]
    fx = fn()
    assert check_manifold(fx.complex).ok
    assert connected_components(fx.complex)[0] == 1
    assert describe(fx) == EXPECTED[fx.meta["classification"]]
    if fx.complex.dim == 2 and fx.meta["classification"] in ("sphere", "torus", "klein bottle",
                                                               "moebius band", "disk", "annulus"):
        assert classify_surface(fx.complex).name == fx.meta["classification"]


@pytest.mark.parametrize("genus,holes", [(0, 0), (1, 0), (2, 1), (3, 3), (0, 2)])
def test_handlebody_surface(genus, holes):
    fx = F.handlebody_surface(genus, holes)
    assert check_manifold(fx.complex).ok
    c = classify_surface(fx.complex)
    assert (c.orientable, c.genus, c.boundary_curves) == (True, genus, holes)
    assert euler_characteristic(fx.complex) == 2 - 2 * genus - holes


@pytest.mark.parametrize("params", [(0,), (1,), (2,)])
def test_sphere_levels(params):
    fx = F.sphere(*params)
    assert euler_characteristic(fx.complex) == 2
    assert np.allclose(np.linalg.norm(fx.default, axis=1), 1.0)


def test_torus_counts():
    fx = F.torus(4, 4)
    assert fx.complex.f_vector == (16, 32, 16)


def test_double_cover_degree_meta():
    fx = F.double_cover_annulus(3, 16)
    assert fx.meta["degree"] == 2
    P = fx.realizations["physical"]
    assert np.array_equal(P[:8], P[8:16])


def test_tangle_moves_one_interior_vertex():
    base = F.rect_grid(6, 6)
    fx = F.tangle(base, 14)
    moved = np.flatnonzero(np.any(fx.realizations["physical"] != base.default, axis=1))
    assert moved.tolist() == [fx.meta["displaced_vertex"]]
    assert fx.meta["displaced_vertex"] in fx.complex.cells[14]


def test_tangle_random_keeps_boundary():
    base = F.annulus(3, 16)
    fx = F.tangle_random(base, 1, 0.3)
    bv = boundary(base.complex).parent_vertices
    assert np.array_equal(fx.realizations["physical"][bv], base.default[bv])


@pytest.mark.parametrize("call", [
    lambda: F.annulus(0, 16), lambda: F.annulus(1, 2), lambda: F.annulus(1, 8, 2.0, 1.0),
    lambda: F.disk(0, 8), lambda: F.double_cover_annulus(3, 15), lambda: F.torus_shell(nv=6),
    lambda: F.tangle(F.rect_grid(3, 3), 99), lambda: F.tangle(F.rect_grid(1, 1), 0),
    lambda: F.tfi({"bottom": [[0, 0], [1, 0]], "top": [[0, 1], [1, 1]],
                   "left": [[0, 0], [0, 1]], "right": [[1, 0.5], [1, 1]]}),
])
def test_bad_parameters(call):
    with pytest.raises(ValueError):
        call()


def test_tfi_reproduces_square():
    t = np.linspace(0, 1, 5)
    fx = F.tfi({"bottom": [[x, 0] for x in t], "top": [[x, 1] for x in t],
                "left": [[0, y] for y in t], "right": [[1, y] for y in t]})
    assert np.allclose(fx.realizations["physical"], fx.default)
