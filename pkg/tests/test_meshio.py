import numpy as np
import pytest
from hypothesis import given, strategies as st

from mapcert import fixtures as F
from mapcert.errors import MeshError, MeshFormatError
from mapcert.meshio import dumps, loads, read_mesh, write_mesh


def same(a, b):
    assert a.complex.cells == b.complex.cells
    assert list(a.complex.kinds) == list(b.complex.kinds)
    assert a.complex.dim == b.complex.dim
    assert list(a.realizations) == list(b.realizations)
    for k in a.realizations:
        assert np.array_equal(np.asarray(a.realizations[k]), b.realizations[k])


@pytest.mark.parametrize("name", sorted(F.GENERATORS))
def test_round_trip_is_bit_exact(tmp_path, name):
    fn, _ = F.GENERATORS[name]
    fx = fn()
    path = tmp_path / f"{name}.mcmesh"
    write_mesh(fx, path)
    back = read_mesh(path)
    same(fx, back)
    assert back.meta == fx.meta


def test_tangle_round_trip():
    fx = F.tangle(F.rect_grid(6, 6), 14)
    same(fx, loads(dumps(fx)))


@given(st.lists(st.floats(-1e300, 1e300, allow_nan=False), min_size=8, max_size=8))
def test_arbitrary_doubles_survive(vals):
    fx = F.rect_grid(1, 1)
    fx.realizations["physical"] = np.array(vals, dtype=float).reshape(4, 2)
    same(fx, loads(dumps(fx)))


def test_comments_and_blank_lines():
    text = """# a unit square
MCMESH v1 dim=2 vertices=4 cells=1

0 0   # origin
1 0
1 1
0 1
quad 0 1 2 3
"""
    fx = loads(text)
    assert fx.complex.n_cells == 1 and fx.default.shape == (4, 2)


GOOD = "MCMESH v1 dim=2 vertices=3 cells=1\n0 0\n1 0\n0 1\ntri 0 1 2\n"


@pytest.mark.parametrize("text", [
    "",
    "MESH v1 dim=2 vertices=3 cells=1\n",
    "MCMESH v1 dim=4 vertices=3 cells=1\n0 0\n1 0\n0 1\ntri 0 1 2\n",
    "MCMESH v1 dim=2 vertices=3 cells=1\n0 0\n1 0\n",
    "MCMESH v1 dim=2 vertices=3 cells=1\n0 0\n1 0 0\n0 1\ntri 0 1 2\n",
    "MCMESH v1 dim=2 vertices=3 cells=1\n0 0\n1 x\n0 1\ntri 0 1 2\n",
    "MCMESH v1 dim=2 vertices=3 cells=1\n0 0\n1 0\n0 1\ntet 0 1 2 0\n",
    "MCMESH v1 dim=2 vertices=3 cells=1\n0 0\n1 0\n0 1\ntri 0 1\n",
    "MCMESH v1 dim=2 vertices=3 cells=1\n0 0\n1 0\n0 1\ntri 0 1 a\n",
    "MCMESH v1 dim=2 vertices=3 cells=2\n0 0\n1 0\n0 1\ntri 0 1 2\n",
    "MCMESH v1 dim=2 vertices=3 cells=1\n0\n1\n0\ntri 0 1 2\n",
    GOOD + "bogus line\n",
    GOOD + "realization p\n0 0\n1 0\n",
    GOOD + "realization p\n0 0\n1 0\n0 1\nrealization p\n0 0\n1 0\n0 1\n",
    "# meta {not json\n" + GOOD,
])
def test_parse_errors(text):
    with pytest.raises(MeshFormatError):
        loads(text)


def test_index_errors_are_mesh_errors():
    with pytest.raises(MeshError):
        loads("MCMESH v1 dim=2 vertices=3 cells=1\n0 0\n1 0\n0 1\ntri 0 1 7\n")


def test_missing_file(tmp_path):
    with pytest.raises(MeshFormatError):
        read_mesh(tmp_path / "absent.mcmesh")


def test_surface_in_space():
    fx = loads(dumps(F.sphere(1)))
    assert fx.complex.dim == 2 and fx.default.shape[1] == 3
