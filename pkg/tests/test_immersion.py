import numpy as np
import pytest
from hypothesis import given, strategies as st

from mapcert import fixtures as F
from mapcert.mapping import (FAILED, VERIFIED, PiecewiseMap, check_boundary_immersion,
                             check_interior_immersion, verify_embedding)
from mapcert.topology.complex import boundary
from oracles import quad_jacobian_oracle, shoelace


def identity(fx):
    return PiecewiseMap(fx.complex, fx.default, fx.default)


def mapped(fx, target):
    return PiecewiseMap(fx.complex, fx.default, target)


@pytest.mark.parametrize("name", ["disk", "annulus", "rect", "ball", "solid_torus", "shell"])
def test_identity_full_dimensional(small_fixtures, name):
    rep = check_interior_immersion(identity(small_fixtures[name]))
    assert rep.status == VERIFIED
    assert abs(rep.orientation) == 1
    assert rep.all_strict


@pytest.mark.parametrize("name", ["sphere", "torus"])
def test_identity_surfaces(small_fixtures, name):
    assert check_interior_immersion(identity(small_fixtures[name])).status == VERIFIED


def test_mirror_is_coherent_with_opposite_orientation(small_fixtures):
    for name in ("rect", "ball"):
        fx = small_fixtures[name]
        base = check_interior_immersion(identity(fx))
        mirrored = fx.default * np.r_[-1.0, np.ones(fx.default.shape[1] - 1)]
        rep = check_interior_immersion(mapped(fx, mirrored))
        assert rep.status == VERIFIED
        assert rep.orientation == -base.orientation


def test_tangle_failing_cells_touch_displaced_vertex():
    fx = F.tangle(F.rect_grid(20, 20), 57)
    v = fx.meta["displaced_vertex"]
    rep = check_interior_immersion(mapped(fx, fx.realizations["physical"]))
    assert rep.status == FAILED
    assert 57 in rep.failing_cells
    star = {c for c, cell in enumerate(fx.complex.cells) if v in cell}
    assert set(rep.failing_cells) <= star
    # exactly one cell is inverted as a polygon
    P = fx.realizations["physical"]
    areas = [shoelace(P[list(c)]) for c in fx.complex.cells]
    assert [c for c, a in enumerate(areas) if a < 0] == [57]


def test_squared_disk_fails_at_branch_point():
    fx = F.disk(3, 12)
    z = fx.default[:, 0] + 1j * fx.default[:, 1]
    w = z ** 2
    rep = check_interior_immersion(mapped(fx, np.stack([w.real, w.imag], axis=1)))
    assert rep.failing_cells == []
    assert [d["vertex"] for d in rep.failing_vertices] == [0]
    assert rep.failing_vertices[0]["angle_sum"] == pytest.approx(4 * np.pi)


def test_non_orientable_source_is_not_coherent():
    fx = F.klein()
    rep = check_interior_immersion(identity(fx))
    assert not rep.coherent and rep.status == FAILED


@given(st.integers(0, 2**31 - 1), st.floats(0.0, 0.3))
def test_immersion_verdict_is_sound(seed, amp):
    fx = F.tangle_random(F.rect_grid(6, 6), seed, amp)
    P = fx.realizations["physical"]
    rep = check_interior_immersion(mapped(fx, P))
    if rep.status == VERIFIED:
        for c in fx.complex.cells:
            J = quad_jacobian_oracle(P[list(c)], n=21) * rep.orientation
            assert J.min() > 0


@given(st.integers(0, 2**31 - 1))
def test_small_jitter_stays_verified(seed):
    fx = F.tangle_random(F.rect_grid(6, 6), seed, 0.05)
    assert check_interior_immersion(mapped(fx, fx.realizations["physical"])).status == VERIFIED


def test_boundary_immersion_identity(small_fixtures):
    for name in ("disk", "annulus", "rect", "ball", "solid_torus", "shell"):
        f = identity(small_fixtures[name])
        assert check_boundary_immersion(f, check_interior_immersion(f)).status == VERIFIED


def test_boundary_fold_at_vertex():
    fx = F.rect_grid(2, 2)
    P = fx.default.copy()
    P[1] = (1.25, 0.0)        # both boundary edges at vertex 1 now point in -x
    rep = check_boundary_immersion(mapped(fx, P))
    assert rep.status == FAILED
    assert any(fo.get("vertex") == 1 for fo in rep.folds)


def test_hex_ball_squashed_boundary_quad():
    fx = F.ball_hex(2)
    bd = boundary(fx.complex)
    face = [int(bd.parent_vertices[v]) for v in bd.complex.cells[0]]
    P = fx.default.copy()
    P[face, 1] = P[face[0], 1]          # the face collapses onto a segment
    rep = check_boundary_immersion(mapped(fx, P))
    assert rep.status == FAILED
    assert sorted(face) in [sorted(d) for d in rep.degenerate_facets]


def test_verify_embedding_examples():
    assert verify_embedding(F.annulus().complex, F.annulus().default).ok
    assert verify_embedding(F.sphere(1).complex, F.sphere(1).default).ok
    assert verify_embedding(F.klein().complex, F.klein().default).status == FAILED
    fx = F.tangle(F.rect_grid(6, 6), 14)
    assert verify_embedding(fx.complex, fx.realizations["physical"]).status == FAILED
