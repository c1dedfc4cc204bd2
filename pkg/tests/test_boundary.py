import numpy as np
import pytest
from hypothesis import given, strategies as st
from shapely.geometry import LinearRing

from mapcert import fixtures as F
from mapcert.mapping import (FAILED, VERIFIED, ExplicitDomain, PiecewiseMap,
                             check_boundary_containment, check_boundary_injectivity)
from mapcert.mapping.boundary import point_in_domain
from mapcert.topology.complex import boundary


def mapped(fx, target):
    return PiecewiseMap(fx.complex, fx.default, target)


def domain(fx, **kw):
    return ExplicitDomain(fx.complex, fx.default, **kw)


def shapely_simple(rings):
    """Oracle: closed polylines are each simple and pairwise disjoint."""
    lr = [LinearRing(r) for r in rings]
    if not all(r.is_simple for r in lr):
        return False
    return not any(lr[i].intersects(lr[j]) for i in range(len(lr)) for j in range(i + 1, len(lr)))


@pytest.mark.parametrize("name", ["disk", "annulus", "rect", "ball", "solid_torus", "shell"])
def test_identity_containment_is_exact(small_fixtures, name):
    fx = small_fixtures[name]
    rep = check_boundary_containment(mapped(fx, fx.default), domain(fx))
    assert rep.status == VERIFIED
    assert rep.max_deviation <= 1e-12


def test_inward_displacement_fails_with_its_deviation():
    fx = F.rect_grid(10, 10)
    Y = domain(fx)
    tol = Y.tolerance
    P = fx.default.copy()
    P[5, 1] += 10 * tol                  # midpoint of the bottom side, pushed inside
    rep = check_boundary_containment(mapped(fx, P), Y)
    assert rep.status == FAILED
    assert rep.max_deviation == pytest.approx(10 * tol, rel=1e-6)
    assert 5 in rep.worst_facet


def test_displacement_within_tolerance_passes():
    fx = F.rect_grid(10, 10)
    Y = domain(fx)
    P = fx.default.copy()
    P[5, 1] += 0.5 * Y.tolerance
    assert check_boundary_containment(mapped(fx, P), Y).status == VERIFIED


def test_explicit_dist_tol():
    fx = F.rect_grid(4, 4)
    P = fx.default.copy()
    P[2, 1] = 0.01
    assert check_boundary_containment(mapped(fx, P), domain(fx, dist_tol=0.02)).status == VERIFIED
    assert check_boundary_containment(mapped(fx, P), domain(fx)).status == FAILED


@pytest.mark.parametrize("name", ["disk", "annulus", "rect", "ball", "solid_torus", "shell"])
@pytest.mark.parametrize("scope", ["whole", "per-component"])
def test_identity_boundary_injective(small_fixtures, name, scope):
    fx = small_fixtures[name]
    assert check_boundary_injectivity(mapped(fx, fx.default), scope).status == VERIFIED


def figure_eight_disk(sectors=16):
    fx = F.disk(2, sectors)
    P = 0.5 * fx.default.copy()
    th = 2 * np.pi * np.arange(sectors) / sectors + np.pi / (2 * sectors)
    ring = 1 + sectors + np.arange(sectors)
    P[ring] = np.stack([np.sin(th), np.sin(th) * np.cos(th)], axis=1)
    return fx, P


def test_figure_eight_pinch():
    fx, P = figure_eight_disk()
    rep = check_boundary_injectivity(mapped(fx, P), "whole")
    assert rep.status == FAILED and rep.violations
    ring = 1 + 16 + np.arange(16)
    assert not shapely_simple([P[ring]])


def test_doubling_fails_in_both_scopes():
    # each boundary circle wraps twice around its image circle
    fx = F.double_cover_annulus(3, 16)
    f = PiecewiseMap(fx.complex, fx.default, fx.realizations["physical"])
    for scope in ("whole", "per-component"):
        assert check_boundary_injectivity(f, scope).status == FAILED


def test_crossing_circles_differ_by_scope():
    fx = F.annulus(1, 32, 1.0, 2.0)
    P = fx.default.copy()
    P[:32] += (1.5, 0.0)                 # inner circle now crosses the outer one
    f = mapped(fx, P)
    assert check_boundary_injectivity(f, "per-component").status == VERIFIED
    whole = check_boundary_injectivity(f, "whole")
    assert whole.status == FAILED
    assert not shapely_simple([P[:32], P[32:]])


def test_crossing_shell_tori_differ_by_scope():
    fx = F.torus_shell()
    bd = boundary(fx.complex)
    P = fx.default.copy()
    comps = [np.unique([bd.parent_vertices[v] for c in np.flatnonzero(bd.labels == k)
                        for v in bd.complex.cells[c]]) for k in range(bd.n_components)]
    half = [np.max(np.abs(P[vs, 2])) for vs in comps]
    inner = comps[int(np.argmin(half))]
    P[inner, 2] += 0.8
    f = mapped(fx, P)
    assert check_boundary_injectivity(f, "per-component").status == VERIFIED
    assert check_boundary_injectivity(f, "whole").status == FAILED


def test_unknown_scope():
    fx = F.rect_grid(2, 2)
    with pytest.raises(ValueError):
        check_boundary_injectivity(mapped(fx, fx.default), "pieces")


@given(st.integers(0, 2**31 - 1), st.floats(0.0, 0.9))
def test_injectivity_matches_shapely_and_brute(seed, amp):
    fx = F.annulus(1, 12, 1.0, 1.6)
    rng = np.random.default_rng(seed)
    P = fx.default + rng.uniform(-amp, amp, size=fx.default.shape)
    f = mapped(fx, P)
    bvh = check_boundary_injectivity(f, "whole", "bvh")
    brute = check_boundary_injectivity(f, "whole", "brute")
    assert bvh.status == brute.status
    assert bvh.violations == brute.violations
    assert (bvh.status == VERIFIED) == shapely_simple([P[:12], P[12:]])
    mirrored = check_boundary_injectivity(mapped(fx, P * (-1.0, 1.0)), "whole", "bvh")
    assert (mirrored.status, mirrored.violations) == (bvh.status, bvh.violations)


@pytest.mark.parametrize("name", ["disk", "annulus", "rect", "ball", "solid_torus", "shell"])
def test_bvh_and_brute_agree_on_fixtures(small_fixtures, name):
    fx = small_fixtures[name]
    P = F.tangle_random(fx, 3, 0.3).realizations["physical"]
    if fx.complex.dim == 2:
        P = P.copy()
        P[boundary(fx.complex).parent_vertices] *= 0.9 + 0.2 * np.random.default_rng(0).random(
            (len(boundary(fx.complex).parent_vertices), 1))
    f = mapped(fx, P)
    for scope in ("whole", "per-component"):
        a = check_boundary_injectivity(f, scope, "bvh")
        b = check_boundary_injectivity(f, scope, "brute")
        assert (a.status, a.violations) == (b.status, b.violations)


def test_point_in_domain():
    fx = F.annulus(2, 16)
    pts = np.array([[0.0, 0.0], [1.5, 0.0], [0.0, -1.5], [3.0, 0.0]])
    assert point_in_domain(domain(fx), pts).tolist() == [False, True, True, False]
    ball = F.ball_hex(2)
    inside = point_in_domain(domain(ball), np.array([[0.5, 0.5, 0.5], [1.5, 0.5, 0.5]]))
    assert inside.tolist() == [True, False]
