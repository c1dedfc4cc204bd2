"""The ten acceptance criteria, each at its stated tolerance."""

import time

import numpy as np

from mapcert import fixtures as F
from mapcert.engine import FINITE_COVER, HOMEOMORPHISM, NOT_CERTIFIED, NOT_HOMEOMORPHIC, Config, certify
from mapcert.geometry import Sign, bilinear_jacobian_certificate, trilinear_jacobian_certificate
from mapcert.mapping import ExplicitDomain, PiecewiseMap, check_boundary_injectivity
from mapcert.mapping.preimage import count_preimages, sample_target_points
from mapcert.topology.complex import euler_characteristic
from mapcert.topology.homology import betti
from mapcert.topology.surfaces import classify_surface, eq_chi_condition
from oracles import hex_jacobian_oracle, quad_jacobian_oracle

UNIT_SQUARE = np.array([(0, 0), (1, 0), (1, 1), (0, 1)], dtype=float)
UNIT_CUBE = np.array([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
                      (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)], dtype=float)
HEX_EDGES = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4),
             (0, 4), (1, 5), (2, 6), (3, 7)]


def same_mesh(fx, target, **cfg):
    f = PiecewiseMap(fx.complex, fx.default, target)
    return certify(f, ExplicitDomain(fx.complex, fx.default, same_mesh=True), Config(**cfg))


def test_01_invariant_suite(acceptance):
    with acceptance(1, "chi by cell counts equals alternating Betti sum on all fixtures") as a:
        expected = {
            "sphere": (F.sphere(2), 2), "torus": (F.torus(8, 8), 0), "klein": (F.klein(6, 6), 0),
            "moebius": (F.moebius(6), 0), "disk": (F.disk(4, 16), 1), "annulus": (F.annulus(3, 24), 0),
            "ball": (F.ball_hex(4), 1), "solid torus": (F.solid_torus(), 0),
            "torus shell": (F.torus_shell(), 0),
        }
        t0 = time.perf_counter()
        for name, (fx, chi) in expected.items():
            b = betti(fx.complex).betti
            alt = sum((-1) ** k * x for k, x in enumerate(b))
            assert euler_characteristic(fx.complex) == alt == chi, name
        elapsed = time.perf_counter() - t0
        a.detail = f"{len(expected)} fixtures in {elapsed:.2f}s"
        assert elapsed < 5.0


def test_02_surface_classification(acceptance):
    with acceptance(2, "orientable surfaces g in 0..3, b in 0..3 classify to (g, b)") as a:
        t0 = time.perf_counter()
        for g in range(4):
            for b in range(4):
                c = classify_surface(F.handlebody_surface(g, b).complex)
                assert (c.orientable, c.genus, c.boundary_curves) == (True, g, b), (g, b)
        elapsed = time.perf_counter() - t0
        a.detail = f"16 surfaces in {elapsed:.2f}s"
        assert elapsed < 10.0


def test_03_bilinear_exactness(acceptance):
    with acceptance(3, "corner-sign quad certificate agrees with 101^2 oracle") as a:
        rng = np.random.default_rng(3)
        n, positives, disagreements = 1200, 0, 0
        for k in range(n):
            amp = (0.1, 0.3, 0.6, 1.0)[k % 4]
            q = UNIT_SQUARE + rng.uniform(-amp, amp, (4, 2))
            cert = bilinear_jacobian_certificate(q)
            oracle_positive = quad_jacobian_oracle(q, 101).min() > 0
            positives += oracle_positive
            disagreements += (cert.sign is Sign.POSITIVE) != oracle_positive
        a.detail = f"{n} quads, {positives} positive, {disagreements} disagreements"
        assert disagreements == 0
        assert 0 < positives < n


def test_04_trilinear_soundness(acceptance):
    with acceptance(4, "Bernstein hex certificate never Positive on a non-positive oracle") as a:
        rng = np.random.default_rng(4)
        unsound = undetected = borderline = 0
        depths = []
        for k in range(500):
            p = UNIT_CUBE + rng.uniform(-1, 1, (8, 3)) * (0.1, 0.25, 0.4, 0.5)[k % 4]
            c = trilinear_jacobian_certificate(p, max_depth=8)
            nonpositive = hex_jacobian_oracle(p, 21).min() <= 0
            borderline += nonpositive
            if c.sign is Sign.POSITIVE and nonpositive:
                unsound += 1
        for k in range(500):
            p = UNIT_CUBE + rng.uniform(-0.05, 0.05, (8, 3))
            i, j = HEX_EDGES[rng.integers(len(HEX_EDGES))]
            p[[i, j]] = p[[j, i]]
            c = trilinear_jacobian_certificate(p, max_depth=8)
            inverted = hex_jacobian_oracle(p, 21).min() <= 0
            if c.sign is Sign.POSITIVE and inverted:
                unsound += 1
            if inverted:
                refuted = c.sign in (Sign.NEGATIVE, Sign.ZERO) or c.sign_change
                undetected += not refuted
                depths.append(c.depth)
        a.detail = (f"1000 hexes, {unsound} unsound, {borderline} near-identity non-positive, "
                    f"{len(depths)} swapped inverted, "
                    f"{undetected} undetected, max depth {max(depths)}")
        assert unsound == 0 and undetected == 0
        assert len(depths) == 500 and max(depths) <= 8


def test_05_engine_routing(acceptance):
    with acceptance(5, "identity maps certify with the expected theorem ids") as a:
        cases = {"ball-hex": (F.ball_hex(3), {"T6"}), "annulus": (F.annulus(2, 16), {"T3"}),
                 "torus shell": (F.torus_shell(), {"T3"}), "rect-grid": (F.rect_grid(10, 10), {"T3", "T2"})}
        got = {}
        for name, (fx, ok) in cases.items():
            cert = same_mesh(fx, fx.default)
            got[name] = cert.theorem
            assert cert.verdict == HOMEOMORPHISM and cert.theorem in ok, (name, cert.theorem)
        shell = same_mesh(F.torus_shell(), F.torus_shell().default)
        assert any(t.startswith("T7: not applicable EqChiCondition") for t in shell.trace)
        a.detail = ", ".join(f"{k} -> {v}" for k, v in got.items())


def test_06_covering_detection(acceptance):
    with acceptance(6, "double cover gives FiniteCover(2) and count 2 at 100 points") as a:
        fx = F.double_cover_annulus(3, 16)
        cert = same_mesh(fx, fx.realizations["physical"])
        assert cert.verdict == FINITE_COVER and cert.degree == 2
        f = PiecewiseMap(fx.complex, fx.default, fx.realizations["physical"])
        gen = sample_target_points(ExplicitDomain(fx.complex, fx.default), np.random.default_rng(6))
        worst = 0.0
        for _ in range(100):
            y = next(gen)
            pc = count_preimages(f, y)
            assert pc.count == 2
            worst = max([worst] + [float(np.linalg.norm(f.evaluate(c, r) - y)) for c, r in pc.solutions])
        a.detail = f"max residual {worst:.1e}"
        assert worst < 1e-10


def test_07_refutation_localization(acceptance):
    with acceptance(7, "tangle(grid, k) is NotCertified with k and only its vertex star") as a:
        grid = F.rect_grid(20, 20)
        ks = np.random.default_rng(7).choice(grid.complex.n_cells, 20, replace=False)
        for k in ks:
            fx = F.tangle(grid, int(k))
            v = fx.meta["displaced_vertex"]
            star = {c for c, cell in enumerate(fx.complex.cells) if v in cell}
            cert = same_mesh(fx, fx.realizations["physical"])
            assert cert.verdict == NOT_CERTIFIED, k
            assert k in cert.failing_cells and set(cert.failing_cells) <= star, (k, cert.failing_cells)
        a.detail = f"k = {sorted(int(k) for k in ks)}"


def test_08_eq_chi_table(acceptance):
    with acceptance(8, "eq_chi unit table"):
        assert eq_chi_condition([2], [2]) is True
        assert eq_chi_condition([4], [2]) is False
        assert eq_chi_condition([0, 0], [0, 0]) is False
        assert eq_chi_condition([2, 0], [2, 0]) is True
        assert eq_chi_condition([-2], [-1]) is False


def test_09_invariant_mismatch(acceptance):
    with acceptance(9, "invariant witnesses refute disk vs annulus and ball vs solid torus"):
        disk, ann = F.disk(3, 12), F.annulus(2, 16)
        cert = certify(PiecewiseMap(disk.complex, disk.default, disk.default),
                       ExplicitDomain(ann.complex, ann.default))
        assert cert.verdict == NOT_HOMEOMORPHIC
        assert any(w["witness"] == "boundary_component_count" for w in cert.diagnostics)
        ball, st = F.ball_hex(3), F.solid_torus()
        cert = certify(PiecewiseMap(ball.complex, ball.default, ball.default),
                       ExplicitDomain(st.complex, st.default))
        assert cert.verdict == NOT_HOMEOMORPHIC
        w = next(w for w in cert.diagnostics if w["witness"] == "boundary_chi_multisets")
        assert w["X"] == [2] and w["Y"] == [0] and w["theorem"] == "T8"


def test_10_injectivity_performance(acceptance):
    with acceptance(10, "BVH boundary injectivity on 1e5 edges < 10 s, brute agreement <= 2e3") as a:
        fx = F.annulus(1, 50000)
        f = PiecewiseMap(fx.complex, fx.default, fx.default)
        assert len(f.boundary.complex.cells) == 100000
        t0 = time.perf_counter()
        rep = check_boundary_injectivity(f, "whole", "bvh")
        elapsed = time.perf_counter() - t0
        assert rep.status == "Verified"
        rng = np.random.default_rng(10)
        agree = failed = 0
        for n in (8, 16, 50, 100, 250, 500, 1000):
            for amp in (0.0, 0.3, 1.0, 3.0):
                base = F.annulus(1, n, 1.0, 1.5)
                h = 2 * np.pi / n
                P = base.default + rng.uniform(-amp, amp, base.default.shape) * h
                g = PiecewiseMap(base.complex, base.default, P)
                for scope in ("whole", "per-component"):
                    x = check_boundary_injectivity(g, scope, "bvh")
                    y = check_boundary_injectivity(g, scope, "brute")
                    assert (x.status, x.violations) == (y.status, y.violations), (n, amp, scope)
                    agree += 1
                    failed += x.status == "Failed"
        a.detail = f"1e5 edges in {elapsed:.2f}s, {agree} brute comparisons ({failed} with violations)"
        assert elapsed < 10.0
