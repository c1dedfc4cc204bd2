"""Decision tree that turns verified hypotheses into a certificate.

Hypotheses are evaluated lazily and cached, so a hypothesis shared by several
theorems is computed once. Topological hypotheses (about X and Y alone) decide
whether a theorem applies at all; map hypotheses (about f) decide whether it
fires. Only map hypotheses can make a verdict NotCertified, and only invariant
witnesses can make it NotHomeomorphic.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

from .errors import DimensionMismatch, InputNotManifold, MapCertError
from .mapping.boundary import check_boundary_containment, check_boundary_injectivity, image_in_target
from .mapping.embedding import verify_embedding
from .mapping.immersion import (FAILED, INDETERMINATE, VERIFIED, check_boundary_immersion,
                                check_interior_immersion)
from .mapping.pmap import AmbientSimplyConnected, ExplicitDomain, PiecewiseMap
from .mapping.preimage import covering_degree, sampled_counts
from .topology.complex import boundary, check_manifold, component_complexes, connected_components, \
    euler_characteristic
from .topology.surfaces import classify_component, classify_surface, eq_chi_condition, orientability

HOMEOMORPHISM = "Homeomorphism"
FINITE_COVER = "FiniteCover"
NOT_HOMEOMORPHIC = "NotHomeomorphic"
NOT_CERTIFIED = "NotCertified"
INCONCLUSIVE = "Inconclusive"
UNSUPPORTED = "Unsupported"

BASE = ("ManifoldX", "ManifoldY", "ConnectedX", "ConnectedY", "EqualDim",
        "BoundaryInBoundary", "ImageInTarget", "InteriorImmersion", "BoundaryImmersion")

THEOREMS = {
    "T1": BASE,
    "T2": BASE + ("OnePointPreimage",),
    "T3": ("ManifoldX", "ManifoldY", "ConnectedX", "ConnectedY", "EqualDim", "NonemptyBoundary",
           "InteriorImmersion", "BoundaryInBoundary", "ImageInTarget", "BoundaryInjective"),
    "T4b": BASE + ("ChiEqualNonzero",),
    "T6": BASE + ("NonemptyBoundary", "EqualBoundaryCounts", "SphereBoundaryComponent"),
    "T7": BASE + ("NonemptyBoundary", "EqualBoundaryCounts", "EqChiCondition"),
    "T8": BASE + ("Dim3", "NonemptyBoundary", "EqualBoundaryCounts", "TorusKleinExcluded",
                  "ChiMultisetsEqual"),
    "T9": ("ManifoldX", "ConnectedX", "EqualDim", "AmbientSimplyConnected", "InteriorImmersion",
           "BoundaryImmersion", "PerComponentBoundaryInjective"),
}

THEOREM_NAMES = {
    "T1": "Theorem 1 (boundary-preserving local homeomorphism of compact X is a finite covering)",
    "T2": "Theorem 2 (covering with a one-point fibre)",
    "T3": "Theorem 3 (interior immersion injective on the boundary)",
    "T4b": "Theorem 4b (equal nonzero Euler characteristics)",
    "T6": "Theorem 6 (simply connected boundary component of Y)",
    "T7": "Theorem 7 (boundary Euler characteristics admit no m >= 2)",
    "T8": "Theorem 8 (equal boundary Euler characteristic multisets, 3D)",
    "T9": "Theorem 9 (immersion into a simply connected space, injective on boundary components)",
}

UNSUPPORTED_THEOREMS = {
    "T4": "finite-index subgroup condition on fundamental groups is not decidable here",
    "T5": "finite-index subgroup condition on fundamental groups is not decidable here",
}

DEFAULT_ORDER = {
    2: ("T9", "T3", "T4b", "T7", "T2"),
    3: ("T9", "T6", "T7", "T8", "T4b", "T3", "T2"),
}

MAP_HYPOTHESES = frozenset({"BoundaryInBoundary", "ImageInTarget", "InteriorImmersion",
                            "BoundaryImmersion", "BoundaryInjective",
                            "PerComponentBoundaryInjective", "OnePointPreimage"})
STRUCTURAL = ("ManifoldX", "ManifoldY", "ConnectedX", "ConnectedY", "EqualDim")


def _default_depth() -> int:
    return int(os.environ.get("MC_MAX_DEPTH", "8"))


@dataclass
class Config:
    paths: tuple | None = None           # theorem ids in evaluation order; None = default order
    max_depth: int = field(default_factory=_default_depth)
    samples: int = 7
    seed: int = 0
    dist_tol: float | None = None
    covering_fallback: bool = True
    trust_source: bool = False
    injectivity_method: str = "bvh"


@dataclass
class Hypothesis:
    id: str
    status: str
    evidence: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"id": self.id, "status": self.status, "evidence": self.evidence}


@dataclass
class Certificate:
    verdict: str
    theorem: str | None = None
    degree: int | None = None
    hypotheses: list = field(default_factory=list)       # Verified entries of the cited theorem
    diagnostics: list = field(default_factory=list)
    invariants: dict = field(default_factory=dict)
    smooth_analogue: bool = False
    smoothness_note: str = ""
    trace: list = field(default_factory=list)
    timings_ms: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return f"{FINITE_COVER}({self.degree})" if self.verdict == FINITE_COVER else self.verdict

    def diagnostic(self, hyp_id: str) -> dict | None:
        for d in self.diagnostics:
            if d.get("hypothesis") == hyp_id:
                return d
        return None

    @property
    def failing_cells(self) -> list:
        d = self.diagnostic("InteriorImmersion")
        return list(d["evidence"].get("failing_cells", [])) if d else []


# ---------------------------------------------------------------------------
# invariants


def _boundary_summary(complex_) -> dict:
    bd = boundary(complex_, check=False)
    comps = component_complexes(bd.complex) if not bd.is_empty else []
    chis = [euler_characteristic(c) for c, _ in comps]
    classes = [classify_component(c) for c, _ in comps]
    return {"boundary": bd, "components": comps, "chis": chis, "classes": classes}


@dataclass
class SpaceInvariants:
    chi: int
    orientable: bool
    n_boundary: int
    boundary_chis: list
    boundary_classes: list
    classification: dict | None

    @classmethod
    def of(cls, complex_) -> "SpaceInvariants":
        bs = _boundary_summary(complex_)
        orientable, _ = orientability(complex_)
        cls2 = classify_surface(complex_).as_dict() if complex_.dim == 2 else None
        return cls(euler_characteristic(complex_), bool(orientable), len(bs["chis"]), bs["chis"],
                   bs["classes"], cls2)

    def as_dict(self) -> dict:
        return {"chi": self.chi, "orientable": self.orientable, "boundary_components": self.n_boundary,
                "boundary_chis": self.boundary_chis, "boundary_classes": self.boundary_classes,
                "classification": self.classification}


def space_invariants(complex_) -> SpaceInvariants:
    return SpaceInvariants.of(complex_)


def _admits_scaling(a, b) -> bool:
    """True iff some integer m >= 1 has a_i = m * b_i after sorting both."""
    a = sorted(a, reverse=True)
    b = sorted(b, reverse=True)
    if len(a) != len(b):
        return False
    m = None
    for x, y in zip(a, b):
        if y == 0:
            if x != 0:
                return False
            continue
        if x % y or x // y < 1:
            return False
        if m is not None and x // y != m:
            return False
        m = x // y
    return True


def _is_torus_or_klein(cls: dict) -> bool:
    return cls.get("dim") == 2 and cls.get("chi") == 0 and cls.get("boundary_curves", 0) == 0


def invariant_screen(ix: SpaceInvariants, iy: SpaceInvariants, dim: int) -> list[dict]:
    """Topological witnesses that X and Y are not homeomorphic."""
    out = []
    if ix.chi != iy.chi:
        out.append({"witness": "euler_characteristic", "chi_X": ix.chi, "chi_Y": iy.chi})
    if ix.n_boundary != iy.n_boundary:
        out.append({"witness": "boundary_component_count", "X": ix.n_boundary, "Y": iy.n_boundary})
    if ix.orientable != iy.orientable:
        out.append({"witness": "orientability", "X": ix.orientable, "Y": iy.orientable})
    if ix.n_boundary == iy.n_boundary and not _admits_scaling(ix.boundary_chis, iy.boundary_chis):
        w = {"witness": "boundary_chi_multisets",
             "X": sorted(ix.boundary_chis, reverse=True), "Y": sorted(iy.boundary_chis, reverse=True),
             "note": "no m >= 1 has chi(A_i) = m chi(B_i) under non-increasing pairing"}
        if dim == 3 and not all(_is_torus_or_klein(c) for c in ix.boundary_classes + iy.boundary_classes):
            w["theorem"] = "T8"
            w["case"] = 2
        out.append(w)
    return out


# ---------------------------------------------------------------------------
# hypothesis evaluation


class _Evaluator:
    def __init__(self, f: PiecewiseMap, target, config: Config, ix, iy):
        self.f = f
        self.target = target
        self.config = config
        self.ix = ix
        self.iy = iy
        self.cache: dict = {}
        self.timings: dict = {}
        self.reports: dict = {}

    @property
    def explicit(self) -> bool:
        return isinstance(self.target, ExplicitDomain)

    def get(self, hid: str) -> Hypothesis:
        if hid not in self.cache:
            t0 = time.perf_counter()
            status, ev = getattr(self, "_h_" + hid)()
            self.timings[hid] = round(1000 * (time.perf_counter() - t0), 3)
            self.cache[hid] = Hypothesis(hid, status, ev)
        return self.cache[hid]

    def _need_explicit(self):
        return FAILED, {"reason": "requires an explicit target domain"}

    # structural (checked before any path, failures are input errors)

    def _h_ManifoldX(self):
        return VERIFIED, {}

    _h_ManifoldY = _h_ConnectedX = _h_ConnectedY = _h_EqualDim = _h_ManifoldX

    # topological

    def _h_NonemptyBoundary(self):
        if not self.explicit:
            return self._need_explicit()
        ok = self.ix.n_boundary > 0 and self.iy.n_boundary > 0
        return (VERIFIED if ok else FAILED), {"X": self.ix.n_boundary, "Y": self.iy.n_boundary}

    def _h_EqualBoundaryCounts(self):
        if not self.explicit:
            return self._need_explicit()
        ok = self.ix.n_boundary == self.iy.n_boundary
        return (VERIFIED if ok else FAILED), {"X": self.ix.n_boundary, "Y": self.iy.n_boundary}

    def _h_ChiEqualNonzero(self):
        if not self.explicit:
            return self._need_explicit()
        ok = self.ix.chi == self.iy.chi != 0
        return (VERIFIED if ok else FAILED), {"chi_X": self.ix.chi, "chi_Y": self.iy.chi}

    def _h_SphereBoundaryComponent(self):
        if not self.explicit:
            return self._need_explicit()
        spheres = [i for i, c in enumerate(self.iy.boundary_classes)
                   if c.get("dim") == 2 and c.get("chi") == 2 and c.get("boundary_curves") == 0]
        ev = {"sphere_components_of_dY": spheres, "boundary_chis_Y": self.iy.boundary_chis}
        return (VERIFIED if spheres else FAILED), ev

    def _h_EqChiCondition(self):
        if not self.explicit:
            return self._need_explicit()
        a, b = self.ix.boundary_chis, self.iy.boundary_chis
        ok = len(a) == len(b) and len(a) > 0 and eq_chi_condition(a, b)
        ev = {"chis_X": sorted(a, reverse=True), "chis_Y": sorted(b, reverse=True)}
        if a and all(x == 0 for x in a + b):
            ev["note"] = "all boundary characteristics vanish, so every m satisfies 0 = m * 0"
        return (VERIFIED if ok else FAILED), ev

    def _h_Dim3(self):
        return (VERIFIED if self.f.dim == 3 else FAILED), {"dim": self.f.dim}

    def _h_TorusKleinExcluded(self):
        if not self.explicit:
            return self._need_explicit()
        comps = self.ix.boundary_classes + self.iy.boundary_classes
        others = [c for c in comps if not _is_torus_or_klein(c)]
        return (VERIFIED if others else FAILED), {"non_torus_klein_components": len(others)}

    def _h_ChiMultisetsEqual(self):
        if not self.explicit:
            return self._need_explicit()
        a = sorted(self.ix.boundary_chis, reverse=True)
        b = sorted(self.iy.boundary_chis, reverse=True)
        return (VERIFIED if a == b else FAILED), {
            "chis_X": a, "chis_Y": b, "pairing": "sorted non-increasing (same as multiset equality)"}

    def _h_AmbientSimplyConnected(self):
        if isinstance(self.target, AmbientSimplyConnected):
            return VERIFIED, {"target": f"R^{self.f.ambient}"}
        return FAILED, {"reason": "target is an explicit domain, not the ambient space"}

    # map hypotheses

    def _h_InteriorImmersion(self):
        rep = check_interior_immersion(self.f, self.config.max_depth)
        self.reports["interior"] = rep
        return rep.status, rep.evidence()

    def _h_BoundaryImmersion(self):
        interior = self.reports.get("interior")
        if interior is None:
            self.get("InteriorImmersion")
            interior = self.reports["interior"]
        rep = check_boundary_immersion(self.f, interior)
        return rep.status, rep.evidence()

    def _h_BoundaryInBoundary(self):
        if not self.explicit:
            return self._need_explicit()
        rep = check_boundary_containment(self.f, self.target)
        return rep.status, rep.evidence()

    def _h_ImageInTarget(self):
        if not self.explicit:
            return self._need_explicit()
        rep = image_in_target(self.f, self.target)
        return rep.status, rep.evidence()

    def _h_BoundaryInjective(self):
        rep = check_boundary_injectivity(self.f, "whole", self.config.injectivity_method)
        return rep.status, rep.evidence()

    def _h_PerComponentBoundaryInjective(self):
        rep = check_boundary_injectivity(self.f, "per-component", self.config.injectivity_method)
        return rep.status, rep.evidence()

    def _h_OnePointPreimage(self):
        if not self.explicit:
            return self._need_explicit()
        try:
            counts, points, rejected = sampled_counts(self.f, self.target, 1, self.config.seed)
        except MapCertError as e:
            return INDETERMINATE, {"reason": str(e)}
        ev = {"point": points[0], "count": counts[0], "rejected_samples": rejected}
        return (VERIFIED if counts[0] == 1 else FAILED), ev


def _structural(f: PiecewiseMap, target) -> None:
    rep = check_manifold(f.complex)
    if not rep.ok:
        raise InputNotManifold(f"X is not a manifold: {rep.summary()}")
    n, _ = connected_components(f.complex)
    if n != 1:
        raise InputNotManifold(f"X must be connected, found {n} components")
    if isinstance(target, ExplicitDomain):
        if target.complex.dim != f.dim:
            raise DimensionMismatch(f"dim X = {f.dim} but dim Y = {target.complex.dim}")
        if target.coords.shape[1] != f.ambient:
            raise DimensionMismatch(f"f maps into R^{f.ambient} but Y lies in R^{target.coords.shape[1]}")
        if not target.same_mesh:
            rep = check_manifold(target.complex)
            if not rep.ok:
                raise InputNotManifold(f"Y is not a manifold: {rep.summary()}")
            n, _ = connected_components(target.complex)
            if n != 1:
                raise InputNotManifold(f"Y must be connected, found {n} components")
    elif isinstance(target, AmbientSimplyConnected):
        if f.codim != 0:
            raise DimensionMismatch(f"image mode needs a full-dimensional map, got a "
                                    f"{f.dim}-complex in R^{f.ambient}")
    else:
        raise TypeError(f"unknown target specification {target!r}")


def _path_order(f: PiecewiseMap, target, config: Config) -> tuple[list, list]:
    if config.paths is not None:
        requested = list(config.paths)
    elif isinstance(target, AmbientSimplyConnected):
        requested = ["T9"]
    else:
        requested = [t for t in DEFAULT_ORDER[f.dim] if t != "T9"]
    paths, unsupported = [], []
    for t in requested:
        if t in UNSUPPORTED_THEOREMS:
            unsupported.append({"theorem": t, "status": UNSUPPORTED, "reason": UNSUPPORTED_THEOREMS[t]})
        elif t in THEOREMS:
            paths.append(t)
        else:
            raise ValueError(f"unknown theorem id {t!r}")
    return paths, unsupported


def _smoothness(ev: _Evaluator) -> tuple[bool, str]:
    rep = ev.reports.get("interior")
    if rep is None or not rep.all_strict:
        return False, ""
    return True, ("nondegenerate differential on every cell interior; the smooth analogue of the "
                  "cited criterion applies cellwise. The map is piecewise smooth, not globally C^1.")


def _source_check(f: PiecewiseMap, config: Config) -> dict:
    if f.trusted_source or config.trust_source:
        return {"status": "trusted"}
    rep = verify_embedding(f.complex, f.source, config.max_depth)
    if not rep.ok:
        raise InputNotManifold(f"source realization is not a verified embedding ({rep.status}); "
                               f"evidence: {rep.evidence}")
    return {"status": rep.status}


def certify(f: PiecewiseMap, target, config: Config | None = None) -> Certificate:
    """Run the decision tree for ``f`` against ``target``."""
    config = config or Config()
    if isinstance(target, ExplicitDomain) and config.dist_tol is not None and target.dist_tol is None:
        target = ExplicitDomain(target.complex, target.coords, config.dist_tol, target.same_mesh)
    t_start = time.perf_counter()
    _structural(f, target)
    trace = ["structural: X (and Y) are connected manifolds of equal dimension"]
    src = _source_check(f, config)
    trace.append(f"source realization: {src['status']}")

    t0 = time.perf_counter()
    ix = space_invariants(f.complex)
    explicit = isinstance(target, ExplicitDomain)
    iy = (ix if target.same_mesh else space_invariants(target.complex)) if explicit else None
    timings = {"invariants": round(1000 * (time.perf_counter() - t0), 3)}
    invariants = _invariants_record(ix, iy)

    def finish(cert: Certificate) -> Certificate:
        cert.invariants = invariants
        cert.trace = trace + cert.trace
        cert.timings_ms = {**timings, **ev.timings,
                           "total": round(1000 * (time.perf_counter() - t_start), 3)}
        return cert

    ev = _Evaluator(f, target, config, ix, iy)
    if explicit:
        witnesses = invariant_screen(ix, iy, f.dim)
        if witnesses:
            trace.append("invariant screen: X and Y differ in " + ", ".join(w["witness"] for w in witnesses))
            return finish(Certificate(NOT_HOMEOMORPHIC, diagnostics=witnesses))
        trace.append("invariant screen: no topological obstruction")

    paths, unsupported = _path_order(f, target, config)
    diagnostics = list(unsupported)
    local_trace = []
    for t in paths:
        verdict, missing = _try_path(ev, t)
        if verdict:
            hyps = [ev.get(h) for h in THEOREMS[t]]
            smooth, note = _smoothness(ev)
            local_trace.append(f"{t}: all hypotheses verified")
            cert = Certificate(HOMEOMORPHISM, t, 1, hyps, diagnostics, smooth_analogue=smooth,
                               smoothness_note=note, trace=local_trace)
            if isinstance(target, AmbientSimplyConnected):
                cert.trace.append("homeomorphism onto the image f(X)")
            return finish(cert)
        h = ev.get(missing)
        kind = "map hypothesis" if missing in MAP_HYPOTHESES else "not applicable"
        local_trace.append(f"{t}: {kind} {missing} is {h.status}")

    if config.covering_fallback and explicit:
        base_ok = all(ev.get(h).status == VERIFIED for h in _lazy(ev, THEOREMS["T1"]))
        if base_ok:
            try:
                cov = covering_degree(f, target, True, config.samples, config.seed, ix.chi, iy.chi)
            except MapCertError as e:
                diagnostics.append({"hypothesis": "CoveringDegree", "status": INDETERMINATE,
                                    "evidence": {"reason": str(e)}})
                local_trace.append(f"covering fallback: {e}")
            else:
                hyps = [ev.get(h) for h in THEOREMS["T1"]]
                smooth, note = _smoothness(ev)
                local_trace.append(f"covering fallback: {cov.degree}-fold covering")
                if cov.degree >= 2:
                    cert = Certificate(FINITE_COVER, "T1", cov.degree, hyps, diagnostics,
                                       smooth_analogue=smooth, smoothness_note=note, trace=local_trace)
                    cert.diagnostics.append({"hypothesis": "CoveringDegree", "status": VERIFIED,
                                             "evidence": cov.evidence()})
                    return finish(cert)
                if cov.degree == 1:
                    one = Hypothesis("OnePointPreimage", VERIFIED,
                                     {"point": cov.points[0], "count": 1, "counts": cov.counts})
                    cert = Certificate(HOMEOMORPHISM, "T2", 1, hyps + [one], diagnostics,
                                       smooth_analogue=smooth, smoothness_note=note, trace=local_trace)
                    return finish(cert)
                diagnostics.append({"hypothesis": "CoveringDegree", "status": FAILED,
                                    "evidence": cov.evidence()})

    evaluated = list(ev.cache.values())
    failed = [h for h in evaluated if h.status == FAILED and h.id in MAP_HYPOTHESES
              and h.id != "OnePointPreimage"]
    indeterminate = [h for h in evaluated if h.status == INDETERMINATE]
    for h in failed + indeterminate:
        diagnostics.append({"hypothesis": h.id, "status": h.status, "evidence": h.evidence})
    if failed:
        verdict = NOT_CERTIFIED
    elif indeterminate:
        verdict = INCONCLUSIVE
    else:
        one = ev.cache.get("OnePointPreimage")
        if one is not None and one.status == FAILED:
            diagnostics.append({"hypothesis": one.id, "status": one.status, "evidence": one.evidence})
            verdict = NOT_CERTIFIED
        else:
            verdict = INCONCLUSIVE
            local_trace.append("no requested criterion applies to these spaces")
    return finish(Certificate(verdict, diagnostics=diagnostics, trace=local_trace))


def _lazy(ev: _Evaluator, hyps):
    """Yield hypothesis ids until the first one that is not Verified."""
    for h in _ordered(hyps):
        yield h
        if ev.get(h).status != VERIFIED:
            return


_COST = {h: i for i, h in enumerate((
    "ManifoldX", "ManifoldY", "ConnectedX", "ConnectedY", "EqualDim", "Dim3", "AmbientSimplyConnected",
    "NonemptyBoundary", "EqualBoundaryCounts", "ChiEqualNonzero", "SphereBoundaryComponent",
    "EqChiCondition", "TorusKleinExcluded", "ChiMultisetsEqual",
    "InteriorImmersion", "BoundaryImmersion", "BoundaryInBoundary", "ImageInTarget",
    "BoundaryInjective", "PerComponentBoundaryInjective", "OnePointPreimage"))}


def _ordered(hyps):
    return sorted(hyps, key=lambda h: _COST[h])


def _try_path(ev: _Evaluator, theorem: str) -> tuple[bool, str | None]:
    for h in _ordered(THEOREMS[theorem]):
        if ev.get(h).status != VERIFIED:
            return False, h
    return True, None


def _invariants_record(ix: SpaceInvariants, iy: SpaceInvariants | None) -> dict:
    return {
        "chi_X": ix.chi,
        "chi_Y": iy.chi if iy else None,
        "boundary_components": {"X": ix.n_boundary, "Y": iy.n_boundary if iy else None},
        "boundary_chis": {"X": ix.boundary_chis, "Y": iy.boundary_chis if iy else None},
        "orientable": {"X": ix.orientable, "Y": iy.orientable if iy else None},
        "classifications": {
            "X": {"space": ix.classification, "boundary": ix.boundary_classes},
            "Y": {"space": iy.classification, "boundary": iy.boundary_classes} if iy else None,
        },
    }


# ---------------------------------------------------------------------------
# explanation


def _fmt_evidence(ev: dict, limit: int = 8) -> str:
    parts = []
    for k, v in ev.items():
        if isinstance(v, list) and len(v) > limit:
            v = v[:limit] + [f"... ({len(v)} total)"]
        parts.append(f"{k}={v}")
    return ", ".join(parts)


def explain(cert: Certificate) -> str:
    """Human-readable trace of a certificate."""
    lines = [f"verdict: {cert.label}"]
    if cert.theorem:
        lines.append(f"criterion: {cert.theorem}, {THEOREM_NAMES[cert.theorem]}")
    inv = cert.invariants
    if inv:
        lines.append(f"invariants: chi(X)={inv['chi_X']}, chi(Y)={inv['chi_Y']}, "
                     f"boundary components X={inv['boundary_components']['X']} "
                     f"Y={inv['boundary_components']['Y']}")
    if cert.hypotheses:
        lines.append("verified hypotheses:")
        for h in cert.hypotheses:
            lines.append(f"  {h.id}: {_fmt_evidence(h.evidence)}" if h.evidence else f"  {h.id}")
    if cert.verdict == FINITE_COVER:
        cov = cert.diagnostic("CoveringDegree")["evidence"]
        lines.append(f"sampled preimage counts: {cov['counts']} ({cov['chi_check']})")
    if cert.verdict == NOT_HOMEOMORPHIC:
        lines.append("topological witnesses:")
        for w in cert.diagnostics:
            if w["witness"] == "euler_characteristic":
                lines.append(f"  Euler characteristic: chi(X)={w['chi_X']} != chi(Y)={w['chi_Y']}")
            elif w["witness"] == "boundary_chi_multisets":
                tag = " (Theorem 8, case 2: no homeomorphism exists)" if w.get("theorem") else ""
                lines.append(f"  boundary chi multisets: X={w['X']} Y={w['Y']}{tag}")
            else:
                lines.append(f"  {w['witness']}: X={w['X']} Y={w['Y']}")
    else:
        shown = [d for d in cert.diagnostics
                 if not (cert.verdict == FINITE_COVER and d.get("hypothesis") == "CoveringDegree")]
        if shown:
            lines.append("diagnostics:")
        for d in shown:
            name = d.get("hypothesis") or d.get("theorem")
            lines.append(f"  {name} [{d['status']}]: {_fmt_evidence(d.get('evidence', d))}")
    if cert.smoothness_note:
        lines.append(f"smoothness: {cert.smoothness_note}")
    lines.append("trace:")
    lines.extend(f"  {t}" for t in cert.trace)
    return "\n".join(lines)
