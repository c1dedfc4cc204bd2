"""Checks that a realization embeds its complex, so it can serve as a domain."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..topology.complex import CellComplex
from .boundary import check_boundary_injectivity, surface_injectivity
from .immersion import VERIFIED, check_interior_immersion, combine
from .pmap import PiecewiseMap


@dataclass
class EmbeddingReport:
    status: str
    evidence: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == VERIFIED


def verify_embedding(complex_: CellComplex, coords, max_depth: int = 8) -> EmbeddingReport:
    """Verify that ``coords`` realizes ``complex_`` as an embedded manifold.

    Full-dimensional realizations need a coherently oriented, nondegenerate
    interior and a non-self-intersecting boundary. Surfaces in R^3 need
    nondegenerate faces, locally flat vertex stars and no self-intersections.
    """
    coords = np.asarray(coords, dtype=float)
    ident = PiecewiseMap(complex_, coords, coords)
    imm = check_interior_immersion(ident, max_depth)
    if ident.codim == 0:
        inj = check_boundary_injectivity(ident, "whole")
    else:
        inj = surface_injectivity(coords, complex_)
    status = combine(imm.status, inj.status)
    return EmbeddingReport(status, {"immersion": imm.evidence(), "injectivity": inj.evidence()})
