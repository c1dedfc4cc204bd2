"""Piecewise-interpolated maps and the checks that feed the criteria engine."""

from .boundary import (ContainmentReport, InjectivityReport, check_boundary_containment,
                       check_boundary_injectivity, image_in_target, point_in_domain,
                       surface_injectivity)
from .embedding import EmbeddingReport, verify_embedding
from .immersion import (FAILED, INDETERMINATE, VERIFIED, BoundaryImmersionReport, ImmersionReport,
                        check_boundary_immersion, check_interior_immersion, combine)
from .pmap import AmbientSimplyConnected, ExplicitDomain, PiecewiseMap, TargetSpec
from .preimage import CoveringResult, PreimageCount, count_preimages, covering_degree, \
    sample_target_points, sampled_counts

__all__ = [
    "ContainmentReport", "InjectivityReport", "check_boundary_containment",
    "check_boundary_injectivity", "image_in_target", "point_in_domain", "surface_injectivity",
    "EmbeddingReport", "verify_embedding",
    "FAILED", "INDETERMINATE", "VERIFIED", "BoundaryImmersionReport", "ImmersionReport",
    "check_boundary_immersion", "check_interior_immersion", "combine",
    "AmbientSimplyConnected", "ExplicitDomain", "PiecewiseMap", "TargetSpec",
    "CoveringResult", "PreimageCount", "count_preimages", "covering_degree",
    "sample_target_points", "sampled_counts",
]
