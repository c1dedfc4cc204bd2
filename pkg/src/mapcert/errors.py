"""Exception hierarchy shared by every layer of the package."""


class MapCertError(Exception):
    """Base class for all errors raised by mapcert."""


class MeshError(MapCertError, ValueError):
    """Malformed connectivity or realization input."""


class OutOfRangeIndex(MeshError):
    pass


class DegenerateCell(MeshError):
    pass


class MixedDimension(MeshError):
    pass


class NotManifold(MeshError):
    pass


class NotSurface(MeshError):
    pass


class LengthMismatch(MapCertError, ValueError):
    pass


class DegenerateSegment(MapCertError, ValueError):
    pass


class DegenerateTriangle(MapCertError, ValueError):
    pass


class PointOnImageBoundary(MapCertError):
    """The query point lies (within tolerance) on the image of the boundary."""


class ImmersionNotVerified(MapCertError):
    pass


class HypothesesNotVerified(MapCertError):
    pass


class SamplesDisagree(MapCertError):
    def __init__(self, counts):
        super().__init__(f"preimage counts disagree across samples: {counts}")
        self.counts = list(counts)


class InternalInconsistency(MapCertError):
    pass


class DimensionMismatch(MapCertError, ValueError):
    pass


class InputNotManifold(MapCertError, ValueError):
    pass


class MeshFormatError(MeshError):
    """Parse failure in an MCMESH file."""
