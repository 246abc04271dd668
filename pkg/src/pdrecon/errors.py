"""Exception hierarchy shared by all pdrecon modules."""


class PdreconError(Exception):
    """Base class for every error raised by this package."""


class ZeroProjection(PdreconError):
    pass


class DegenerateInput(PdreconError):
    pass


class TiedAngle(PdreconError):
    pass


class DependentDirections(PdreconError):
    pass


class GenerationFailure(PdreconError):
    pass


class ParseError(PdreconError):
    pass


class GpViolation(PdreconError):
    """Vertex set violates general position; ``report`` holds the details."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"general position violated: {report.summary()}")


class TiedHeights(PdreconError):
    """Two vertices share a height in the query direction."""

    def __init__(self, i, j, height):
        self.pair = (i, j)
        self.height = height
        super().__init__(f"vertices {i} and {j} tie at height {height!r}")


class NegativeCount(PdreconError):
    pass


class InconsistentSplit(PdreconError):
    pass


class VertexMismatch(PdreconError):
    pass


class AmbiguousCandidates(PdreconError):
    pass
