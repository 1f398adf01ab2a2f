"""Exception hierarchy for the fbmpv package."""


class FbmpvError(Exception):
    """Base class for all package-specific errors."""


class WrongRegime(FbmpvError):
    """An operation was called with a Hurst index outside its validity range."""


class DegeneratePair(FbmpvError):
    """A pair (s, r) with zero conditional variance where a positive one is required."""


class SingularDiagonal(FbmpvError):
    """The long-memory kernel was evaluated on its diagonal s = r."""


class ConsistencyError(FbmpvError):
    """An exact nonnegative quantity came out significantly negative (implementation bug)."""


class GridTooLarge(FbmpvError):
    """Grid size exceeds the configured cap of an O(n^3) routine."""


class NotPositiveDefinite(FbmpvError):
    """Covariance Gram matrix failed to factor; signals a covariance bug, not user error."""


class EmbeddingFailure(FbmpvError):
    """Circulant embedding produced eigenvalues below the clipping tolerance."""


class EmptyGrid(FbmpvError):
    """A spatial grid with no bins or nonpositive bandwidth."""


class OrderViolation(FbmpvError):
    """Interval endpoints not in the required strict order."""


class SingularityOffGrid(FbmpvError):
    """Principal-value singularity not strictly inside the sampled grid."""


class LadderTooFine(FbmpvError):
    """Exclusion radius smaller than the grid can resolve."""


class LadderBelowResolution(FbmpvError):
    """Epsilon ladder extends below the path resolution floor."""


class LagNotOnGrid(FbmpvError):
    """Covariation lag is not a positive multiple of the grid step."""


class QuadratureNonConvergence(FbmpvError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Carries the achieved error estimate in ``achieved``.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ConfigError(FbmpvError):
    """Invalid experiment configuration; message names the offending field."""
