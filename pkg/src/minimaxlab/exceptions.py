"""Exception hierarchy.

Every validation problem derives from :class:`ValidationError` (itself a
``ValueError``), so callers that only care about "bad input" can catch one
class.  Solver failures derive from :class:`SolverError`.
"""


class MinimaxLabError(Exception):
    """Base class for all package errors."""


class ValidationError(MinimaxLabError, ValueError):
    """Input failed structural or numerical validation."""


class NonFiniteEntry(ValidationError):
    def __init__(self, i, j):
        self.i = i
        self.j = j
        super().__init__(f"non-finite entry at ({i}, {j})")


class EmptyDimension(ValidationError):
    pass


class RaggedRows(ValidationError):
    pass


class NegativeWeight(ValidationError):
    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"weight {index} is negative ({value!r})")


class SumNotOne(ValidationError):
    def __init__(self, total):
        self.total = total
        super().__init__(f"weights sum to {total!r}, expected 1")


class LengthMismatch(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class TOutOfRange(ValidationError):
    pass


class SOutOfRange(ValidationError):
    pass


class NegativeK(ValidationError):
    pass


class ShapeCap(ValidationError):
    pass


class BadWindow(ValidationError):
    pass


class DepthTooLarge(ValidationError):
    pass


class NotTConvexlike(MinimaxLabError):
    """A pairwise t-convexlike witness was missing while walking a mixture tree."""

    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"no t-convexlike witness for row pair {pair}")


class SolverError(MinimaxLabError):
    pass


class CycleLimitExceeded(SolverError):
    pass
