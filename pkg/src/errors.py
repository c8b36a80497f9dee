"""Exception types raised by conetoric.

Everything derives from ValueError so that callers which only care about
"bad input" can keep catching ValueError, the way the entry point does.
"""

from typing import Optional


class ConeToricError(ValueError):
    """Base class for all conetoric errors."""


class ZeroVector(ConeToricError):
    """A zero vector was given where a nonzero lattice vector is required."""


class RankMismatch(ConeToricError):
    """Vectors, matrices or cones of incompatible ambient rank were combined."""


class DegenerateParallelogram(ConeToricError):
    """The two edge vectors of a parallelogram are parallel."""


class NotFullDimensional(ConeToricError):
    """The cone has empty interior."""


class NoNormals(ConeToricError):
    """The cone is the whole space and has no reduction presentation."""


class NotPrimitive(ConeToricError):
    """A weight was expected to be primitive (coordinate gcd 1)."""


class DegenerateWedge(ConeToricError):
    """The two edge weights of a rank-2 wedge are parallel."""


class InvalidInput(ConeToricError):
    """A moment input violates the preconditions of classification."""


class CapExceeded(ConeToricError):
    """The equivalence search would exceed the configured ray cap."""


class DocumentError(ConeToricError):
    """A cone document could not be parsed.

    Attributes:
        source: File name (or "<stdin>") the document came from
        line: 1-based line the problem was detected on, if known
    """

    def __init__(self, message: str, source: str = "<input>", line: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.source = source
        self.line = line

    def __str__(self) -> str:
        if self.line is not None:
            return f"{self.source}:{self.line}: {self.message}"
        return f"{self.source}: {self.message}"
