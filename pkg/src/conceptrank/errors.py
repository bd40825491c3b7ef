"""Exception types shared across the package."""


class ExplainerError(Exception):
    """Base class for every package-specific error."""


class FormatError(ExplainerError):
    """A file does not match its schema; the message names the offending field."""


class ValidationError(ExplainerError):
    """Structurally well-formed data violates a domain invariant."""


class InvalidNodeSet(ExplainerError):
    """A node index is outside the graph it refers to."""


class EmptyNodeSet(ExplainerError):
    """An operation received an empty node set where at least one node is required."""


class NotAnEdge(ExplainerError):
    """The referenced node pair is not an edge of the graph."""


class DimensionMismatch(ExplainerError):
    """Matrix or feature dimensions do not chain."""


class ConceptSizeZero(ExplainerError):
    """The requested concept size floor(N * p) is zero."""


class TooFewConcepts(ExplainerError):
    """Fewer than two concepts were requested; the concept graph needs at least two nodes."""


class NotStochastic(ExplainerError):
    """A matrix expected to be row-stochastic is not."""


class TooLargeForExact(ExplainerError):
    """The coalition is too large for exact Shapley enumeration."""


class ShapeMismatch(ExplainerError):
    """Array shapes are inconsistent with each other."""
