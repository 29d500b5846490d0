"""Exception hierarchy shared by all germflow modules."""


class GermflowError(Exception):
    """Base class for all library errors."""


class DomainError(GermflowError):
    """A point lies outside the field's domain (0, delta], or an iterated
    logarithm is undefined there."""


class DegeneracyError(GermflowError):
    """A field denominator 1 + u reached zero or below: the construction
    invariants of the family are violated on the requested domain."""


class ParseError(GermflowError):
    """A field-spec string or CLI argument could not be parsed."""


class NonConvergence(GermflowError):
    """An iterative estimate failed its Cauchy/residual tolerance."""


class BudgetExceeded(GermflowError):
    """An adaptive computation exceeded its evaluation budget."""


class NonFiniteError(GermflowError):
    """An evaluator returned a non-finite value inside the integration range."""


class RangeExceeded(GermflowError):
    """A flow/time-map request left the covered range (above the base point
    or deeper than the configured double-log cap)."""


class InsufficientSamples(GermflowError):
    """Too few samples for a tail classification or a fit."""


class NotHyperbolic(GermflowError):
    """A field failed the multiplier (hyperbolicity) check."""


class BoundViolation(GermflowError):
    """A certified inequality check failed."""
