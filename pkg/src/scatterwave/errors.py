"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A model file, field, or argument violates a structural invariant."""


class NumericalQualityError(RuntimeError):
    """A computed quantity failed a numerical sanity bound (e.g. unitarity)."""
