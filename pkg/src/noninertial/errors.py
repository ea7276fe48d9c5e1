"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Shapes or subsystem signatures do not match."""


class DivergenceError(ValueError):
    """The requested parameter sits at a point where the acceleration diverges."""


class BudgetError(RuntimeError):
    """A dense construction would exceed the configured size budget."""


class UnsupportedDimensionError(ValueError):
    """The routine is only defined for a restricted set of dimensions."""
