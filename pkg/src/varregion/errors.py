"""Exception types shared across the package."""


class VarRegionError(Exception):
    pass


class InvalidParams(VarRegionError, ValueError):
    """Parameters fall outside the domain where an operation is defined."""


class NonConvergence(VarRegionError, ArithmeticError):
    """Adaptive quadrature exhausted its subdivision budget."""


class PoleAtInput(VarRegionError, ZeroDivisionError):
    pass


class BranchAmbiguity(VarRegionError, ValueError):
    """A multivalued function cannot be continued reliably at the given point."""
