"""Exception types shared across the package."""


class ResourceCapError(RuntimeError):
    """An exact computation would exceed a configured size cap."""


class RootSolverError(ArithmeticError):
    """Polynomial roots could not be certified to the required tolerance."""


class NonRealRootError(RootSolverError):
    """A polynomial expected to be real-rooted produced a non-real root."""


class GenerationError(RuntimeError):
    """A randomized generator exhausted its rejection budget."""
