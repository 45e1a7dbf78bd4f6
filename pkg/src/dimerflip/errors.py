"""Exception hierarchy shared across the package."""


class DimerError(ValueError):
    """Base class for all contract violations raised by dimerflip."""


class LatticeError(DimerError):
    pass


class ConfigError(DimerError):
    pass


class CycleError(DimerError):
    """A vertex sequence is not a usable (alternating) cycle."""


class CapExceeded(DimerError):
    """An exhaustive computation was asked to run past its size cap."""


class CanonicalizationError(DimerError):
    """A canonicalizer reached a state its case analysis rules out."""
