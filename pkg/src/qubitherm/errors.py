"""Exception types shared across the package."""


class QubithermError(ValueError):
    """Base class for all errors raised by this package."""


class InvalidStateError(QubithermError):
    """A matrix or vector fails the requirements for a physical qubit state."""


class NonHermitianError(QubithermError):
    """An operator expected to be Hermitian is not, beyond tolerance."""


class DegeneratePairError(QubithermError):
    """Two states coincide, so no observable can tell them apart."""


class InfiniteTimeError(QubithermError):
    """A requested conversion corresponds to an unbounded interaction time."""


class ConfigError(QubithermError):
    """An experiment configuration is malformed or inconsistent."""
