"""Exception hierarchy."""


class HermlieError(Exception):
    """Base class for all errors raised by hermlie."""


class DegenerateInput(HermlieError):
    """Input is rank deficient where a full-rank object was required."""


class NearDegenerate(DegenerateInput):
    """The angle between x and Jy-directions is too close to degenerate."""


class InvalidFactor(HermlieError):
    """A triangular metric factor has a non-positive diagonal."""


class PreconditionViolated(HermlieError):
    """The supplied ideal is not an abelian ideal of codimension two."""


class InconsistentInstance(HermlieError):
    """Extracted data contradicts the structural identities it must satisfy."""


class GenerationFailed(HermlieError):
    """The instance generator could not produce a valid instance."""

    def __init__(self, message, seed=None):
        if seed is not None:
            message = f"{message} (seed={seed})"
        super().__init__(message)
        self.seed = seed


class RangeConsistency(HermlieError):
    """A vector that must lie in the range of a matrix does not."""


class InstanceFormatError(HermlieError):
    """An instance file could not be parsed or failed validation."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
