"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the domain where a state or bound is defined."""


class SeparabilityError(ValueError):
    """A factorized (product-state) formula was applied to an entangled input."""


class SingularFisherError(ArithmeticError):
    """The Fisher information does not identify the difference phase."""


class TruncationError(RuntimeError):
    """The Fock cutoff discards more probability than the tolerance allows."""

    def __init__(self, message, tail_mass=None, suggested_cutoff=None):
        super().__init__(message)
        self.tail_mass = tail_mass
        self.suggested_cutoff = suggested_cutoff
