"""Exception hierarchy shared by all modules."""


class RamseyLiftError(Exception):
    """Base class for all library errors."""


class DomainError(RamseyLiftError):
    """Invalid input: malformed word, structure, map or argument."""


class BudgetError(RamseyLiftError):
    """A computation was refused because it would exceed an explicit budget."""


class WordError(DomainError):
    """Invalid parameter word.  Carries the offending 1-based position when known."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class StructureError(DomainError):
    """A structure axiom failed.  The message names the axiom and witnesses."""


class EmbeddingError(DomainError):
    """A candidate map is not an embedding.  The message names the clause and a witness pair."""


class VerificationError(DomainError):
    """A property that the construction guarantees was found violated at runtime."""


class SpectrumError(DomainError):
    """Invalid or unsuitable distance spectrum (unsorted, negative, or not tight)."""


class PremiseError(DomainError):
    """A supplied object fails the arrow premise; carries the bad coloring."""

    def __init__(self, message, bad_coloring=None):
        super().__init__(message)
        self.bad_coloring = bad_coloring
