"""Exception types shared across permlab."""

from __future__ import annotations

from typing import Any


class PermlabError(Exception):
    """Base class for permlab errors."""


class NotAPermutationError(PermlabError, ValueError):
    pass


class HypothesisViolation(PermlabError, ValueError):
    """A pattern does not satisfy the structural hypotheses an operation needs."""


class BudgetExceeded(PermlabError, RuntimeError):
    pass


class ProofGapError(PermlabError, AssertionError):
    """A runtime assertion inside one of the implemented constructions failed.

    ``witness`` is a JSON-serializable dict describing the offending input, so
    that verifiers can collect and print it instead of aborting.
    """

    def __init__(self, message: str, witness: dict[str, Any] | None = None):
        super().__init__(message)
        self.message = message
        self.witness = dict(witness or {})

    def to_dict(self) -> dict[str, Any]:
        return {"error": self.message, "witness": self.witness}
