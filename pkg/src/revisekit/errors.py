"""Exception types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """1-based position of a token or error inside an input text."""

    line: int
    column: int
    length: int = 1

    def __post_init__(self) -> None:
        if self.line < 1 or self.column < 1:
            raise ValueError("spans are 1-based")

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class RevisekitError(Exception):
    """Base class for all package errors."""


class ArityMismatch(RevisekitError):
    """A predicate occurs with two different arities in one problem instance."""

    def __init__(self, predicate: str, first: int, second: int):
        super().__init__(f"predicate {predicate!r} used with arity {first} and {second}")
        self.predicate = predicate
        self.arities = (first, second)


class EmptyUniverse(RevisekitError):
    """A rule with variables cannot be grounded over an empty constant set."""


class CapExceeded(RevisekitError):
    """A size guard was hit before an exponential enumeration."""

    def __init__(self, count: int, cap: int, what: str = "items"):
        super().__init__(f"{count} {what} exceed the configured cap of {cap}")
        self.count = count
        self.cap = cap


class InconsistentBase(RevisekitError):
    """Consequences are undefined for an inconsistent base (explosion)."""


class ParseError(RevisekitError):
    """Syntax error with a source span and the token classes that were expected."""

    def __init__(self, message: str, span: SourceSpan, expected: tuple[str, ...] = ()):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span
        self.expected = expected


class ScenarioInvalid(RevisekitError):
    """A scenario file violates one of the load-time invariants."""

    def __init__(self, invariant: str, detail: str = ""):
        super().__init__(f"scenario invariant violated: {invariant}" + (f" ({detail})" if detail else ""))
        self.invariant = invariant


class InvalidExplanation(RevisekitError):
    """The supplied explanation fails one of its three validity conditions."""

    def __init__(self, report):
        super().__init__(f"invalid explanation: {report.summary()}")
        self.report = report


class NoCandidates(RevisekitError):
    """A selection was requested over an empty candidate list."""


class UnknownLabel(RevisekitError):
    """A revision result references statement labels the scenario does not define."""


class GenerationFailed(RevisekitError):
    """The random-instance generator ran out of retries."""


class NonDeterministicStrategy(RevisekitError):
    """The requested check needs a strategy that is a pure function of the candidate list."""
