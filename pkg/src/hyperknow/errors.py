"""Exception types shared across the package."""

from __future__ import annotations


class HyperknowError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(HyperknowError):
    """A structure violates its defining conditions.

    Carries *every* violation found, not just the first: model files are
    typically hand-authored and fixing them one message at a time is painful.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class SortError(HyperknowError):
    """A formula is not well-sorted against the signature."""

    def __init__(self, message, node=None, span=None):
        self.node = node
        self.span = span if span is not None else getattr(node, "span", None)
        super().__init__(message)


class UnknownAtomError(SortError):
    pass


class WrongSortAtomError(SortError):
    """Environment atom in an agent position, or the other way around."""


class AgentMismatchError(SortError):
    """An agent formula of sort a used where sort b was required."""


class UnknownAgentError(SortError):
    pass


class ParseError(HyperknowError):
    """Lexical or syntactic error. Always carries a source span."""

    def __init__(self, message, span):
        self.span = span
        super().__init__(f"{message} (line {span.line}, column {span.column})")


class UnknownPointError(HyperknowError):
    """Evaluation point (edge, or view of an agent) not present in the model."""


class NonEmptyAgentAtomsError(HyperknowError):
    """Frame conversion requires empty agent atom sets on the hypergraph side."""


class BoundsError(HyperknowError):
    """Search bounds are invalid or exceed the hard caps."""


class DerivationCheckError(HyperknowError):
    """A derivation line does not check. ``line`` is the 1-based line index."""

    def __init__(self, line, kind, message):
        self.line = line
        self.kind = kind
        super().__init__(f"line {line}: {kind}: {message}")
