from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str  # "warning" | "error"
    line: int
    message: str
    code: str = ""  # "fragment": a logical construct outside the supported DL was skipped

    def __str__(self) -> str:
        return f"{self.line}: {self.severity}: {self.message}"


class ParseError(ValueError):
    """Raised when a document has error diagnostics; carries all of them."""

    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = list(diagnostics)
        errors = [d for d in self.diagnostics if d.severity == "error"]
        first = errors[0] if errors else None
        msg = f"line {first.line}: {first.message}" if first else "parse error"
        if len(errors) > 1:
            msg += f" (+{len(errors) - 1} more)"
        super().__init__(msg)


class FragmentError(ValueError):
    """An axiom or concept lies outside the supported DL fragment."""


class RuleCollisionError(ValueError):
    def __init__(self, iri: str, rules):
        self.iri = iri
        self.rules = list(rules)
        super().__init__(f"{iri} matches more than one rule: {self.rules}")


class NotEntailedError(ValueError):
    """A justification was requested for an axiom the ontology does not entail."""
