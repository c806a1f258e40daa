"""Reading ontology files by format."""

from __future__ import annotations

import json
from pathlib import Path

from .errors import ParseDiagnostic
from .model import Ontology
from .obo import parse_obo
from .ofn import parse_ofn, render_axiom

OBO_SUFFIXES = (".obo",)
OFN_SUFFIXES = (".ofn", ".owl", ".fss", ".omn")


def detect_format(path: Path, text: str) -> str:
    """``obo`` or ``ofn``, by suffix and then by content."""
    suffix = path.suffix.lower()
    if suffix in OBO_SUFFIXES:
        return "obo"
    if suffix in OFN_SUFFIXES:
        return "ofn"
    head = text.lstrip()[:200]
    if head.startswith(("Prefix(", "Ontology(")):
        return "ofn"
    return "obo"


def parse_text(text: str, fmt: str, id: str = "") -> tuple[Ontology, list[ParseDiagnostic]]:
    if fmt == "obo":
        return parse_obo(text, id=id)
    if fmt == "ofn":
        return parse_ofn(text, id=id)
    raise ValueError(f"unknown format {fmt!r}")


def sidecar_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".provenance.json")


def read_provenance(onto: Ontology, side: Path) -> Ontology:
    """Attach per-axiom sources from a provenance sidecar written by merge.

    Raises ``ValueError`` if the sidecar is not in the expected shape.
    """
    try:
        doc = json.loads(side.read_text(encoding="utf-8"))
        by_text = {row["axiom"]: tuple(row["sources"]) for row in doc.get("axioms", [])}
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"malformed provenance sidecar: {exc}") from None
    prov = {}
    for ax in onto.axioms:
        src = by_text.get(render_axiom(ax))
        if src:
            prov[ax] = src
    return onto.replace(provenance=prov)


def load(path: str | Path, id: str = "", provenance: bool = True) -> tuple[Ontology, list[ParseDiagnostic]]:
    """Parse an OBO or functional-syntax file.

    Without a declared ontology id the file stem is used, so provenance
    stays readable. A ``<file>.provenance.json`` sidecar next to the file
    is picked up unless ``provenance`` is false. Raises
    :class:`ParseError` on error diagnostics.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    onto, diags = parse_text(text, detect_format(path, text), id=id)
    if not onto.id:
        onto = onto.replace(id=path.stem)
    side = sidecar_path(path)
    if provenance and side.exists():
        try:
            onto = read_provenance(onto, side)
        except (OSError, ValueError) as exc:
            diags.append(ParseDiagnostic("warning", 1, f"ignoring unreadable provenance sidecar {side.name} ({exc})"))
    return onto, diags
