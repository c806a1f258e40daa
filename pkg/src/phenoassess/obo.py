"""OBO 1.2 flat-file reader with a fixed OBO -> DL translation.

Term stanzas::

    id: X                      atomic concept X
    name: N                    label of X
    is_a: Y                    X ⊑ Y
    relationship: R Y          X ⊑ ∃R.Y
    intersection_of: G         X ≡ G ⊓ ∃R.Y ⊓ ...
    intersection_of: R Y
    disjoint_from: Y           X, Y disjoint
    xref: Z                    annotation only, never logical
    is_obsolete: true          stanza dropped (warning)

Typedef stanzas map ``is_a`` to role inclusion, ``is_transitive: true`` to a
transitivity axiom and ``domain``/``range`` to the corresponding axioms.
Identifiers of the form ``PFX:NNN`` are canonicalized to ``PFX_NNN``.
"""

from __future__ import annotations

import re

from .errors import ParseDiagnostic, ParseError
from .model import (
    Atomic, DisjointClasses, Domain, EquivalentClasses, Exists, Ontology,
    Range, SubClassOf, SubRoleOf, TransitiveRole, conjunction,
)

_HEADER_RE = re.compile(r"^\[([A-Za-z]+)\]$")
_CURIE_RE = re.compile(r"^([A-Za-z][A-Za-z0-9.\-]*):([^:\s]+)$")
_TAG_RE = re.compile(r"^([A-Za-z][A-Za-z0-9_\-]*):(.*)$")

_EDITORIAL = frozenset({
    "def", "comment", "synonym", "exact_synonym", "narrow_synonym",
    "broad_synonym", "related_synonym", "namespace", "subset", "alt_id",
    "created_by", "creation_date", "property_value", "consider",
    "replaced_by", "is_anonymous", "builtin", "is_metadata_tag",
    "is_class_level", "is_cyclic",
})
# logical tags outside the supported fragment; skipping them loses entailments
_LOGICAL = frozenset({
    "union_of", "equivalent_to", "inverse_of", "transitive_over",
    "holds_over_chain", "equivalent_to_chain", "disjoint_over", "is_symmetric",
    "is_reflexive", "is_functional", "is_inverse_functional", "is_asymmetric",
    "instance_of",
})
_TERM_TAGS = frozenset({"id", "name", "is_a", "relationship", "intersection_of",
                        "disjoint_from", "is_obsolete", "xref"})
_TYPEDEF_TAGS = frozenset({"id", "name", "is_a", "is_transitive", "domain",
                           "range", "is_obsolete", "xref"})


def canonical_id(raw: str) -> str:
    """``HP:0000969`` -> ``HP_0000969``; bare relation names pass through."""
    m = _CURIE_RE.match(raw)
    if m and not raw.startswith(("http:", "https:")):
        return f"{m.group(1)}_{m.group(2)}"
    return raw


def _strip_value(value: str) -> str:
    # trailing "! comment" and "{modifiers}"; "\!" is an escaped bang
    out = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch == "\\" and i + 1 < len(value):
            out.append(value[i + 1])
            i += 2
            continue
        if ch == "!":
            break
        out.append(ch)
        i += 1
    text = "".join(out).strip()
    if text.endswith("}") and "{" in text:
        text = text[: text.rindex("{")].strip()
    return text


class _Stanza:
    def __init__(self, kind: str, line: int):
        self.kind = kind
        self.line = line
        self.tags: list[tuple[str, str, int]] = []


def parse_obo(text: str, id: str = "") -> tuple[Ontology, list[ParseDiagnostic]]:
    """Parse an OBO document into an ontology plus warning diagnostics.

    Raises :class:`ParseError` (carrying every diagnostic) if any line is
    malformed.
    """
    diags: list[ParseDiagnostic] = []
    stanzas: list[_Stanza] = []
    current: _Stanza | None = None
    skipping = False
    ontology_id = id

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("!"):
            continue
        if line.startswith("["):
            m = _HEADER_RE.match(line)
            if not m:
                diags.append(ParseDiagnostic("error", lineno, f"malformed stanza header {line!r}"))
                current, skipping = None, True
                continue
            kind = m.group(1)
            if kind not in ("Term", "Typedef"):
                diags.append(ParseDiagnostic("warning", lineno, f"unsupported stanza [{kind}] skipped"))
                current, skipping = None, True
                continue
            current, skipping = _Stanza(kind, lineno), False
            stanzas.append(current)
            continue
        m = _TAG_RE.match(line)
        if not m:
            diags.append(ParseDiagnostic("error", lineno, f"unparseable line {line!r}"))
            continue
        tag, value = m.group(1), m.group(2).strip()
        if skipping:
            continue
        if current is None:
            if tag == "ontology" and not ontology_id:
                ontology_id = value
            continue
        current.tags.append((tag, value, lineno))

    axioms = []
    labels: dict[str, str] = {}
    annotations: dict[str, list[tuple[str, str]]] = {}
    for st in stanzas:
        _translate(st, axioms, labels, annotations, diags)

    if any(d.severity == "error" for d in diags):
        raise ParseError(diags)
    onto = Ontology(axioms, labels=labels, id=ontology_id,
                    annotations={k: tuple(v) for k, v in annotations.items()})
    return onto, diags


def _translate(st: _Stanza, axioms, labels, annotations, diags) -> None:
    ids = [(v, ln) for t, v, ln in st.tags if t == "id"]
    if not ids or not _strip_value(ids[0][0]):
        diags.append(ParseDiagnostic("error", st.line, f"[{st.kind}] stanza without id"))
        return
    me = canonical_id(_strip_value(ids[0][0]))
    for t, v, ln in st.tags:
        if t == "is_obsolete" and _strip_value(v).lower() == "true":
            diags.append(ParseDiagnostic("warning", st.line, f"obsolete {me} skipped"))
            return

    known = _TERM_TAGS if st.kind == "Term" else _TYPEDEF_TAGS
    out = []
    genus, differentia = [], []
    for tag, raw, ln in st.tags:
        if tag in ("id", "is_obsolete"):
            continue
        if tag not in known:
            if tag not in _EDITORIAL:
                diags.append(ParseDiagnostic("warning", ln, f"unsupported tag {tag!r} ignored",
                                             "fragment" if tag in _LOGICAL else ""))
            continue
        if tag == "name":
            labels[me] = _strip_value(raw)
            continue
        if tag == "xref":
            annotations.setdefault(me, []).append(("xref", _strip_value(raw).split(" ")[0]))
            continue
        value = _strip_value(raw)
        parts = value.split()
        if not parts:
            diags.append(ParseDiagnostic("error", ln, f"empty value for {tag!r}"))
            continue
        if st.kind == "Term":
            if tag == "is_a":
                out.append(SubClassOf(Atomic(me), Atomic(canonical_id(parts[0]))))
            elif tag == "relationship":
                if len(parts) != 2:
                    diags.append(ParseDiagnostic("error", ln, "relationship needs '<relation> <target>'"))
                    continue
                out.append(SubClassOf(Atomic(me), Exists(canonical_id(parts[0]), Atomic(canonical_id(parts[1])))))
            elif tag == "disjoint_from":
                out.append(DisjointClasses((Atomic(me), Atomic(canonical_id(parts[0])))))
            elif tag == "intersection_of":
                if len(parts) == 1:
                    genus.append(Atomic(canonical_id(parts[0])))
                elif len(parts) == 2:
                    differentia.append(Exists(canonical_id(parts[0]), Atomic(canonical_id(parts[1]))))
                else:
                    diags.append(ParseDiagnostic("error", ln, "intersection_of needs '<class>' or '<relation> <class>'"))
        else:
            if tag == "is_a":
                out.append(SubRoleOf(me, canonical_id(parts[0])))
            elif tag == "is_transitive":
                if parts[0].lower() == "true":
                    out.append(TransitiveRole(me))
            elif tag == "domain":
                out.append(Domain(me, Atomic(canonical_id(parts[0]))))
            elif tag == "range":
                out.append(Range(me, Atomic(canonical_id(parts[0]))))

    if genus or differentia:
        if len(genus) + len(differentia) < 2:
            diags.append(ParseDiagnostic(
                "warning", st.line, f"{me}: single intersection_of line ignored"))
        else:
            definition = conjunction(*genus, *differentia)
            if definition != Atomic(me):
                out.append(EquivalentClasses((Atomic(me), definition)))
    axioms.extend(out)
