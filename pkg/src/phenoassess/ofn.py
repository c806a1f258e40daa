"""Reader and writer for a subset of OWL 2 functional-style syntax.

Entity IRIs are reduced to their local name (the part after the last ``#`` or
``/``), which is the canonical identifier used throughout the package.
"""

from __future__ import annotations

import re
from urllib.parse import quote, unquote

from .errors import ParseDiagnostic, ParseError
from .model import (
    BOTTOM, TOP, And, Atomic, Axiom, Concept, DisjointClasses, Domain,
    EquivalentClasses, Exists, Forall, Not, Ontology, Or, Range, SubClassOf,
    SubRoleOf, TransitiveRole, conjunction, disjunction,
)

OBO_BASE = "http://purl.obolibrary.org/obo/"
STANDARD_PREFIXES = {
    "owl": "http://www.w3.org/2002/07/owl#",
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
}
OBO_IN_OWL = "http://www.geneontology.org/formats/oboInOwl#"
RDFS_LABEL = STANDARD_PREFIXES["rdfs"] + "label"
HAS_DBXREF = OBO_IN_OWL + "hasDbXref"
OWL_THING = STANDARD_PREFIXES["owl"] + "Thing"
OWL_NOTHING = STANDARD_PREFIXES["owl"] + "Nothing"

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<open>\()
  | (?P<close>\))
  | (?P<iri><[^>\s]*>)
  | (?P<string>"(?:[^"\\]|\\.)*"(?:@[A-Za-z\-]+|\^\^[^\s()]+)?)
  | (?P<eq>=)
  | (?P<name>[^\s()<>"=]+)
    """,
    re.VERBOSE,
)


class _Node:
    """``Head(args...)`` with the line of its head token."""

    __slots__ = ("head", "args", "line")

    def __init__(self, head: str, line: int):
        self.head = head
        self.args: list = []
        self.line = line


class _Tok:
    __slots__ = ("kind", "text", "line")

    def __init__(self, kind, text, line):
        self.kind, self.text, self.line = kind, text, line


class _Unsupported(Exception):
    def __init__(self, message: str, fragment: bool = True):
        super().__init__(message)
        self.fragment = fragment


def _tokenize(text: str, diags: list[ParseDiagnostic]) -> list[_Tok]:
    toks = []
    line = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            diags.append(ParseDiagnostic("error", line, f"unexpected character {text[pos]!r}"))
            pos += 1
            continue
        kind = m.lastgroup
        chunk = m.group()
        if kind == "nl":
            line += 1
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, chunk, line))
            line += chunk.count("\n")
        pos = m.end()
    return toks


def _tree(toks: list[_Tok], diags: list[ParseDiagnostic]) -> list:
    top: list = []
    stack: list[_Node] = []
    i = 0
    while i < len(toks):
        t = toks[i]
        target = stack[-1].args if stack else top
        if t.kind == "name" and i + 1 < len(toks) and toks[i + 1].kind == "open":
            node = _Node(t.text, t.line)
            target.append(node)
            stack.append(node)
            i += 2
            continue
        if t.kind == "open":
            diags.append(ParseDiagnostic("error", t.line, "'(' without a construct name"))
            node = _Node("", t.line)
            target.append(node)
            stack.append(node)
        elif t.kind == "close":
            if not stack:
                diags.append(ParseDiagnostic("error", t.line, "unbalanced ')'"))
            else:
                stack.pop()
        else:
            target.append(t)
        i += 1
    for node in stack:
        diags.append(ParseDiagnostic("error", node.line, f"unbalanced '(' after {node.head or 'construct'}"))
    return top


def local_name(iri: str) -> str:
    cut = max(iri.rfind("#"), iri.rfind("/"))
    local = iri[cut + 1:] if cut >= 0 else iri
    return unquote(local) if local else iri


class _Reader:
    def __init__(self, diags: list[ParseDiagnostic]):
        self.diags = diags
        self.prefixes = dict(STANDARD_PREFIXES)

    def expand(self, tok) -> str:
        if not isinstance(tok, _Tok):
            raise _Unsupported(f"expected an entity, found {tok.head}(...)")
        if tok.kind == "iri":
            return tok.text[1:-1]
        if tok.kind != "name":
            raise _Unsupported(f"expected an entity, found {tok.text}")
        pfx, sep, local = tok.text.partition(":")
        if not sep:
            raise _Unsupported(f"not an IRI: {tok.text}")
        if pfx not in self.prefixes:
            raise KeyError(pfx)
        return self.prefixes[pfx] + local

    def entity(self, tok) -> str:
        full = self.expand(tok)
        return local_name(full)

    def concept(self, x) -> Concept:
        if isinstance(x, _Tok):
            full = self.expand(x)
            if full == OWL_THING:
                return TOP
            if full == OWL_NOTHING:
                return BOTTOM
            return Atomic(local_name(full))
        h = x.head
        if h == "ObjectSomeValuesFrom" and len(x.args) == 2:
            return Exists(self.role(x.args[0]), self.concept(x.args[1]))
        if h == "ObjectAllValuesFrom" and len(x.args) == 2:
            return Forall(self.role(x.args[0]), self.concept(x.args[1]))
        if h == "ObjectIntersectionOf" and x.args:
            return conjunction(*(self.concept(a) for a in x.args))
        if h == "ObjectUnionOf" and x.args:
            return disjunction(*(self.concept(a) for a in x.args))
        if h == "ObjectComplementOf" and len(x.args) == 1:
            return Not(self.concept(x.args[0]))
        raise _Unsupported(f"unsupported class expression {h}")

    def role(self, x) -> str:
        if not isinstance(x, _Tok):
            raise _Unsupported(f"unsupported property expression {x.head}")
        return self.entity(x)


def _strip_axiom_annotations(args: list) -> list:
    return [a for a in args if not (isinstance(a, _Node) and a.head == "Annotation")]


def _literal(tok) -> str:
    if not isinstance(tok, _Tok) or tok.kind != "string":
        raise _Unsupported("expected a literal")
    body = tok.text[: tok.text.rindex('"') + 1][1:-1]
    return re.sub(r"\\(.)", r"\1", body)


def parse_ofn(text: str, id: str = "") -> tuple[Ontology, list[ParseDiagnostic]]:
    """Parse functional-syntax text; raises :class:`ParseError` on errors."""
    diags: list[ParseDiagnostic] = []
    top = _tree(_tokenize(text, diags), diags)
    reader = _Reader(diags)
    axioms: list[Axiom] = []
    labels: dict[str, str] = {}
    xrefs: dict[str, list[tuple[str, str]]] = {}
    ontology_id = id
    seen_ontology = False

    for item in top:
        if isinstance(item, _Tok):
            diags.append(ParseDiagnostic("error", item.line, f"unexpected token {item.text!r}"))
            continue
        if item.head == "Prefix":
            _read_prefix(item, reader, diags)
        elif item.head == "Ontology":
            seen_ontology = True
            body = list(item.args)
            iris = []
            while body and isinstance(body[0], _Tok) and body[0].kind == "iri":
                iris.append(body.pop(0))
            if iris and not id:
                ontology_id = local_name(iris[0].text[1:-1])
            for node in body:
                _read_axiom(node, reader, axioms, labels, xrefs, diags)
        else:
            diags.append(ParseDiagnostic("error", item.line, f"unexpected top-level construct {item.head}"))

    if not seen_ontology and not any(d.severity == "error" for d in diags) and top:
        diags.append(ParseDiagnostic("warning", 1, "no Ontology(...) block found"))
    if any(d.severity == "error" for d in diags):
        raise ParseError(diags)
    onto = Ontology(axioms, labels=labels, id=ontology_id,
                    annotations={k: tuple(v) for k, v in xrefs.items()})
    return onto, diags


def _read_prefix(node: _Node, reader: _Reader, diags) -> None:
    args = node.args
    # Prefix(pfx:=<iri>) tokenizes as name "pfx:", "=", iri
    if (len(args) == 3 and isinstance(args[0], _Tok) and args[0].text.endswith(":")
            and isinstance(args[1], _Tok) and args[1].kind == "eq"
            and isinstance(args[2], _Tok) and args[2].kind == "iri"):
        reader.prefixes[args[0].text[:-1]] = args[2].text[1:-1]
    else:
        diags.append(ParseDiagnostic("error", node.line, "malformed Prefix declaration"))


_IGNORED = frozenset({"Declaration", "Import", "Annotation"})


def _read_axiom(node, reader: _Reader, axioms, labels, xrefs, diags) -> None:
    if isinstance(node, _Tok):
        diags.append(ParseDiagnostic("error", node.line, f"unexpected token {node.text!r}"))
        return
    head = node.head
    if head in _IGNORED:
        return
    args = _strip_axiom_annotations(node.args)
    try:
        if head == "SubClassOf" and len(args) == 2:
            axioms.append(SubClassOf(reader.concept(args[0]), reader.concept(args[1])))
        elif head == "EquivalentClasses" and len(args) >= 2:
            axioms.append(EquivalentClasses([reader.concept(a) for a in args]))
        elif head == "DisjointClasses" and len(args) >= 2:
            axioms.append(DisjointClasses([reader.concept(a) for a in args]))
        elif head == "SubObjectPropertyOf" and len(args) == 2:
            axioms.append(SubRoleOf(reader.role(args[0]), reader.role(args[1])))
        elif head == "TransitiveObjectProperty" and len(args) == 1:
            axioms.append(TransitiveRole(reader.role(args[0])))
        elif head == "ObjectPropertyDomain" and len(args) == 2:
            axioms.append(Domain(reader.role(args[0]), reader.concept(args[1])))
        elif head == "ObjectPropertyRange" and len(args) == 2:
            axioms.append(Range(reader.role(args[0]), reader.concept(args[1])))
        elif head == "AnnotationAssertion" and len(args) == 3:
            prop = reader.expand(args[0])
            subject = reader.entity(args[1])
            if prop == RDFS_LABEL:
                labels.setdefault(subject, _literal(args[2]))
            elif prop == HAS_DBXREF:
                xrefs.setdefault(subject, []).append(("xref", _literal(args[2])))
            else:
                raise _Unsupported(f"annotation property <{prop}> ignored", fragment=False)
        else:
            raise _Unsupported(f"unsupported axiom {head}")
    except KeyError as exc:
        diags.append(ParseDiagnostic("error", node.line, f"undeclared prefix {exc.args[0]!r}:"))
    except _Unsupported as exc:
        diags.append(ParseDiagnostic("warning", node.line, f"{exc}; axiom skipped",
                                     "fragment" if exc.fragment else ""))


# --------------------------------------------------------------------------
# Writer
# --------------------------------------------------------------------------

_SAFE_LOCAL = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-.]*(?<!\.)$")

_KIND_ORDER = {
    "SubObjectPropertyOf": 0, "TransitiveObjectProperty": 1,
    "ObjectPropertyDomain": 2, "ObjectPropertyRange": 3,
    "SubClassOf": 4, "EquivalentClasses": 5, "DisjointClasses": 6,
}


def _name(n: str) -> str:
    if _SAFE_LOCAL.match(n):
        return ":" + n
    return "<" + OBO_BASE + quote(n, safe="") + ">"


def _render(c: Concept) -> str:
    if c is TOP:
        return "owl:Thing"
    if c is BOTTOM:
        return "owl:Nothing"
    t = type(c)
    if t is Atomic:
        return _name(c.iri)
    if t is Not:
        return f"ObjectComplementOf({_render(c.operand)})"
    if t is And:
        return "ObjectIntersectionOf(" + " ".join(_render(o) for o in c.operands) + ")"
    if t is Or:
        return "ObjectUnionOf(" + " ".join(_render(o) for o in c.operands) + ")"
    if t is Exists:
        return f"ObjectSomeValuesFrom({_name(c.role)} {_render(c.filler)})"
    if t is Forall:
        return f"ObjectAllValuesFrom({_name(c.role)} {_render(c.filler)})"
    raise TypeError(f"cannot serialize {c!r}")


def render_axiom(ax: Axiom) -> str:
    t = type(ax)
    if t is SubClassOf:
        return f"SubClassOf({_render(ax.sub)} {_render(ax.sup)})"
    if t is EquivalentClasses:
        ms = ax.members if len(ax.members) > 1 else ax.members * 2  # EquivalentClasses(A A)
        return "EquivalentClasses(" + " ".join(_render(m) for m in ms) + ")"
    if t is DisjointClasses:
        return "DisjointClasses(" + " ".join(_render(m) for m in ax.members) + ")"
    if t is SubRoleOf:
        return f"SubObjectPropertyOf({_name(ax.sub)} {_name(ax.sup)})"
    if t is TransitiveRole:
        return f"TransitiveObjectProperty({_name(ax.role)})"
    if t is Domain:
        return f"ObjectPropertyDomain({_name(ax.role)} {_render(ax.concept)})"
    if t is Range:
        return f"ObjectPropertyRange({_name(ax.role)} {_render(ax.concept)})"
    raise TypeError(f"cannot serialize {ax!r}")


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def serialize_ofn(ontology: Ontology) -> str:
    """Deterministic functional-syntax text (LF line endings)."""
    lines = [
        f"Prefix(:=<{OBO_BASE}>)",
        f"Prefix(oboInOwl:=<{OBO_IN_OWL}>)",
        f"Prefix(owl:=<{STANDARD_PREFIXES['owl']}>)",
        f"Prefix(rdfs:=<{STANDARD_PREFIXES['rdfs']}>)",
        "",
    ]
    head = "Ontology("
    if ontology.id:
        head += "<" + OBO_BASE + quote(ontology.id, safe="") + ">"
    lines.append(head)
    rendered = sorted((_KIND_ORDER[ax.kind], render_axiom(ax)) for ax in ontology.axioms)
    lines.extend(text for _, text in rendered)
    for name in sorted(ontology.labels):
        lines.append(f'AnnotationAssertion(rdfs:label {_name(name)} "{_escape(ontology.labels[name])}")')
    for name in sorted(ontology.annotations):
        for prop, value in sorted(ontology.annotations[name]):
            if prop == "xref":
                lines.append(f'AnnotationAssertion(oboInOwl:hasDbXref {_name(name)} "{_escape(value)}")')
    lines.append(")")
    return "\n".join(lines) + "\n"
