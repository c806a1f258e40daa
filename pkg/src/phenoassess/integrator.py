"""Building the integrated ontology: external signatures, IRI normalization, merge."""

from __future__ import annotations

from typing import Callable, Iterable, NamedTuple

from .errors import RuleCollisionError
from .model import (
    And, Atomic, Axiom, Concept, DisjointClasses, Domain, EquivalentClasses,
    Exists, Forall, Not, Ontology, Or, Range, Signature, SubClassOf, SubRoleOf,
    TransitiveRole, conjunction, disjunction, normal_key, prefix_of,
)

Rule = tuple[str, str]


def external_signature(ontology: Ontology, prefix: str) -> Signature:
    """Concept and role names of ``ontology`` whose prefix is ``prefix``."""
    if not prefix:
        raise ValueError("prefix must be non-empty")
    sig = ontology.signature
    return Signature(frozenset(c for c in sig.concepts if prefix_of(c) == prefix),
                     frozenset(r for r in sig.roles if prefix_of(r) == prefix))


def prefix_counts(ontology: Ontology, exclude: Iterable[str] = ()) -> dict[str, int]:
    """Number of concept names per prefix, skipping ``exclude``."""
    skip = set(exclude)
    counts: dict[str, int] = {}
    for c in ontology.signature.concepts:
        p = prefix_of(c)
        if p is not None and p not in skip:
            counts[p] = counts.get(p, 0) + 1
    return dict(sorted(counts.items()))


# -- renaming


def _rename_concept(c: Concept, f: Callable[[str], str]) -> Concept:
    t = type(c)
    if t is Atomic:
        return Atomic(f(c.iri))
    if t is Not:
        return Not(_rename_concept(c.operand, f))
    if t is And:
        return conjunction(*(_rename_concept(o, f) for o in c.operands))
    if t is Or:
        return disjunction(*(_rename_concept(o, f) for o in c.operands))
    if t is Exists or t is Forall:
        return t(f(c.role), _rename_concept(c.filler, f))
    return c  # ⊤, ⊥


def rename_axiom(ax: Axiom, f: Callable[[str], str]) -> Axiom:
    """Apply ``f`` to every concept and role name in ``ax``."""
    c = lambda x: _rename_concept(x, f)  # noqa: E731
    t = type(ax)
    if t is SubClassOf:
        return SubClassOf(c(ax.sub), c(ax.sup))
    if t is EquivalentClasses or t is DisjointClasses:
        return t([c(m) for m in ax.members])
    if t is SubRoleOf:
        return SubRoleOf(f(ax.sub), f(ax.sup))
    if t is TransitiveRole:
        return TransitiveRole(f(ax.role))
    if t is Domain or t is Range:
        return t(f(ax.role), c(ax.concept))
    raise TypeError(f"not an axiom: {ax!r}")


def _rewriter(rules: list[Rule]) -> Callable[[str], str]:
    cache: dict[str, str] = {}

    def rewrite(name: str) -> str:
        got = cache.get(name)
        if got is None:
            hits = [(p, r) for p, r in rules if name.startswith(p)]
            if len(hits) > 1:
                raise RuleCollisionError(name, hits)
            got = hits[0][1] + name[len(hits[0][0]):] if hits else name
            cache[name] = got
        return got

    return rewrite


def normalize_iris(ontology: Ontology, rules: list[Rule]) -> Ontology:
    """Rewrite every name that starts with a rule's pattern.

    Names that collapse onto one canonical form are merged: their axioms
    are unioned and the first label in document order is kept.
    """
    if not rules:
        return ontology
    f = _rewriter(list(rules))
    axioms: list[Axiom] = []
    provenance: dict[Axiom, tuple[str, ...]] = {}
    first: dict[frozenset, Axiom] = {}
    for ax in ontology.axioms:
        new = rename_axiom(ax, f)
        new = first.setdefault(normal_key(new), new)
        axioms.append(new)
        provenance[new] = _union(provenance.get(new, ()), ontology.sources(ax))
    labels: dict[str, str] = {}
    for k, v in ontology.labels.items():
        labels.setdefault(f(k), v)
    annotations: dict[str, tuple] = {}
    for k, v in ontology.annotations.items():
        key = f(k)
        annotations[key] = _union(annotations.get(key, ()), v)
    return Ontology(axioms, labels=labels, id=ontology.id, provenance=provenance,
                    annotations=annotations)


def _union(a: tuple, b: Iterable) -> tuple:
    out = list(a)
    for x in b:
        if x not in out:
            out.append(x)
    return tuple(out)


# -- merge


class MergeResult(NamedTuple):
    ontology: Ontology
    warnings: list[str]


def merge(ontologies: Iterable[Ontology], id: str | None = None) -> MergeResult:
    """Union of the inputs with per-axiom provenance.

    Labels resolve first-wins; each conflicting label is reported in
    ``warnings`` instead of raising.
    """
    ontologies = list(ontologies)
    axioms: dict[Axiom, tuple[str, ...]] = {}
    labels: dict[str, str] = {}
    label_src: dict[str, str] = {}
    annotations: dict[str, tuple] = {}
    warnings: list[str] = []
    first: dict[frozenset, Axiom] = {}  # normalized form -> axiom kept for it
    for o in ontologies:
        for ax in o.axioms:
            kept = first.setdefault(normal_key(ax), ax)
            axioms[kept] = _union(axioms.get(kept, ()), o.sources(ax))
        for k, v in o.labels.items():
            if k not in labels:
                labels[k] = v
                label_src[k] = o.id
            elif labels[k] != v:
                warnings.append(f"label conflict for {k}: kept {labels[k]!r} "
                                f"from {label_src[k] or '?'}, ignored {v!r} from {o.id or '?'}")
        for k, v in o.annotations.items():
            annotations[k] = _union(annotations.get(k, ()), v)
    if id is None:
        id = "+".join(o.id for o in ontologies if o.id)
    merged = Ontology(axioms, labels=labels, id=id, provenance=axioms, annotations=annotations)
    return MergeResult(merged, warnings)


def provenance_doc(ontology: Ontology, sources: Iterable[str] = ()) -> dict:
    """JSON-ready per-axiom provenance, keyed by the functional-syntax rendering."""
    from .ofn import render_axiom

    rows = sorted((render_axiom(ax), list(ontology.sources(ax))) for ax in ontology.axioms)
    return {"ontology": ontology.id, "sources": list(sources),
            "axioms": [{"axiom": a, "sources": s} for a, s in rows]}


# -- rules file


def read_rules(text: str) -> list[Rule]:
    """Parse ``pattern<TAB>replacement`` lines; '#' starts a comment line."""
    rules: list[Rule] = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise ValueError(f"line {n}: expected 'pattern<TAB>replacement', got {line!r}")
        rules.append((parts[0], parts[1]))
    return rules


def referenced_signature(base: Ontology, source: Ontology) -> Signature:
    """Entities of ``source`` that ``base`` mentions: the default module seed."""
    return base.signature & source.signature


def integrate(base: Ontology, sources: Iterable[Ontology], rules: list[Rule] = (),
              seeds: Iterable[Signature | None] | None = None, kind="bottom",
              id: str | None = None) -> MergeResult:
    """Normalize everything, extract one module per source, merge with ``base``.

    A source without an explicit seed uses the entities it shares with
    ``base`` after normalization.
    """
    from .modularity import extract_module

    sources = list(sources)
    seeds = list(seeds) if seeds is not None else [None] * len(sources)
    if len(seeds) != len(sources):
        raise ValueError("one seed per source ontology expected")
    base = normalize_iris(base, list(rules))
    modules = []
    for src, seed in zip(sources, seeds):
        src = normalize_iris(src, list(rules))
        if seed is None:
            seed = referenced_signature(base, src)
        modules.append(extract_module(src, seed, kind))
    return merge([base, *modules], id=id)
