"""Entailment checking and classification over the supported fragment."""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field

from ..errors import FragmentError
from ..model import (
    AXIOM_TYPES, TOP, And, Atomic, Axiom, Concept, DisjointClasses,
    Domain, EquivalentClasses, Exists, Forall, Not, Ontology, Range,
    SubClassOf, SubRoleOf, TransitiveRole,
)
from .tableau import Tableau

__all__ = ["Reasoner", "Taxonomy", "TaxonomyNode", "classify", "entails",
           "is_satisfiable", "reasoner_for"]

_FRESH = "__fresh_witness__"


@dataclass(frozen=True, order=True)
class TaxonomyNode:
    """An equivalence class of atomic concepts; ``kind`` is top, bottom or named."""

    kind: str
    members: frozenset = field(compare=True)

    @property
    def name(self) -> str:
        if self.kind == "top":
            return "owl:Thing"
        if self.kind == "bottom":
            return "owl:Nothing"
        return min(self.members)

    def __repr__(self) -> str:
        inner = ", ".join(sorted(self.members))
        if self.kind == "named":
            return "{" + inner + "}"
        return self.name + ("{" + inner + "}" if inner else "")


@dataclass(frozen=True)
class Taxonomy:
    nodes: tuple[TaxonomyNode, ...]
    edges: tuple[tuple[TaxonomyNode, TaxonomyNode], ...]
    top: TaxonomyNode
    bottom: TaxonomyNode

    @property
    def unsatisfiable(self) -> frozenset:
        return self.bottom.members

    def node_of(self, name: str) -> TaxonomyNode:
        for n in self.nodes:
            if name in n.members:
                return n
        raise KeyError(name)

    def parents(self, node: TaxonomyNode) -> list[TaxonomyNode]:
        return sorted(p for c, p in self.edges if c == node)

    def children(self, node: TaxonomyNode) -> list[TaxonomyNode]:
        return sorted(c for c, p in self.edges if p == node)

    def ancestors(self, node: TaxonomyNode) -> set[TaxonomyNode]:
        up: dict[TaxonomyNode, list[TaxonomyNode]] = {}
        for c, p in self.edges:
            up.setdefault(c, []).append(p)
        seen: set[TaxonomyNode] = set()
        todo = [node]
        while todo:
            for p in up.get(todo.pop(), ()):
                if p not in seen:
                    seen.add(p)
                    todo.append(p)
        return seen

    def subsumes(self, sup: str, sub: str) -> bool:
        """True if ``sub`` ⊑ ``sup`` according to the hierarchy."""
        a, b = self.node_of(sub), self.node_of(sup)
        return a == b or b in self.ancestors(a)


class Reasoner:
    """Per-ontology reasoner; compiled once, answers many queries."""

    def __init__(self, ontology: Ontology):
        self.ontology = ontology
        self.tableau = Tableau(ontology)
        self._roots: dict[str, object] = {}

    # -- satisfiability / entailment

    def is_satisfiable(self, concept: Concept) -> bool:
        return self.tableau.satisfiable(_check_concept(concept))

    def is_consistent(self) -> bool:
        return self.tableau.satisfiable(TOP)

    def subsumed(self, sub: Concept, sup: Concept) -> bool:
        return self.tableau.subsumed(_check_concept(sub), _check_concept(sup))

    def role_subsumed(self, sub: str, sup: str) -> bool:
        if sub == sup or sup in self.tableau.supers(sub):
            return True
        # an empty role, or an inconsistent ontology, is below everything
        return not self.tableau.satisfiable(Exists(sub, TOP))

    def entails(self, axiom: Axiom) -> bool:
        t = type(axiom)
        if t is SubClassOf:
            return self.subsumed(axiom.sub, axiom.sup)
        if t is EquivalentClasses:
            ms = axiom.members
            return all(self.subsumed(ms[0], m) and self.subsumed(m, ms[0]) for m in ms[1:])
        if t is DisjointClasses:
            ms = axiom.members
            return all(not self.tableau.satisfiable(_check_concept(ms[i]), _check_concept(ms[j]))
                       for i in range(len(ms)) for j in range(i + 1, len(ms)))
        if t is Domain:
            return self.subsumed(Exists(axiom.role, TOP), axiom.concept)
        if t is Range:
            return self.subsumed(TOP, Forall(axiom.role, axiom.concept))
        if t is SubRoleOf:
            return self.role_subsumed(axiom.sub, axiom.sup)
        if t is TransitiveRole:
            return self._entails_transitive(axiom.role)
        raise FragmentError(f"unsupported axiom: {axiom!r}")

    def _entails_transitive(self, role: str) -> bool:
        if role in self.tableau.transitive:
            return True
        sup = self.tableau.supers(role)
        for t in self.tableau.transitive:
            if t in sup and role in self.tableau.supers(t):
                return True
        # x R y R z with z in a fresh X while no R-successor of x is in X
        fresh = Atomic(_FRESH)
        probe = And(Exists(role, Exists(role, fresh)), Forall(role, Not(fresh)))
        return not self.tableau.satisfiable(probe)

    # -- classification

    def root(self, name: str | None):
        """Cached root run for an atom (``None`` stands for ⊤)."""
        key = name or ""
        got = self._roots.get(key)
        if got is None:
            got = self.tableau.run([TOP] if name is None else [Atomic(name)])
            self._roots[key] = got
        return got

    def subsumers(self, name: str | None, candidates) -> set[str]:
        """Atoms among ``candidates`` that subsume ``name`` (⊤ when None).

        A primitive atom outside the root node of a found model cannot be a
        subsumer, because adding its negation to that model triggers no rule.
        """
        res = self.root(name)
        tab = self.tableau
        defined = tab.definitional
        this = TOP if name is None else Atomic(name)
        candidates = candidates if isinstance(candidates, (set, frozenset)) else set(candidates)
        pool = (res.model | defined) & candidates
        if name in candidates:
            pool = pool | {name}
        out = set()
        for b in sorted(pool):
            if b == name:
                out.add(b)
                continue
            if b in res.determined:
                out.add(b)
                continue
            if b not in defined:
                if b in res.model and tab.subsumed(this, Atomic(b)):
                    out.add(b)
                continue
            rb = self.root(b)
            if not rb.satisfiable:
                continue
            if any(p not in res.model and p not in defined for p in rb.determined):
                continue
            if tab.subsumed(this, Atomic(b)):
                out.add(b)
        return out

    def classify(self) -> Taxonomy:
        atoms = sorted(self.ontology.signature.concepts)
        if not self.is_consistent():
            bottom = TaxonomyNode("bottom", frozenset(atoms))
            top = TaxonomyNode("top", frozenset())
            return Taxonomy((top, bottom), ((bottom, top),), top, bottom)

        unsat = [a for a in atoms if not self.root(a).satisfiable]
        sat = [a for a in atoms if self.root(a).satisfiable]
        top_equiv = self.subsumers(None, sat)
        named = [a for a in sat if a not in top_equiv]
        named_set = set(named)
        supers = {a: self.subsumers(a, named_set) for a in named}

        cls: dict[str, TaxonomyNode] = {}
        for a in named:
            if a in cls:
                continue
            members = frozenset(b for b in supers[a] if a in supers[b])
            node = TaxonomyNode("named", members)
            for b in members:
                cls[b] = node
        top = TaxonomyNode("top", frozenset(top_equiv))
        bottom = TaxonomyNode("bottom", frozenset(unsat))

        upper: dict[TaxonomyNode, set[TaxonomyNode]] = {}
        for a in named:
            node = cls[a]
            if node not in upper:
                upper[node] = {cls[b] for b in supers[a]} - {node}
        edges = []
        has_child: set[TaxonomyNode] = set()
        for node in sorted(upper):
            ups = upper[node]
            direct = [p for p in ups if not any(p in upper[q] for q in ups if q != p)]
            if not direct:
                direct = [top]
            for p in sorted(direct):
                edges.append((node, p))
                has_child.add(p)
        leaves = [n for n in sorted(upper) if n not in has_child] or [top]
        for n in leaves:
            edges.append((bottom, n))
        nodes = (top, *sorted(upper), bottom)
        return Taxonomy(nodes, tuple(edges), top, bottom)


def _check_concept(c) -> Concept:
    if not isinstance(c, Concept):
        raise FragmentError(f"unsupported concept construct: {c!r}")
    return c


_CACHE: "weakref.WeakKeyDictionary[Ontology, Reasoner]" = weakref.WeakKeyDictionary()


def reasoner_for(ontology: Ontology) -> Reasoner:
    """Shared reasoner for an (immutable) ontology."""
    r = _CACHE.get(ontology)
    if r is None or r.ontology is not ontology and r.ontology != ontology:
        r = Reasoner(ontology)
        _CACHE[ontology] = r
    return r


def is_satisfiable(ontology: Ontology, concept: Concept) -> bool:
    return reasoner_for(ontology).is_satisfiable(concept)


def entails(ontology: Ontology, axiom: Axiom) -> bool:
    if not isinstance(axiom, AXIOM_TYPES):
        raise FragmentError(f"unsupported axiom: {axiom!r}")
    return reasoner_for(ontology).entails(axiom)


def classify(ontology: Ontology) -> Taxonomy:
    return reasoner_for(ontology).classify()
