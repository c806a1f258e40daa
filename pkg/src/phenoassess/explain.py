"""Black-box justifications: expand/contract plus a hitting-set tree."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from .errors import NotEntailedError
from .model import (
    BOTTOM, TOP, And, Atomic, Axiom, Concept, DisjointClasses, Domain,
    EquivalentClasses, Exists, Forall, Not, Ontology, Or, Range, SubClassOf,
    SubRoleOf, TransitiveRole,
)
from .reasoner import Reasoner

DEFAULT_NODE_BUDGET = 10_000


@dataclass(frozen=True)
class Justification:
    """A minimal entailing axiom set, kept in source document order."""

    entailed: Axiom
    axioms: tuple[Axiom, ...]
    provenance: Mapping[Axiom, tuple[str, ...]] = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.axioms)

    def __iter__(self):
        return iter(self.axioms)

    def __contains__(self, ax) -> bool:
        return ax in self.axioms

    def sources(self, ax: Axiom) -> tuple[str, ...]:
        return tuple(self.provenance.get(ax, ()))


class Justifications(list):
    """Result list; ``truncated`` is set when the node budget ran out."""

    truncated: bool = False
    nodes: int = 0


class _Oracle:
    """Memoized entailment test for subsets of one ontology."""

    def __init__(self, ontology: Ontology, target: Axiom):
        self.order = {ax: i for i, ax in enumerate(ontology.axioms)}
        self.target = target
        self.calls = 0
        self._memo: dict[frozenset, bool] = {}

    def entails(self, axioms) -> bool:
        key = frozenset(axioms)
        got = self._memo.get(key)
        if got is None:
            self.calls += 1
            onto = Ontology(sorted(key, key=self.order.__getitem__))
            got = self._memo[key] = Reasoner(onto).entails(self.target)
        return got


def _expand(oracle: _Oracle, pool: list[Axiom]) -> list[Axiom] | None:
    """Grow a subset of ``pool`` by signature reachability until it entails."""
    sig = oracle.target.signature
    names = set(sig.concepts) | {("r", r) for r in sig.roles}

    def touches(ax: Axiom) -> bool:
        s = ax.signature
        if not s.concepts and not s.roles:
            return True
        return bool(names & set(s.concepts)) or any(("r", r) in names for r in s.roles)

    chosen: list[Axiom] = []
    rest = list(pool)
    while True:
        layer = [ax for ax in rest if touches(ax)]
        if not layer:
            break
        chosen += layer
        taken = set(layer)
        rest = [ax for ax in rest if ax not in taken]
        for ax in layer:
            s = ax.signature
            names |= set(s.concepts)
            names |= {("r", r) for r in s.roles}
        if oracle.entails(chosen):
            return chosen
    if rest and oracle.entails(pool):
        return list(pool)
    return None


def _contract(oracle: _Oracle, axioms: list[Axiom]) -> list[Axiom]:
    """Deletion-based minimization, trying the last axiom in document order first."""
    keep = sorted(axioms, key=oracle.order.__getitem__)
    for ax in sorted(axioms, key=oracle.order.__getitem__, reverse=True):
        trial = [a for a in keep if a != ax]
        if oracle.entails(trial):
            keep = trial
    return keep


def _single(oracle: _Oracle, pool: list[Axiom]) -> list[Axiom] | None:
    grown = _expand(oracle, pool)
    if grown is None:
        return None
    return _contract(oracle, grown)


def justify(ontology: Ontology, target: Axiom, max_count: int = 1,
            node_budget: int = DEFAULT_NODE_BUDGET) -> Justifications:
    """Up to ``max_count`` justifications of ``target`` in ``ontology``.

    Further justifications come from a depth-first hitting-set tree; when
    more than ``node_budget`` nodes would be visited the search stops and
    the result is marked ``truncated``.
    """
    if max_count < 1:
        raise ValueError("max_count must be at least 1")
    oracle = _Oracle(ontology, target)
    axioms = list(ontology.axioms)
    if not oracle.entails(axioms):
        raise NotEntailedError(f"ontology does not entail {target!r}")

    out = Justifications()
    first = _single(oracle, axioms)
    found: list[frozenset] = [frozenset(first)]
    by_set = {frozenset(first): first}
    seen_paths: set[frozenset] = set()
    closed: list[frozenset] = []
    nodes = 1
    stack: list[tuple[frozenset, list[Axiom]]] = [(frozenset(), first)]
    while stack and len(found) < max_count:
        path, just = stack.pop()
        # push in reverse so the earliest axiom is expanded first
        for ax in reversed(just):
            child = path | {ax}
            if child in seen_paths or any(c <= child for c in closed):
                continue
            seen_paths.add(child)
            nodes += 1
            if nodes > node_budget:
                out.truncated = True
                stack.clear()
                break
            reuse = next((j for j in found if not (j & child)), None)
            if reuse is not None:
                stack.append((child, by_set[reuse]))
                continue
            pool = [a for a in axioms if a not in child]
            if not oracle.entails(pool):
                closed.append(child)
                continue
            new = _single(oracle, pool)
            key = frozenset(new)
            found.append(key)
            by_set[key] = new
            stack.append((child, new))
            if len(found) >= max_count:
                break

    out.nodes = nodes
    order = oracle.order
    ranked = sorted(by_set.values(), key=lambda j: (len(j), [order[a] for a in j]))
    for j in ranked[:max_count]:
        out.append(Justification(target, tuple(j), {a: ontology.sources(a) for a in j}))
    return out


# -- rendering


def _name(n: str, labels) -> str:
    if labels is None:
        return n
    return labels.get(n) or n


def render_concept(c: Concept, labels=None) -> str:
    def sub(x: Concept) -> str:
        s = render_concept(x, labels)
        return s if type(x) in (Atomic, Not) or x is TOP or x is BOTTOM else f"({s})"

    if c is TOP:
        return "owl:Thing"
    if c is BOTTOM:
        return "owl:Nothing"
    t = type(c)
    if t is Atomic:
        return _name(c.iri, labels)
    if t is Not:
        return "not " + sub(c.operand)
    if t is And:
        return " and ".join(sub(o) for o in c.operands)
    if t is Or:
        return " or ".join(sub(o) for o in c.operands)
    if t is Exists:
        return f"{_name(c.role, labels)} some {sub(c.filler)}"
    if t is Forall:
        return f"{_name(c.role, labels)} only {sub(c.filler)}"
    raise TypeError(c)


def render_axiom_text(ax: Axiom, labels=None) -> str:
    """One-line rendering such as ``HP_0007430 SubClassOf HP_0000969``."""
    c = lambda x: render_concept(x, labels)  # noqa: E731
    r = lambda x: _name(x, labels)  # noqa: E731
    t = type(ax)
    if t is SubClassOf:
        return f"{c(ax.sub)} SubClassOf {c(ax.sup)}"
    if t is EquivalentClasses:
        return " EquivalentTo ".join(c(m) for m in ax.members)
    if t is DisjointClasses:
        return " DisjointWith ".join(c(m) for m in ax.members)
    if t is SubRoleOf:
        return f"{r(ax.sub)} SubPropertyOf {r(ax.sup)}"
    if t is TransitiveRole:
        return f"{r(ax.role)} Transitive"
    if t is Domain:
        return f"{r(ax.role)} Domain {c(ax.concept)}"
    if t is Range:
        return f"{r(ax.role)} Range {c(ax.concept)}"
    raise TypeError(ax)


def render_explanation(justification: Justification, labels: Mapping[str, str] | None = None,
                       mode: str = "ids", provenance: bool = False) -> str:
    """Indented text: the entailment, then one axiom per line.

    ``mode`` is ``ids`` for canonical names or ``names`` for labels, falling
    back to the name where no label exists.
    """
    if mode not in ("ids", "names"):
        raise ValueError(f"unknown mode {mode!r}")
    lab = labels if mode == "names" else None
    lines = [f"Explanation for: {render_axiom_text(justification.entailed, lab)}"]
    for ax in justification.axioms:
        line = "    " + render_axiom_text(ax, lab)
        if provenance:
            src = justification.sources(ax)
            if src:
                line += "    [" + ", ".join(src) + "]"
        lines.append(line)
    return "\n".join(lines) + "\n"


def justification_record(j: Justification, labels: Mapping[str, str] | None = None) -> dict:
    return {
        "entailed": render_axiom_text(j.entailed),
        "axioms": [
            {"axiom": render_axiom_text(ax), "text": render_axiom_text(ax, labels or {}),
             "sources": list(j.sources(ax))}
            for ax in j.axioms
        ],
    }


def to_json(justifications, labels: Mapping[str, str] | None = None) -> str:
    doc = {
        "justifications": [justification_record(j, labels) for j in justifications],
        "truncated": bool(getattr(justifications, "truncated", False)),
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
