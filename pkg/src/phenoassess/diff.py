"""Approximated logical difference over five simple witness shapes.

The difference between ``o_new`` and ``o_old`` over a scope is every
candidate axiom of the shapes

    (i)   A ⊑ B          (ii) A ⊑ ¬B        (iii) A ⊑ ∃R.B
    (iv)  A ⊑ ∀R.B       (v)  R ⊑ S

that ``o_new`` entails and ``o_old`` does not. A and B range over the
scope's concept names; shapes (i) and (ii) also use ⊤ and ⊥.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .model import (
    BOTTOM, TOP, Atomic, Axiom, Concept, EquivalentClasses, Exists, Forall,
    Not, Ontology, Signature, SubClassOf, SubRoleOf, prefix_of,
)
from .reasoner import Reasoner, reasoner_for

THING = "owl:Thing"
NOTHING = "owl:Nothing"


class Shape(enum.Enum):
    SUB = "i"
    DISJ = "ii"
    EXISTS = "iii"
    FORALL = "iv"
    ROLE = "v"

    @classmethod
    def parse(cls, text: str | Iterable) -> frozenset[Shape]:
        """``"i,iii"`` or an iterable of shapes/strings; ``"all"`` for every shape."""
        if isinstance(text, str):
            if text.strip().lower() == "all":
                return ALL_SHAPES
            parts = [p.strip().lower() for p in text.split(",") if p.strip()]
        else:
            parts = list(text)
        out = set()
        for p in parts:
            if isinstance(p, Shape):
                out.add(p)
            else:
                try:
                    out.add(cls(p))
                except ValueError:
                    raise ValueError(f"unknown witness shape {p!r} (use i, ii, iii, iv, v)") from None
        return frozenset(out)


ALL_SHAPES = frozenset(Shape)
_ORDER = {s: i for i, s in enumerate(Shape)}


def _concept(name: str) -> Concept:
    if name == THING:
        return TOP
    if name == NOTHING:
        return BOTTOM
    return Atomic(name)


@dataclass(frozen=True)
class Witness:
    """One candidate axiom; ``role`` is set for shapes iii-v (for v it is R, rhs is S)."""

    shape: Shape
    lhs: str
    rhs: str
    role: str | None = None

    @property
    def sort_key(self) -> tuple:
        return (_ORDER[self.shape], self.lhs, self.role or "", self.rhs)

    def __lt__(self, other: Witness) -> bool:
        return self.sort_key < other.sort_key

    @property
    def axiom(self) -> Axiom:
        s = self.shape
        a, b = _concept(self.lhs), _concept(self.rhs)
        if s is Shape.SUB:
            return SubClassOf(a, b)
        if s is Shape.DISJ:
            return SubClassOf(a, Not(b))
        if s is Shape.EXISTS:
            return SubClassOf(a, Exists(self.role, b))
        if s is Shape.FORALL:
            return SubClassOf(a, Forall(self.role, b))
        return SubRoleOf(self.lhs, self.rhs)

    def render(self, labels=None, equivalence: bool = False) -> str:
        name = (lambda n: labels.get(n, n)) if labels else (lambda n: n)
        a, b = name(self.lhs), name(self.rhs)
        s = self.shape
        if s is Shape.SUB:
            return f"{a} {'EquivalentTo' if equivalence else 'SubClassOf'} {b}"
        if s is Shape.DISJ:
            return f"{a} DisjointWith {b}"
        if s is Shape.EXISTS:
            return f"{a} SubClassOf {name(self.role)} some {b}"
        if s is Shape.FORALL:
            return f"{a} SubClassOf {name(self.role)} only {b}"
        return f"{a} SubPropertyOf {b}"


def candidates(scope: Signature, shapes: Iterable[Shape] | str = ALL_SHAPES) -> Iterator[Witness]:
    """Every candidate witness over ``scope``, without duplicates or tautologies.

    Shape (ii) is symmetric, so each unordered pair is produced once; ⊤ is
    its only extra endpoint because A ⊑ ¬⊥ is a tautology.
    """
    shapes = Shape.parse(shapes) if isinstance(shapes, str) else frozenset(shapes)
    names = sorted(scope.concepts)
    roles = sorted(scope.roles)
    if Shape.SUB in shapes:
        ends = [THING, *names, NOTHING]
        for a in ends:
            for b in ends:
                if a == b or a == NOTHING or b == THING or (a == THING and b == NOTHING):
                    continue
                yield Witness(Shape.SUB, a, b)
    if Shape.DISJ in shapes:
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                yield Witness(Shape.DISJ, a, b)
            yield Witness(Shape.DISJ, a, THING)
    for shape in (Shape.EXISTS, Shape.FORALL):
        if shape in shapes:
            for a in names:
                for r in roles:
                    for b in names:
                        yield Witness(shape, a, b, r)
    if Shape.ROLE in shapes:
        for r in roles:
            for s in roles:
                if r != s:
                    yield Witness(Shape.ROLE, r, s)


@dataclass(frozen=True)
class DiffEntry:
    witness: Witness
    equivalence: bool = False
    new_in: str = ""
    missing_in: str = ""

    def __lt__(self, other: DiffEntry) -> bool:
        return self.witness < other.witness

    @property
    def axioms(self) -> list[Axiom]:
        """The entailments this entry stands for (two for a coalesced equivalence)."""
        w = self.witness
        if self.equivalence:
            return [w.axiom, Witness(w.shape, w.rhs, w.lhs).axiom]
        return [w.axiom]

    @property
    def axiom(self) -> Axiom:
        w = self.witness
        if self.equivalence:
            return EquivalentClasses([_concept(w.lhs), _concept(w.rhs)])
        return w.axiom


@dataclass
class DiffReport:
    entries: list[DiffEntry]
    unsatisfiable: list[DiffEntry]
    scope: Signature
    shapes: frozenset
    new_id: str = ""
    old_id: str = ""
    labels: dict = field(default_factory=dict)

    def __iter__(self) -> Iterator[DiffEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def counts(self) -> dict[str, int]:
        out = {s.value: 0 for s in Shape if s in self.shapes}
        for e in self.entries:
            out[e.witness.shape.value] += 1
        return out


def _told(o_old: Ontology, w: Witness) -> bool:
    """Does ``o_old`` assert the witness outright?"""
    if w.shape is Shape.SUB:
        a, b = _concept(w.lhs), _concept(w.rhs)
        if SubClassOf(a, b) in o_old:
            return True
        return EquivalentClasses([a, b]) in o_old
    return w.axiom in o_old


class _Prover:
    """Shape-aware entailment in one ontology, reusing the reasoner's caches."""

    def __init__(self, reasoner: Reasoner, names: list[str]):
        self.r = reasoner
        self.names = set(names)
        self._sups: dict[str | None, set[str]] = {}
        self._unsat: dict[str, bool] = {}
        self.memo: dict[tuple, bool] = {}

    def unsat(self, name: str) -> bool:
        got = self._unsat.get(name)
        if got is None:
            got = self._unsat[name] = not self.r.root(name).satisfiable
        return got

    def sups(self, name: str | None) -> set[str]:
        got = self._sups.get(name)
        if got is None:
            if not self.r.is_consistent() or (name is not None and self.unsat(name)):
                got = set(self.names)
            else:
                got = self.r.subsumers(name, self.names)
            self._sups[name] = got
        return got

    def entails(self, w: Witness) -> bool:
        s = w.shape
        if s is Shape.SUB:
            a = None if w.lhs == THING else w.lhs
            if w.rhs == NOTHING:
                return not self.r.is_consistent() if a is None else self.unsat(a)
            return w.rhs in self.sups(a) if w.rhs in self.names else self.r.entails(w.axiom)
        if s is Shape.ROLE:
            return self.r.role_subsumed(w.lhs, w.rhs)
        return self.r.entails(w.axiom)


def default_scope(o_new: Ontology, o_old: Ontology, prefixes: Iterable[str] = ()) -> Signature:
    """Concepts shared by both ontologies (optionally only these prefixes); roles of ``o_new``."""
    prefixes = set(prefixes)
    shared = o_new.signature.concepts & o_old.signature.concepts
    if prefixes:
        shared = {c for c in shared if prefix_of(c) in prefixes}
    return Signature(frozenset(shared), o_new.signature.roles)


def cross_scope(o_new: Ontology, o_old: Ontology, prefixes: Iterable[str]) -> Signature:
    """Shared concepts outside ``prefixes``: consequences among domain-ontology concepts."""
    prefixes = set(prefixes)
    shared = o_new.signature.concepts & o_old.signature.concepts
    return Signature(frozenset(c for c in shared if prefix_of(c) not in prefixes),
                     o_new.signature.roles)


def logical_diff(o_new: Ontology, o_old: Ontology, scope: Signature | None = None,
                 shapes: Iterable[Shape] | str = ALL_SHAPES,
                 include_unsatisfiable: bool = False) -> DiffReport:
    """Witnesses entailed by ``o_new`` but not by ``o_old``.

    Mutual (i) entries are coalesced into one equivalence entry. Unless
    ``include_unsatisfiable`` is set, names unsatisfiable in ``o_new`` are
    left out of the enumeration and reported as ``A ⊑ ⊥`` entries in the
    separate ``unsatisfiable`` list.
    """
    shapes = Shape.parse(shapes) if isinstance(shapes, str) else frozenset(shapes)
    if scope is None:
        scope = default_scope(o_new, o_old)
    rn, ro = reasoner_for(o_new), reasoner_for(o_old)
    names = sorted(scope.concepts)
    new = _Prover(rn, names)
    old = _Prover(ro, names)

    unsat_entries: list[DiffEntry] = []
    active = names
    if not include_unsatisfiable:
        dead = [a for a in names if new.unsat(a)]
        for a in dead:
            if not old.unsat(a):
                unsat_entries.append(DiffEntry(Witness(Shape.SUB, a, NOTHING), False, o_new.id, o_old.id))
        active = [a for a in names if a not in set(dead)]
        if not rn.is_consistent():
            active = []
        new = _Prover(rn, active)
        old = _Prover(ro, active)

    found: list[Witness] = []
    for w in candidates(Signature(frozenset(active), scope.roles), shapes):
        if not include_unsatisfiable and not rn.is_consistent():
            break
        if not _quick_new(new, w, include_unsatisfiable):
            continue
        if _told(o_old, w) or old.entails(w):
            continue
        found.append(w)

    entries = _coalesce(found, o_new.id, o_old.id)
    labels = {**dict(o_old.labels), **dict(o_new.labels)}
    return DiffReport(sorted(entries), sorted(unsat_entries), scope, shapes,
                      o_new.id, o_old.id, labels)


def _quick_new(new: _Prover, w: Witness, include_unsat: bool) -> bool:
    """``new`` entails ``w``, with cheap necessary conditions checked first."""
    if w.shape in (Shape.EXISTS, Shape.FORALL) and not include_unsat:
        r = new.r
        if w.shape is Shape.EXISTS:
            key = ("some", w.lhs, w.role)
            ok = new.memo.get(key)
            if ok is None:
                ok = new.memo[key] = r.subsumed(Atomic(w.lhs), Exists(w.role, TOP))
            if not ok:
                return False
        else:
            key = ("none", w.lhs, w.role)
            empty = new.memo.get(key)
            if empty is None:
                empty = new.memo[key] = r.subsumed(Atomic(w.lhs), Forall(w.role, BOTTOM))
            if empty:
                return True
    return new.entails(w)


def _coalesce(found: list[Witness], new_id: str, old_id: str) -> list[DiffEntry]:
    subs = {(w.lhs, w.rhs) for w in found if w.shape is Shape.SUB}
    out = []
    for w in found:
        if w.shape is Shape.SUB and (w.rhs, w.lhs) in subs:
            if w.lhs < w.rhs:
                out.append(DiffEntry(w, True, new_id, old_id))
            continue
        out.append(DiffEntry(w, False, new_id, old_id))
    return out


# -- reports

COLUMNS = ["shape", "lhs", "role", "rhs", "equivalence", "lhs_label", "rhs_label",
           "new_in", "missing_in"]


def entry_record(e: DiffEntry, labels) -> dict:
    w = e.witness
    return {
        "shape": w.shape.value,
        "lhs": w.lhs,
        "role": w.role,
        "rhs": w.rhs,
        "equivalence": e.equivalence,
        "lhs_label": labels.get(w.lhs, w.lhs) if w.shape is not Shape.ROLE else w.lhs,
        "rhs_label": labels.get(w.rhs, w.rhs) if w.shape is not Shape.ROLE else w.rhs,
        "new_in": e.new_in,
        "missing_in": e.missing_in,
    }


def report_records(report: DiffReport) -> list[dict]:
    return [entry_record(e, report.labels) for e in report.entries]


def to_json(report: DiffReport, extra: dict | None = None) -> str:
    doc = {
        "new": report.new_id,
        "old": report.old_id,
        "shapes": sorted(s.value for s in report.shapes),
        "scope": {"concepts": len(report.scope.concepts), "roles": len(report.scope.roles)},
        "counts": report.counts(),
        "entries": report_records(report),
        "unsatisfiable": [entry_record(e, report.labels) for e in report.unsatisfiable],
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=False) + "\n"


def to_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in COLUMNS})
    return buf.getvalue()


def to_markdown(report: DiffReport, title: str = "Logical difference") -> str:
    lines = [f"## {title}", "", f"`{report.new_id}` vs `{report.old_id}`", ""]
    counts = report.counts()
    lines.append("| shape | entries |")
    lines.append("|---|---|")
    for k, v in counts.items():
        lines.append(f"| {k} | {v} |")
    lines.append("")
    for e in report.entries:
        ids = e.witness.render(equivalence=e.equivalence)
        names = e.witness.render(report.labels, e.equivalence)
        lines.append(f"- `{ids}`" + (f" ({names})" if names != ids else ""))
    if report.unsatisfiable:
        lines += ["", "Newly unsatisfiable:", ""]
        for e in report.unsatisfiable:
            lines.append(f"- `{e.witness.lhs}` {report.labels.get(e.witness.lhs, '')}".rstrip())
    return "\n".join(lines) + "\n"
