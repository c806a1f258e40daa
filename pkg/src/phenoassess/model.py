"""Entities, concept expressions, axioms, signatures and ontologies.

All values are immutable and hashable. Concept expressions are canonical on
construction: conjunction and disjunction members are flattened, deduplicated
and sorted, so structural equality is plain ``==``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

_PREFIX_RE = re.compile(r"^([^_:]+)[_:]")


class Iri(str):
    """Normalized entity identifier, e.g. ``GO_0008544``.

    Equality and hashing are those of the canonical string; the optional
    label is carried along but never compared.
    """

    def __new__(cls, canonical: str, label: str | None = None):
        if isinstance(canonical, Iri) and label is None:
            return canonical
        if not canonical:
            raise ValueError("Iri canonical form must be non-empty")
        self = super().__new__(cls, canonical)
        self.label = label
        return self

    @property
    def canonical(self) -> str:
        return str.__str__(self)

    @property
    def prefix(self) -> str | None:
        m = _PREFIX_RE.match(self)
        return m.group(1) if m else None

    def __repr__(self) -> str:
        return f"Iri({str.__repr__(self)})"


def prefix_of(name: str) -> str | None:
    m = _PREFIX_RE.match(name)
    return m.group(1) if m else None


# --------------------------------------------------------------------------
# Concept expressions
# --------------------------------------------------------------------------


class Concept:
    """Base class of concept expressions."""

    __slots__ = ("_hash", "_key")
    _tag = ""

    def _fields(self) -> tuple:
        return ()

    def _init(self) -> None:
        self._hash = hash((self._tag, self._fields()))
        self._key = self._render()

    def _render(self) -> str:
        raise NotImplementedError

    @property
    def key(self) -> str:
        """Stable serialization used for canonical ordering."""
        return self._key

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Concept) or other._tag != self._tag:
            return NotImplemented if not isinstance(other, Concept) else False
        return self._hash == other._hash and self._fields() == other._fields()

    def __lt__(self, other: Concept) -> bool:
        return self._key < other._key

    def __repr__(self) -> str:
        return self._key

    def __setattr__(self, name, value):
        if hasattr(self, "_key"):
            raise AttributeError("concept expressions are immutable")
        object.__setattr__(self, name, value)

    def atoms(self) -> set[Iri]:
        out: set[Iri] = set()
        self._collect(out, set())
        return out

    def roles(self) -> set[Iri]:
        out: set[Iri] = set()
        self._collect(set(), out)
        return out

    def _collect(self, atoms: set, roles: set) -> None:
        pass


class _Top(Concept):
    __slots__ = ()
    _tag = "top"

    def __init__(self):
        self._init()

    def _render(self):
        return "owl:Thing"


class _Bottom(Concept):
    __slots__ = ()
    _tag = "bottom"

    def __init__(self):
        self._init()

    def _render(self):
        return "owl:Nothing"


TOP = Top = _Top()
BOTTOM = Bottom = _Bottom()


class Atomic(Concept):
    __slots__ = ("iri",)
    _tag = "atomic"

    def __init__(self, iri: str):
        self.iri = Iri(iri)
        self._init()

    def _fields(self):
        return (str(self.iri),)

    def _render(self):
        return str(self.iri)

    def _collect(self, atoms, roles):
        atoms.add(self.iri)


class Not(Concept):
    __slots__ = ("operand",)
    _tag = "not"

    def __init__(self, operand: Concept):
        self.operand = _as_concept(operand)
        self._init()

    def _fields(self):
        return (self.operand,)

    def _render(self):
        return f"ObjectComplementOf({self.operand.key})"

    def _collect(self, atoms, roles):
        self.operand._collect(atoms, roles)


class _NAry(Concept):
    __slots__ = ("operands",)

    def __init__(self, *operands):
        if len(operands) == 1 and not isinstance(operands[0], (Concept, str)):
            operands = tuple(operands[0])
        flat: dict[Concept, None] = {}
        for op in operands:
            op = _as_concept(op)
            if type(op) is type(self):
                for inner in op.operands:
                    flat[inner] = None
            else:
                flat[op] = None
        members = tuple(sorted(flat, key=lambda c: c.key))
        if len(members) < 2:
            raise ValueError(
                f"{type(self).__name__} needs at least two distinct members; "
                f"use conjunction()/disjunction() for the degenerate cases"
            )
        self.operands = members
        self._init()

    def _fields(self):
        return self.operands

    def _collect(self, atoms, roles):
        for op in self.operands:
            op._collect(atoms, roles)

    def __iter__(self) -> Iterator[Concept]:
        return iter(self.operands)


class And(_NAry):
    __slots__ = ()
    _tag = "and"

    def _render(self):
        return "ObjectIntersectionOf(" + " ".join(o.key for o in self.operands) + ")"


class Or(_NAry):
    __slots__ = ()
    _tag = "or"

    def _render(self):
        return "ObjectUnionOf(" + " ".join(o.key for o in self.operands) + ")"


class _Restriction(Concept):
    __slots__ = ("role", "filler")

    def __init__(self, role: str, filler: Concept):
        self.role = Iri(role)
        self.filler = _as_concept(filler)
        self._init()

    def _fields(self):
        return (str(self.role), self.filler)

    def _collect(self, atoms, roles):
        roles.add(self.role)
        self.filler._collect(atoms, roles)


class Exists(_Restriction):
    __slots__ = ()
    _tag = "some"

    def _render(self):
        return f"ObjectSomeValuesFrom({self.role} {self.filler.key})"


class Forall(_Restriction):
    __slots__ = ()
    _tag = "all"

    def _render(self):
        return f"ObjectAllValuesFrom({self.role} {self.filler.key})"


def _as_concept(c) -> Concept:
    if isinstance(c, Concept):
        return c
    if isinstance(c, str):
        return Atomic(c)
    raise TypeError(f"not a concept expression: {c!r}")


def conjunction(*operands) -> Concept:
    """And() that tolerates zero or one distinct member."""
    members = {_as_concept(o) for o in operands}
    if not members:
        return TOP
    if len(members) == 1:
        return next(iter(members))
    return And(*members)


def disjunction(*operands) -> Concept:
    members = {_as_concept(o) for o in operands}
    if not members:
        return BOTTOM
    if len(members) == 1:
        return next(iter(members))
    return Or(*members)


def nnf(c: Concept) -> Concept:
    """Negation normal form: Not only directly above Atomic."""
    t = type(c)
    if t is Not:
        return negate(c.operand)
    if t is And:
        return conjunction(*(nnf(o) for o in c.operands))
    if t is Or:
        return disjunction(*(nnf(o) for o in c.operands))
    if t is Exists:
        return Exists(c.role, nnf(c.filler))
    if t is Forall:
        return Forall(c.role, nnf(c.filler))
    return c


def negate(c: Concept) -> Concept:
    """NNF of the complement of ``c``."""
    t = type(c)
    if t is _Top:
        return BOTTOM
    if t is _Bottom:
        return TOP
    if t is Atomic:
        return Not(c)
    if t is Not:
        return nnf(c.operand)
    if t is And:
        return disjunction(*(negate(o) for o in c.operands))
    if t is Or:
        return conjunction(*(negate(o) for o in c.operands))
    if t is Exists:
        return Forall(c.role, negate(c.filler))
    if t is Forall:
        return Exists(c.role, negate(c.filler))
    raise TypeError(f"not a concept expression: {c!r}")


# --------------------------------------------------------------------------
# Axioms
# --------------------------------------------------------------------------


class Axiom:
    """Base class of TBox and RBox axioms."""

    __slots__ = ()
    kind = ""

    def concepts(self) -> tuple[Concept, ...]:
        return ()

    def role_names(self) -> tuple[Iri, ...]:
        return ()

    @property
    def signature(self) -> Signature:
        atoms: set = set()
        roles: set = set(self.role_names())
        for c in self.concepts():
            c._collect(atoms, roles)
        return Signature(frozenset(atoms), frozenset(roles))

    @property
    def key(self) -> str:
        return _axiom_key(self)

    def __lt__(self, other: Axiom) -> bool:
        return self.key < other.key


@dataclass(frozen=True, slots=True, repr=False)
class SubClassOf(Axiom):
    sub: Concept
    sup: Concept
    kind = "SubClassOf"

    def __post_init__(self):
        object.__setattr__(self, "sub", _as_concept(self.sub))
        object.__setattr__(self, "sup", _as_concept(self.sup))

    def concepts(self):
        return (self.sub, self.sup)

    def __repr__(self):
        return self.key


def _canonical_members(members, dedup: bool = True) -> tuple[Concept, ...]:
    cs = [_as_concept(m) for m in members]
    if dedup:
        cs = set(cs)
    return tuple(sorted(cs, key=lambda c: c.key))


@dataclass(frozen=True, slots=True, repr=False)
class EquivalentClasses(Axiom):
    members: tuple[Concept, ...]
    kind = "EquivalentClasses"

    def __post_init__(self):
        object.__setattr__(self, "members", _canonical_members(self.members))

    def concepts(self):
        return self.members

    def __repr__(self):
        return self.key


@dataclass(frozen=True, slots=True, repr=False)
class DisjointClasses(Axiom):
    members: tuple[Concept, ...]
    kind = "DisjointClasses"

    def __post_init__(self):
        # duplicates are kept: DisjointClasses(A, A) says A is empty
        object.__setattr__(self, "members", _canonical_members(self.members, dedup=False))

    def concepts(self):
        return self.members

    def __repr__(self):
        return self.key


@dataclass(frozen=True, slots=True, repr=False)
class SubRoleOf(Axiom):
    sub: Iri
    sup: Iri
    kind = "SubObjectPropertyOf"

    def __post_init__(self):
        object.__setattr__(self, "sub", Iri(self.sub))
        object.__setattr__(self, "sup", Iri(self.sup))

    def role_names(self):
        return (self.sub, self.sup)

    def __repr__(self):
        return self.key


@dataclass(frozen=True, slots=True, repr=False)
class TransitiveRole(Axiom):
    role: Iri
    kind = "TransitiveObjectProperty"

    def __post_init__(self):
        object.__setattr__(self, "role", Iri(self.role))

    def role_names(self):
        return (self.role,)

    def __repr__(self):
        return self.key


@dataclass(frozen=True, slots=True, repr=False)
class Domain(Axiom):
    role: Iri
    concept: Concept
    kind = "ObjectPropertyDomain"

    def __post_init__(self):
        object.__setattr__(self, "role", Iri(self.role))
        object.__setattr__(self, "concept", _as_concept(self.concept))

    def role_names(self):
        return (self.role,)

    def concepts(self):
        return (self.concept,)

    def __repr__(self):
        return self.key


@dataclass(frozen=True, slots=True, repr=False)
class Range(Axiom):
    role: Iri
    concept: Concept
    kind = "ObjectPropertyRange"

    def __post_init__(self):
        object.__setattr__(self, "role", Iri(self.role))
        object.__setattr__(self, "concept", _as_concept(self.concept))

    def role_names(self):
        return (self.role,)

    def concepts(self):
        return (self.concept,)

    def __repr__(self):
        return self.key


AXIOM_TYPES = (SubClassOf, EquivalentClasses, DisjointClasses, SubRoleOf,
               TransitiveRole, Domain, Range)


def _axiom_key(ax: Axiom) -> str:
    t = type(ax)
    if t is SubClassOf:
        body = f"{ax.sub.key} {ax.sup.key}"
    elif t is EquivalentClasses or t is DisjointClasses:
        body = " ".join(m.key for m in ax.members)
    elif t is SubRoleOf:
        body = f"{ax.sub} {ax.sup}"
    elif t is TransitiveRole:
        body = str(ax.role)
    elif t is Domain or t is Range:
        body = f"{ax.role} {ax.concept.key}"
    else:
        raise TypeError(f"not an axiom: {ax!r}")
    return f"{ax.kind}({body})"


def normalize(axiom: Axiom) -> list[Axiom]:
    """Rewrite an axiom into equivalent GCIs and role axioms."""
    t = type(axiom)
    if t is EquivalentClasses:
        ms = axiom.members
        out = []
        for i in range(len(ms)):
            for j in range(i + 1, len(ms)):
                out.append(SubClassOf(ms[i], ms[j]))
                out.append(SubClassOf(ms[j], ms[i]))
        return out
    if t is DisjointClasses:
        ms = axiom.members
        return [SubClassOf(conjunction(ms[i], ms[j]), BOTTOM)
                for i in range(len(ms)) for j in range(i + 1, len(ms))]
    if t is Domain:
        return [SubClassOf(Exists(axiom.role, TOP), axiom.concept)]
    if t is Range:
        return [SubClassOf(TOP, Forall(axiom.role, axiom.concept))]
    if t in (SubClassOf, SubRoleOf, TransitiveRole):
        return [axiom]
    raise TypeError(f"not an axiom: {axiom!r}")


def normal_key(axiom: Axiom) -> frozenset:
    """Dedup key: the normalized axiom set, or the axiom itself for tautologies."""
    return frozenset(normalize(axiom)) or frozenset([axiom])


# --------------------------------------------------------------------------
# Signatures and ontologies
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Signature:
    concepts: frozenset = frozenset()
    roles: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "concepts", frozenset(Iri(c) for c in self.concepts))
        object.__setattr__(self, "roles", frozenset(Iri(r) for r in self.roles))

    def __or__(self, other: Signature) -> Signature:
        return Signature(self.concepts | other.concepts, self.roles | other.roles)

    def __and__(self, other: Signature) -> Signature:
        return Signature(self.concepts & other.concepts, self.roles & other.roles)

    def __sub__(self, other: Signature) -> Signature:
        return Signature(self.concepts - other.concepts, self.roles - other.roles)

    def __le__(self, other: Signature) -> bool:
        return self.concepts <= other.concepts and self.roles <= other.roles

    def __len__(self) -> int:
        return len(self.concepts) + len(self.roles)

    def __bool__(self) -> bool:
        return bool(self.concepts or self.roles)

    def __contains__(self, name: object) -> bool:
        return name in self.concepts or name in self.roles

    def with_prefix(self, prefix: str) -> Signature:
        return Signature(
            frozenset(c for c in self.concepts if prefix_of(c) == prefix),
            frozenset(r for r in self.roles if prefix_of(r) == prefix),
        )


class Ontology:
    """An identified, duplicate-free, ordered collection of axioms.

    ``provenance`` maps an axiom to the ids of the source ontologies it came
    from; axioms without an entry are attributed to the ontology itself.
    ``annotations`` holds non-logical (property, value) pairs per entity, used
    for OBO cross-references.
    """

    __slots__ = ("id", "axioms", "labels", "provenance", "annotations",
                 "_axiom_set", "_signature", "_hash", "__weakref__")

    def __init__(
        self,
        axioms: Iterable[Axiom] = (),
        labels: Mapping[str, str] | None = None,
        id: str = "",
        provenance: Mapping[Axiom, tuple[str, ...]] | None = None,
        annotations: Mapping[str, tuple[tuple[str, str], ...]] | None = None,
    ):
        # duplicates are judged after normalization, so Domain(r, C) and
        # SubClassOf(∃r.⊤, C) cannot coexist; the first occurrence is kept
        seen: dict[Axiom, None] = {}
        normal: set[frozenset] = set()
        for ax in axioms:
            if not isinstance(ax, AXIOM_TYPES):
                raise TypeError(f"not an axiom: {ax!r}")
            if ax in seen:
                continue
            key = normal_key(ax)
            if key in normal:
                continue
            normal.add(key)
            seen[ax] = None
        self.id = id
        self.axioms: tuple[Axiom, ...] = tuple(seen)
        self._axiom_set = frozenset(seen)
        self.labels: Mapping[Iri, str] = MappingProxyType(
            {Iri(k): v for k, v in (labels or {}).items()})
        self.provenance: Mapping[Axiom, tuple[str, ...]] = MappingProxyType(
            {a: tuple(p) for a, p in (provenance or {}).items() if a in self._axiom_set})
        self.annotations = MappingProxyType(
            {Iri(k): tuple(v) for k, v in (annotations or {}).items()})
        self._signature = None
        self._hash = None

    def __len__(self) -> int:
        return len(self.axioms)

    def __iter__(self) -> Iterator[Axiom]:
        return iter(self.axioms)

    def __contains__(self, axiom: object) -> bool:
        return axiom in self._axiom_set

    @property
    def axiom_set(self) -> frozenset:
        return self._axiom_set

    @property
    def signature(self) -> Signature:
        if self._signature is None:
            self._signature = signature_of(self)
        return self._signature

    def sources(self, axiom: Axiom) -> tuple[str, ...]:
        return self.provenance.get(axiom) or ((self.id,) if self.id else ())

    def label(self, name: str) -> str | None:
        return self.labels.get(name)

    def replace(self, axioms: Iterable[Axiom] | None = None, **kw) -> Ontology:
        """Copy with some fields replaced; provenance is kept for surviving axioms."""
        return Ontology(
            self.axioms if axioms is None else axioms,
            labels=kw.get("labels", self.labels),
            id=kw.get("id", self.id),
            provenance=kw.get("provenance", self.provenance),
            annotations=kw.get("annotations", self.annotations),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ontology):
            return NotImplemented
        return self._axiom_set == other._axiom_set and dict(self.labels) == dict(other.labels)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._axiom_set)
        return self._hash

    def __repr__(self) -> str:
        return f"Ontology(id={self.id!r}, axioms={len(self.axioms)})"


def signature_of(ontology: Ontology | Iterable[Axiom]) -> Signature:
    """Concept and role names occurring in the axioms; ⊤ and ⊥ excluded."""
    atoms: set = set()
    roles: set = set()
    for ax in ontology:
        roles.update(ax.role_names())
        for c in ax.concepts():
            c._collect(atoms, roles)
    return Signature(frozenset(atoms), frozenset(roles))


def structurally_equal(a: Ontology, b: Ontology) -> bool:
    return a == b
