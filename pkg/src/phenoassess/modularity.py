"""Syntactic locality and locality-based module extraction.

For ⊥-locality every concept name outside the signature is read as ⊥ and
every role name outside it as the empty relation; for ⊤-locality they are
read as ⊤ and the universal relation. An axiom is local when that reading
turns it into a tautology, which the grammars below detect syntactically.
"""

from __future__ import annotations

import enum
from collections import deque

from .model import (
    BOTTOM, TOP, And, Atomic, Axiom, Concept, DisjointClasses, Domain,
    EquivalentClasses, Exists, Forall, Not, Ontology, Or, Range, Signature,
    SubClassOf, SubRoleOf, TransitiveRole,
)


class LocalityKind(enum.Enum):
    BOTTOM = "bottom"
    TOP = "top"
    STAR = "star"

    @classmethod
    def parse(cls, value) -> LocalityKind:
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


def _bot_equiv(c: Concept, concepts, roles, top_kind: bool) -> bool:
    """Is ``c`` syntactically equivalent to ⊥ under the locality reading?"""
    if c is BOTTOM:
        return True
    t = type(c)
    if t is Atomic:
        return not top_kind and c.iri not in concepts
    if t is Not:
        return _top_equiv(c.operand, concepts, roles, top_kind)
    if t is And:
        return any(_bot_equiv(o, concepts, roles, top_kind) for o in c.operands)
    if t is Or:
        return all(_bot_equiv(o, concepts, roles, top_kind) for o in c.operands)
    if t is Exists:
        if not top_kind and c.role not in roles:
            return True
        return _bot_equiv(c.filler, concepts, roles, top_kind)
    if t is Forall:
        # ∀U.⊥ is ⊥ on a non-empty domain
        return top_kind and c.role not in roles and _bot_equiv(c.filler, concepts, roles, top_kind)
    return False


def _top_equiv(c: Concept, concepts, roles, top_kind: bool) -> bool:
    if c is TOP:
        return True
    t = type(c)
    if t is Atomic:
        return top_kind and c.iri not in concepts
    if t is Not:
        return _bot_equiv(c.operand, concepts, roles, top_kind)
    if t is And:
        return all(_top_equiv(o, concepts, roles, top_kind) for o in c.operands)
    if t is Or:
        return any(_top_equiv(o, concepts, roles, top_kind) for o in c.operands)
    if t is Forall:
        if not top_kind and c.role not in roles:
            return True
        return _top_equiv(c.filler, concepts, roles, top_kind)
    if t is Exists:
        return top_kind and c.role not in roles and _top_equiv(c.filler, concepts, roles, top_kind)
    return False


def _local(ax: Axiom, concepts, roles, top_kind: bool) -> bool:
    t = type(ax)
    bot = lambda c: _bot_equiv(c, concepts, roles, top_kind)  # noqa: E731
    top = lambda c: _top_equiv(c, concepts, roles, top_kind)  # noqa: E731
    if t is SubClassOf:
        return bot(ax.sub) or top(ax.sup)
    if t is EquivalentClasses:
        return all(bot(m) for m in ax.members) or all(top(m) for m in ax.members)
    if t is DisjointClasses:
        return sum(1 for m in ax.members if not bot(m)) <= 1
    if t is SubRoleOf:
        return (ax.sup if top_kind else ax.sub) not in roles
    if t is TransitiveRole:
        return ax.role not in roles
    if t is Domain or t is Range:
        if not top_kind and ax.role not in roles:
            return True
        return top(ax.concept)
    raise TypeError(f"not an axiom: {ax!r}")


def is_local(axiom: Axiom, sig: Signature, kind: LocalityKind | str = LocalityKind.BOTTOM) -> bool:
    """Syntactic ⊥- or ⊤-locality of ``axiom`` w.r.t. ``sig``."""
    kind = LocalityKind.parse(kind)
    if kind is LocalityKind.STAR:
        raise ValueError("locality is checked for BOTTOM or TOP; STAR is an extraction strategy")
    return _local(axiom, sig.concepts, sig.roles, kind is LocalityKind.TOP)


def _extract(axioms: list[Axiom], seed: Signature, top_kind: bool) -> list[int]:
    concepts = set(seed.concepts)
    roles = set(seed.roles)
    by_entity: dict[tuple[str, str], list[int]] = {}
    sigs = []
    for i, ax in enumerate(axioms):
        s = ax.signature
        sigs.append(s)
        for c in s.concepts:
            by_entity.setdefault(("c", c), []).append(i)
        for r in s.roles:
            by_entity.setdefault(("r", r), []).append(i)

    selected = [False] * len(axioms)
    queued = [True] * len(axioms)
    queue = deque(range(len(axioms)))
    while queue:
        i = queue.popleft()
        queued[i] = False
        if selected[i] or _local(axioms[i], concepts, roles, top_kind):
            continue
        selected[i] = True
        fresh = [("c", c) for c in sigs[i].concepts if c not in concepts]
        fresh += [("r", r) for r in sigs[i].roles if r not in roles]
        concepts.update(sigs[i].concepts)
        roles.update(sigs[i].roles)
        for key in fresh:
            for j in by_entity.get(key, ()):
                if not selected[j] and not queued[j]:
                    queued[j] = True
                    queue.append(j)
    return [i for i, sel in enumerate(selected) if sel]


def extract_module(ontology: Ontology, seed: Signature,
                   kind: LocalityKind | str = LocalityKind.BOTTOM) -> Ontology:
    """Locality-based module of ``ontology`` for the seed signature.

    Every axiom left out is local w.r.t. the seed plus the module's own
    signature. STAR alternates ⊥ and ⊤ extraction until nothing changes.
    """
    kind = LocalityKind.parse(kind)
    axioms = list(ontology.axioms)
    if kind is LocalityKind.STAR:
        while True:
            after_bot = [axioms[i] for i in _extract(axioms, seed, False)]
            after_top = [after_bot[i] for i in _extract(after_bot, seed, True)]
            if len(after_top) == len(axioms):
                break
            axioms = after_top
    else:
        axioms = [axioms[i] for i in _extract(axioms, seed, kind is LocalityKind.TOP)]

    module = ontology.replace(axioms=axioms)
    keep = module.signature | seed
    labels = {k: v for k, v in ontology.labels.items() if k in keep}
    annotations = {k: v for k, v in ontology.annotations.items() if k in keep}
    # the module keeps the source id, so merged provenance names the source
    return module.replace(labels=labels, annotations=annotations)


def read_seed(text: str) -> Signature:
    """Seed signature file: one name per line, ``role:`` marks role names.

    ``PFX:NNN`` CURIEs and full IRIs are reduced to the canonical local
    name. Lines starting with '#' and trailing `` #`` comments are ignored.
    """
    from .obo import canonical_id
    from .ofn import local_name

    concepts, roles = set(), set()
    for raw in text.splitlines():
        line = raw.split(" #", 1)[0].strip()
        if not line or line.startswith("#"):
            continue
        is_role = line.startswith("role:")
        if is_role:
            line = line[len("role:"):].strip()
        if line.startswith("<") and line.endswith(">"):
            line = line[1:-1]
        name = local_name(line) if line.startswith(("http:", "https:")) else canonical_id(line)
        (roles if is_role else concepts).add(name)
    return Signature(frozenset(concepts), frozenset(roles))
