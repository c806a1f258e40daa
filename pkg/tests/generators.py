"""Random ontology generators shared by the property and acceptance tests."""

from __future__ import annotations

import random

from phenoassess.model import (
    TOP, Atomic, DisjointClasses, Domain, EquivalentClasses,
    Exists, Forall, Not, Ontology, Range, SubClassOf, SubRoleOf,
    TransitiveRole, conjunction, disjunction,
)


def _el_concept(rng: random.Random, names, roles, depth: int):
    roll = rng.random()
    if depth <= 0 or roll < 0.5:
        return Atomic(rng.choice(names)) if rng.random() > 0.03 else TOP
    if roll < 0.75 and roles:
        return Exists(rng.choice(roles), _el_concept(rng, names, roles, depth - 1))
    return conjunction(_el_concept(rng, names, roles, depth - 1),
                       _el_concept(rng, names, roles, depth - 1))


def random_el_ontology(rng: random.Random, n_concepts=12, n_roles=3, n_axioms=25,
                       depth=2) -> Ontology:
    """EL⊥ with role hierarchy, transitivity, domain and range."""
    names = [f"C{i}" for i in range(n_concepts)]
    roles = [f"r{i}" for i in range(n_roles)]
    axioms = []
    for _ in range(n_axioms):
        roll = rng.random()
        c = lambda: _el_concept(rng, names, roles, depth)  # noqa: E731
        if roll < 0.55:
            sub = Atomic(rng.choice(names)) if rng.random() < 0.6 else c()
            axioms.append(SubClassOf(sub, c()))
        elif roll < 0.65:
            axioms.append(EquivalentClasses([Atomic(rng.choice(names)), c()]))
        elif roll < 0.71:
            a, b = rng.sample(names, 2)
            axioms.append(DisjointClasses([Atomic(a), Atomic(b)]))
        elif roll < 0.78 and roles:
            axioms.append(Domain(rng.choice(roles), c()))
        elif roll < 0.85 and roles:
            axioms.append(Range(rng.choice(roles), c()))
        elif roll < 0.93 and len(roles) > 1:
            r, s = rng.sample(roles, 2)
            axioms.append(SubRoleOf(r, s))
        elif roles:
            axioms.append(TransitiveRole(rng.choice(roles)))
    return Ontology(axioms, id="random-el")


def _alc_concept(rng: random.Random, names, roles, depth: int):
    roll = rng.random()
    if depth <= 0 or roll < 0.35:
        a = Atomic(rng.choice(names))
        return Not(a) if rng.random() < 0.25 else a
    if roll < 0.5:
        return Exists(rng.choice(roles), _alc_concept(rng, names, roles, depth - 1))
    if roll < 0.62:
        return Forall(rng.choice(roles), _alc_concept(rng, names, roles, depth - 1))
    if roll < 0.82:
        return conjunction(_alc_concept(rng, names, roles, depth - 1),
                           _alc_concept(rng, names, roles, depth - 1))
    if roll < 0.95:
        return disjunction(_alc_concept(rng, names, roles, depth - 1),
                           _alc_concept(rng, names, roles, depth - 1))
    return Not(_alc_concept(rng, names, roles, depth - 1))


def random_alc_ontology(rng: random.Random, n_concepts=4, n_roles=2, n_axioms=6,
                        depth=2) -> Ontology:
    """Full supported fragment, small enough for bounded model checking."""
    names = [f"C{i}" for i in range(n_concepts)]
    roles = [f"r{i}" for i in range(n_roles)]
    axioms = []
    c = lambda: _alc_concept(rng, names, roles, depth)  # noqa: E731
    for _ in range(n_axioms):
        roll = rng.random()
        if roll < 0.5:
            sub = Atomic(rng.choice(names)) if rng.random() < 0.6 else c()
            axioms.append(SubClassOf(sub, c()))
        elif roll < 0.62:
            axioms.append(EquivalentClasses([Atomic(rng.choice(names)), c()]))
        elif roll < 0.7:
            a, b = rng.sample(names, 2)
            axioms.append(DisjointClasses([Atomic(a), Atomic(b)]))
        elif roll < 0.78:
            axioms.append(Domain(rng.choice(roles), c()))
        elif roll < 0.86:
            axioms.append(Range(rng.choice(roles), c()))
        elif roll < 0.93 and len(roles) > 1:
            r, s = rng.sample(roles, 2)
            axioms.append(SubRoleOf(r, s))
        else:
            axioms.append(TransitiveRole(rng.choice(roles)))
    return Ontology(axioms, id="random-alc")
