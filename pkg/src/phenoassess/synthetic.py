"""Synthetic ontologies for benchmarks and module-extraction experiments."""

from __future__ import annotations

import random

from .model import Atomic, Domain, Exists, Ontology, Range, SubClassOf, TransitiveRole


def tree_ontology(n_concepts: int = 10_000, n_links: int = 1_000, n_roles: int = 5,
                  seed: int = 0, prefix: str = "SYN", branching: int = 8,
                  domain_range: bool = False) -> Ontology:
    """Tree taxonomy plus random existential links ``A ⊑ ∃r.B``.

    Each concept after the first gets one parent drawn from a sliding
    window of earlier concepts, which keeps the depth logarithmic-ish.
    """
    rng = random.Random(seed)
    names = [f"{prefix}_{i:07d}" for i in range(n_concepts)]
    roles = [f"rel_{k}" for k in range(n_roles)]
    axioms = []
    for i in range(1, n_concepts):
        parent = rng.randrange(max(0, (i - 1) // branching - 2), (i - 1) // branching + 1)
        axioms.append(SubClassOf(Atomic(names[i]), Atomic(names[parent])))
    for _ in range(n_links):
        a, b = rng.sample(range(n_concepts), 2)
        axioms.append(SubClassOf(Atomic(names[a]), Exists(rng.choice(roles), Atomic(names[b]))))
    if domain_range:
        axioms.append(TransitiveRole(roles[0]))
        axioms.append(Domain(roles[1], Atomic(names[0])))
        axioms.append(Range(roles[1], Atomic(names[0])))
    labels = {n: f"synthetic concept {i}" for i, n in enumerate(names)}
    return Ontology(axioms, labels=labels, id=f"synthetic-{prefix.lower()}")
