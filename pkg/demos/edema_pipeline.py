"""Walk through the integration assessment on the bundled mini ontologies.

Run with ``python demos/edema_pipeline.py``. Each step prints what it found:

1. which external entities the post-composed HPO references, per prefix
2. the FMA and GO modules for those entities
3. the merged ontology (after unifying part_of identifiers)
4. new subsumptions among HPO terms, and among the domain-ontology terms
5. explanations for the first two of each, with the source of every axiom
"""

from pathlib import Path

from phenoassess.diff import Shape, cross_scope, default_scope, logical_diff
from phenoassess.explain import justify, render_explanation
from phenoassess.integrator import (
    integrate, normalize_iris, prefix_counts, read_rules, referenced_signature,
)
from phenoassess.loader import load
from phenoassess.modularity import extract_module

DATA = Path(__file__).resolve().parents[1] / "src" / "phenoassess" / "data"


def heading(text: str):
    print(f"\n== {text}")


def main():
    pc, _ = load(DATA / "mini_hpo_pc.ofn")
    fma, _ = load(DATA / "mini_fma.ofn")
    go, _ = load(DATA / "mini_go.obo")
    rules = read_rules((DATA / "rules.tsv").read_text())

    heading("external entities referenced by HPO")
    for prefix, n in prefix_counts(pc, exclude=["HP"]).items():
        print(f"{prefix:6} {n}")

    heading("modules")
    for src in (fma, go):
        src = normalize_iris(src, rules)
        m = extract_module(src, referenced_signature(pc, src))
        print(f"{src.id}: {len(m)} of {len(src)} axioms")

    merged, warnings = integrate(pc, [fma, go], rules, id="hpo_all")
    heading("merged")
    print(f"{len(merged)} axioms, {len(merged.signature.concepts)} concepts")
    for w in warnings:
        print(f"warning: {w}")

    shapes = Shape.parse("i")
    for title, scope in (("new HPO subsumptions", default_scope(merged, pc, ["HP"])),
                         ("cross-ontology entailments", cross_scope(merged, pc, ["HP"]))):
        heading(title)
        report = logical_diff(merged, pc, scope, shapes)
        for e in report:
            print(e.witness.render(merged.labels, e.equivalence))
        for e in report.entries[:2]:
            js = justify(merged, e.axiom, max_count=1)
            print()
            print(render_explanation(js[0], merged.labels, "names", provenance=True))


if __name__ == "__main__":
    main()
