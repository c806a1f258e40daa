"""Acceptance criteria 1-8, each recorded in ``conftest.ACCEPTANCE``.

Every test stores (passed, detail) before asserting, so the terminal summary
prints one PASS/FAIL line per criterion even when a criterion fails.
"""

import io
import json
import random
import re
import resource
import time
from contextlib import redirect_stderr, redirect_stdout

import pytest

from brute import diff_keys, minimal_entailing_subsets, report_keys
from conftest import ACCEPTANCE, DATA, GOLDEN
from generators import random_alc_ontology, random_el_ontology
from oracles import ElSaturation, Interpretation, countermodel, holds, is_model
from phenoassess.cli import main
from phenoassess.diff import ALL_SHAPES, default_scope, logical_diff
from phenoassess.explain import justify
from phenoassess.model import (
    BOTTOM, TOP, And, Atomic, DisjointClasses, Domain, EquivalentClasses,
    Exists, Forall, Not, Ontology, Or, Range, Signature, SubClassOf, SubRoleOf,
    TransitiveRole, structurally_equal,
)
from phenoassess.modularity import extract_module, is_local
from phenoassess.obo import canonical_id, parse_obo
from phenoassess.ofn import parse_ofn, serialize_ofn
from phenoassess.reasoner import classify, entails, reasoner_for
from phenoassess.synthetic import tree_ontology

A, B, C, D = (Atomic(x) for x in "ABCD")


def record(k: int, ok: bool, detail: str):
    ACCEPTANCE[k] = (ok, detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


# -- 1. reasoner agrees with an EL saturation oracle


def test_criterion_1_el_oracle_agreement():
    start = time.perf_counter()
    disagreements, queries = [], 0
    for seed in range(500):
        rng = random.Random(seed)
        o = random_el_ontology(rng, n_concepts=rng.randint(2, 12), n_roles=rng.randint(0, 3),
                               n_axioms=rng.randint(1, 25))
        sat = ElSaturation(o.axioms)
        r = reasoner_for(o)
        names = sorted(o.signature.concepts)
        for a in ["⊤", *names]:
            for b in [*names, "⊥"]:
                if a == b:
                    continue
                ca = TOP if a == "⊤" else Atomic(a)
                cb = BOTTOM if b == "⊥" else Atomic(b)
                sup = BOTTOM if b == "⊥" else b
                queries += 1
                if r.entails(SubClassOf(ca, cb)) != sat.subsumes(TOP if a == "⊤" else a, sup):
                    disagreements.append((seed, a, b))
    elapsed = time.perf_counter() - start
    record(1, not disagreements and elapsed <= 60,
           f"500 ontologies, {queries} queries, {len(disagreements)} disagreements, {elapsed:.1f}s")


# -- 2. curated ALC feature suite with explicit countermodels


def M(size, concepts=None, roles=None):
    return Interpretation(size, {k: frozenset(v) for k, v in (concepts or {}).items()},
                          {k: frozenset(v) for k, v in (roles or {}).items()})


ALC_CASES = [
    # (feature, axioms, target, countermodel or None when entailed)
    ("not", [SubClassOf(A, B), SubClassOf(A, Not(B))], SubClassOf(A, BOTTOM), None),
    ("not", [SubClassOf(A, Not(B))], SubClassOf(B, BOTTOM), M(1, {"B": {0}})),
    ("not", [SubClassOf(A, Not(B))], SubClassOf(B, Not(A)), None),
    ("not", [SubClassOf(Not(A), B)], SubClassOf(TOP, Or(A, B)), None),
    ("not", [SubClassOf(Not(A), B)], SubClassOf(TOP, B), M(1, {"A": {0}})),
    ("or", [SubClassOf(A, Or(B, C)), SubClassOf(B, D), SubClassOf(C, D)], SubClassOf(A, D), None),
    ("or", [SubClassOf(A, Or(B, C))], SubClassOf(A, B), M(1, {"A": {0}, "C": {0}})),
    ("or", [SubClassOf(A, Or(B, C)), SubClassOf(A, Not(B))], SubClassOf(A, C), None),
    ("or", [SubClassOf(Or(B, C), A)], SubClassOf(C, A), None),
    ("or", [EquivalentClasses([A, Or(B, C)])], SubClassOf(B, C), M(1, {"A": {0}, "B": {0}})),
    ("forall", [SubClassOf(A, Forall("r", B)), SubClassOf(A, Exists("r", C))],
     SubClassOf(A, Exists("r", And(B, C))), None),
    ("forall", [SubClassOf(A, Forall("r", B))], SubClassOf(A, Exists("r", B)), M(1, {"A": {0}})),
    ("forall", [SubClassOf(A, Forall("r", BOTTOM))], SubClassOf(And(A, Exists("r", TOP)), BOTTOM), None),
    ("forall", [SubClassOf(Exists("r", A), B)], SubClassOf(Not(B), Forall("r", Not(A))), None),
    ("forall", [SubClassOf(A, Forall("r", B)), SubClassOf(B, C)], SubClassOf(A, Forall("s", C)),
     M(1, {"A": {0}}, {"s": {(0, 0)}})),
    ("disjoint", [DisjointClasses([A, B]), SubClassOf(C, A), SubClassOf(C, B)], SubClassOf(C, BOTTOM), None),
    ("disjoint", [DisjointClasses([A, B])], SubClassOf(A, BOTTOM), M(1, {"A": {0}})),
    ("disjoint", [DisjointClasses([A, B]), SubClassOf(C, A)], DisjointClasses([C, B]), None),
    ("disjoint", [DisjointClasses([A, B, C])], DisjointClasses([A, C]), None),
    ("disjoint", [DisjointClasses([A, B]), SubClassOf(A, Exists("r", B))], SubClassOf(A, BOTTOM),
     M(2, {"A": {0}, "B": {1}}, {"r": {(0, 1)}})),
    ("hierarchy", [SubRoleOf("r", "s"), SubClassOf(A, Exists("r", B))], SubClassOf(A, Exists("s", B)), None),
    ("hierarchy", [SubRoleOf("r", "s"), SubClassOf(A, Exists("s", B))], SubClassOf(A, Exists("r", B)),
     M(2, {"A": {0}, "B": {1}}, {"s": {(0, 1)}})),
    ("hierarchy", [SubRoleOf("r", "s"), SubClassOf(A, Forall("s", B))], SubClassOf(A, Forall("r", B)), None),
    ("hierarchy", [SubRoleOf("r", "s"), SubRoleOf("s", "t")], SubRoleOf("r", "t"), None),
    ("hierarchy", [SubRoleOf("r", "s")], SubRoleOf("s", "r"), M(1, roles={"s": {(0, 0)}})),
    ("transitive", [TransitiveRole("r"), SubClassOf(A, Exists("r", B)), SubClassOf(B, Exists("r", C))],
     SubClassOf(A, Exists("r", C)), None),
    ("transitive", [SubClassOf(A, Exists("r", B)), SubClassOf(B, Exists("r", C))],
     SubClassOf(A, Exists("r", C)), M(3, {"A": {0}, "B": {1}, "C": {2}}, {"r": {(0, 1), (1, 2)}})),
    ("transitive", [TransitiveRole("r"), SubClassOf(A, Forall("r", B))],
     SubClassOf(A, Forall("r", Forall("r", B))), None),
    ("transitive", [TransitiveRole("s"), SubRoleOf("r", "s"), SubClassOf(A, Exists("r", Exists("r", B))),
                    SubClassOf(Exists("s", B), C)], SubClassOf(A, C), None),
    ("transitive", [TransitiveRole("s"), SubRoleOf("r", "s")], TransitiveRole("r"),
     M(3, roles={"r": {(0, 1), (1, 2)}, "s": {(0, 1), (1, 2), (0, 2)}})),
    ("domain", [Domain("r", A), SubClassOf(B, Exists("r", C))], SubClassOf(B, A), None),
    ("range", [Range("r", A), SubClassOf(B, Exists("r", C))], SubClassOf(B, Exists("r", And(A, C))), None),
    ("range", [Range("r", A)], SubClassOf(Exists("r", TOP), A), M(2, {"A": {1}}, {"r": {(0, 1)}})),
    ("domain", [Domain("r", A), SubRoleOf("s", "r")], Domain("s", A), None),
    ("domain", [Domain("r", A)], Range("r", A), M(2, {"A": {0}}, {"r": {(0, 1)}})),
    ("range", [Range("r", A), DisjointClasses([A, B]), SubClassOf(C, Exists("r", B))],
     SubClassOf(C, BOTTOM), None),
    ("domain", [Domain("s", A), SubRoleOf("r", "s"), SubClassOf(B, Exists("r", TOP))], SubClassOf(B, A), None),
    ("equivalence", [EquivalentClasses([A, And(B, C)])], SubClassOf(A, B), None),
    ("equivalence", [EquivalentClasses([A, And(B, C)])], SubClassOf(B, A), M(1, {"B": {0}})),
]


def test_criterion_2_alc_feature_suite():
    failures = []
    for i, (feature, axioms, target, cm) in enumerate(ALC_CASES):
        got = entails(Ontology(axioms), target)
        if cm is None:
            # entailed by hand proof; also no small countermodel may exist
            if not got or countermodel(axioms, target, max_size=2) is not None:
                failures.append((i, feature))
        else:
            certified = is_model(cm, axioms) and not holds(cm, target) and cm.size <= 3
            if got or not certified:
                failures.append((i, feature))
    features = sorted({f for f, *_ in ALC_CASES})
    n_non = sum(cm is not None for *_, cm in ALC_CASES)
    record(2, not failures and len(ALC_CASES) >= 30,
           f"{len(ALC_CASES)} cases ({n_non} countermodel-certified) over {', '.join(features)}; "
           f"failures: {failures or 'none'}")


# -- 3. module properties


def _random_pair(seed: int):
    rng = random.Random(seed)
    if seed % 2:
        o = random_alc_ontology(rng, n_concepts=5, n_roles=2, n_axioms=rng.randint(3, 9), depth=2)
    else:
        o = random_el_ontology(rng, n_concepts=7, n_roles=2, n_axioms=rng.randint(3, 12))
    sig = o.signature
    concepts = sorted(sig.concepts)
    roles = sorted(sig.roles)
    seed_sig = Signature(frozenset(rng.sample(concepts, rng.randint(1, min(3, len(concepts))))),
                         frozenset(r for r in roles if rng.random() < 0.5))
    extra = Signature(frozenset(rng.sample(concepts, 1)), frozenset(rng.sample(roles, min(1, len(roles)))))
    return o, seed_sig, extra


def test_criterion_3_module_properties():
    problems = []
    n_pairs = 200
    for seed in range(n_pairs):
        o, sig, extra = _random_pair(seed)
        for kind in ("bottom", "top"):
            m = extract_module(o, sig, kind)
            keep = sig | m.signature
            inside = set(m.axioms)
            if any(not is_local(ax, keep, kind) for ax in o.axioms if ax not in inside):
                problems.append((seed, kind, "depletion"))
        for kind in ("bottom", "top", "star"):
            small, big = extract_module(o, sig, kind), extract_module(o, sig | extra, kind)
            if not set(small.axioms) <= set(big.axioms):
                problems.append((seed, kind, "monotonicity"))
        for kind in ("bottom", "star"):
            m = extract_module(o, sig, kind)
            report = logical_diff(o, m, sig, ALL_SHAPES, include_unsatisfiable=True)
            if len(report):
                problems.append((seed, kind, "diff"))
    record(3, not problems,
           f"{n_pairs} (ontology, seed) pairs: depletion, monotonicity, empty diff; problems: {problems or 'none'}")


# -- 4. diff against a brute-force double-entailment loop


def _diff_instance(seed: int):
    rng = random.Random(5000 + seed)
    if seed % 4 == 0:
        gen = lambda n: random_el_ontology(rng, n_concepts=10, n_roles=2, n_axioms=n)  # noqa: E731
        base, extra = gen(10), gen(4)
    else:
        gen = lambda n: random_alc_ontology(rng, n_concepts=4, n_roles=2, n_axioms=n, depth=1)  # noqa: E731
        base, extra = gen(4), gen(2)
    new = Ontology([*base.axioms, *extra.axioms], id="new")
    old = Ontology([ax for ax in base.axioms if rng.random() < 0.8], id="old")
    return new, old


def _reverified(report, new, old) -> bool:
    return all(entails(new, ax) and not entails(old, ax) for e in report for ax in e.axioms)


def test_criterion_4_diff_correctness(fixtures):
    mismatches, entries = [], 0
    n = 40
    for seed in range(n):
        new, old = _diff_instance(seed)
        names = sorted(new.signature.concepts | old.signature.concepts)
        roles = sorted(new.signature.roles | old.signature.roles)[:2]
        scope = Signature(frozenset(names), frozenset(roles))
        for include in (False, True):
            report = logical_diff(new, old, scope, ALL_SHAPES, include_unsatisfiable=include)
            keys, unsat = diff_keys(new, old, names, roles, include)
            entries += len(report)
            if report_keys(report) != keys or {e.witness.lhs for e in report.unsatisfiable} != unsat:
                mismatches.append((seed, include, "brute"))
            if not _reverified(report, new, old):
                mismatches.append((seed, include, "reverify"))
    for key, o in fixtures.items():
        report = logical_diff(o, o, default_scope(o, o), ALL_SHAPES)
        if len(report) or report.unsatisfiable:
            mismatches.append((key, "self-diff"))
    real = logical_diff(fixtures["all"], fixtures["pc"])
    if not _reverified(real, fixtures["all"], fixtures["pc"]):
        mismatches.append(("hpo_all", "reverify"))
    record(4, not mismatches,
           f"{n} brute-force instances ({entries} entries), {len(fixtures)} self-diffs, "
           f"{len(real)} fixture entries re-verified; mismatches: {mismatches or 'none'}")


# -- 5. justifications


def _sound(o, target, js) -> bool:
    for j in js:
        if not entails(Ontology(j.axioms), target):
            return False
        for ax in j.axioms:
            if entails(Ontology([x for x in j.axioms if x != ax]), target):
                return False
    return True


def test_criterion_5_justifications(fixtures):
    bad, targets = [], 0
    for seed in range(40):
        rng = random.Random(9000 + seed)
        if seed % 2:
            o = random_el_ontology(rng, n_concepts=5, n_roles=2, n_axioms=rng.randint(3, 10))
        else:
            o = random_alc_ontology(rng, n_concepts=4, n_roles=2, n_axioms=rng.randint(3, 8), depth=1)
        assert len(o) <= 10
        names = sorted(o.signature.concepts)
        cands = [SubClassOf(Atomic(a), Atomic(b)) for a in names for b in names if a != b]
        cands += [SubClassOf(Atomic(a), BOTTOM) for a in names]
        hits = [t for t in cands if entails(o, t)]
        for t in rng.sample(hits, min(3, len(hits))):
            targets += 1
            js = justify(o, t, max_count=1000)
            if not _sound(o, t, js) or js.truncated:
                bad.append((seed, str(t), "sound"))
            if {frozenset(j.axioms) for j in js} != minimal_entailing_subsets(o.axioms, t):
                bad.append((seed, str(t), "complete"))
    big = [(fixtures["all"], SubClassOf(Atomic("GO_0008544"), Atomic("FMA_67175"))),
           (fixtures["all"], EquivalentClasses([Atomic("HP_0000969"), Atomic("HP_0007430")]))]
    for o, t in big:
        targets += 1
        if not _sound(o, t, justify(o, t, max_count=5)):
            bad.append((o.id, str(t), "sound"))
    record(5, not bad, f"{targets} targets sufficient and minimal, brute-force families equal; "
                       f"problems: {bad or 'none'}")


# -- 6. integration patterns as golden CLI output


def _cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main([str(a) for a in argv])
    return code, out.getvalue()


def test_criterion_6_patterns():
    all_, pc = DATA / "mini_hpo_all.ofn", DATA / "mini_hpo_pc.ofn"
    checks = {}

    code, out = _cli("diff", all_, pc, "--scope", "HP", "--max-justifications", "2")
    doc = json.loads(out)
    old_tax = json.loads(_cli("classify", pc)[1])
    old_node = next(n for n in old_tax["nodes"] if "HP_0000969" in n["members"])
    checks["a"] = (code == 0 and out == (GOLDEN / "diff_hp.json").read_text()
                   and [(e["lhs"], e["rhs"]) for e in doc["entries"] if e["equivalence"]]
                   == [("HP_0000969", "HP_0007430")]
                   and "HP_0007430" not in old_node["members"])

    code, md = _cli("diff", all_, pc, "--scope", "HP", "--shapes", "i", "--max-justifications", "3",
                    "--format", "md")
    doc = json.loads(_cli("diff", all_, pc, "--scope", "HP", "--shapes", "i",
                          "--max-justifications", "3")[1])
    entry = next((e for e in doc["cross_ontology"]["entries"]
                  if (e["lhs"], e["rhs"]) == ("GO_0008544", "FMA_67175")), None)
    texts = [ax["axiom"] for ax in entry["justifications"][0]] if entry else []
    checks["b"] = (code == 0 and md == (GOLDEN / "diff_hp_i.md").read_text()
                   and any(re.match(r"part_of (Domain|Range) ", t) for t in texts)
                   and "GO_0008544 SubClassOf part_of some GO_0043588" in texts)

    code, csv_text = _cli("diff", all_, pc, "--scope", "HP", "--shapes", "ii,iii,iv,v", "--format", "csv")
    checks["c"] = (code == 0 and csv_text == (GOLDEN / "diff_hp_ii_v.csv").read_text()
                   and "iii,GO_0030308,negatively_regulates,GO_0040007," in csv_text)

    record(6, all(checks.values()),
           "patterns " + ", ".join(f"({k}) {'ok' if v else 'MISSING'}" for k, v in checks.items()))


# -- 7. performance budget


def test_criterion_7_performance():
    o = tree_ontology(10_000, 1_000, 5)
    t0 = time.perf_counter()
    tax = classify(o)
    t_classify = time.perf_counter() - t0
    names = sorted(o.signature.concepts)
    seed = Signature(frozenset(random.Random(7).sample(names, 100)), frozenset())
    t0 = time.perf_counter()
    module = extract_module(o, seed, "bottom")
    t_module = time.perf_counter() - t0
    peak_mb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024  # kilobytes on Linux
    ok = (t_classify <= 60 and t_module <= 5 and peak_mb <= 2048
          and len(tax.nodes) == len(names) + 2 and 0 < len(module) < len(o))
    record(7, ok, f"classify {t_classify:.2f}s (≤60), 100-seed ⊥-module {t_module:.3f}s (≤5, "
                  f"{len(module)} axioms), peak RSS {peak_mb:.0f} MB (≤2048)")


# -- 8. parser round-trip and OBO shapes


def _expected_obo_axioms(text: str) -> set:
    """Axioms for the documented tag mapping, read with a plain line scan."""
    out = set()
    for block in re.split(r"\n(?=\[)", text):
        head = block.split("\n", 1)[0].strip()
        if head not in ("[Term]", "[Typedef]"):
            continue
        tags: dict[str, list[str]] = {}
        for line in block.splitlines()[1:]:
            if ":" in line:
                tag, value = line.split(":", 1)
                tags.setdefault(tag.strip(), []).append(value.split("!")[0].strip())
        if tags.get("is_obsolete") == ["true"]:
            continue
        me = canonical_id(tags["id"][0])
        if head == "[Typedef]":
            out |= {SubRoleOf(me, canonical_id(v)) for v in tags.get("is_a", [])}
            if tags.get("is_transitive") == ["true"]:
                out.add(TransitiveRole(me))
            out |= {Domain(me, Atomic(canonical_id(v))) for v in tags.get("domain", [])}
            out |= {Range(me, Atomic(canonical_id(v))) for v in tags.get("range", [])}
            continue
        out |= {SubClassOf(Atomic(me), Atomic(canonical_id(v))) for v in tags.get("is_a", [])}
        for v in tags.get("relationship", []):
            r, x = v.split()
            out.add(SubClassOf(Atomic(me), Exists(canonical_id(r), Atomic(canonical_id(x)))))
        out |= {DisjointClasses([Atomic(me), Atomic(canonical_id(v))]) for v in tags.get("disjoint_from", [])}
        if "intersection_of" in tags:
            parts = []
            for v in tags["intersection_of"]:
                bits = v.split()
                parts.append(Atomic(canonical_id(bits[0])) if len(bits) == 1
                             else Exists(canonical_id(bits[0]), Atomic(canonical_id(bits[1]))))
            out.add(EquivalentClasses([Atomic(me), And(*parts)]))
    return out


def test_criterion_8_round_trip():
    failures = []
    fixtures = sorted(p for p in DATA.iterdir() if p.suffix in (".ofn", ".obo"))
    for path in fixtures:
        text = path.read_text()
        o = (parse_obo if path.suffix == ".obo" else parse_ofn)(text)[0]
        if not structurally_equal(parse_ofn(serialize_ofn(o))[0], o):
            failures.append(path.name)
        if path.suffix == ".obo" and set(o.axioms) != _expected_obo_axioms(text):
            failures.append(path.name + " shapes")
    for seed in range(100):
        rng = random.Random(20_000 + seed)
        o = random_alc_ontology(rng, n_concepts=rng.randint(2, 6), n_roles=rng.randint(1, 3), n_axioms=rng.randint(0, 12))
        o = o.replace(labels={n: f"label {n} \"q\"" for n in o.signature.concepts if rng.random() < 0.5})
        if not structurally_equal(parse_ofn(serialize_ofn(o))[0], o):
            failures.append(f"random seed {seed}")
    record(8, not failures,
           f"{len(fixtures)} fixtures and 100 random ontologies round-trip, OBO shapes exact; "
           f"failures: {failures or 'none'}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
