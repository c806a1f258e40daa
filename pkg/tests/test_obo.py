import pytest
from hypothesis import given
from hypothesis import strategies as st

from phenoassess.errors import ParseError
from phenoassess.model import (
    And, Atomic, DisjointClasses, Domain, EquivalentClasses, Exists, Not, Or,
    Range, SubClassOf, SubRoleOf, TransitiveRole,
)
from phenoassess.obo import canonical_id, parse_obo


def test_term_id_and_name():
    o, diags = parse_obo("[Term]\nid: HP:0000969\nname: Edema\n")
    # a stanza without logical tags contributes a label but no axiom
    assert len(o) == 0
    assert o.labels == {"HP_0000969": "Edema"}
    assert diags == []


def test_header_only_document():
    o, diags = parse_obo("format-version: 1.2\nontology: hp\n")
    assert len(o) == 0 and diags == [] and o.id == "hp"


def test_is_a():
    o, _ = parse_obo("[Term]\nid: HP:0007430\nname: Generalized edema\nis_a: HP:0000969 ! Edema\n")
    assert o.axioms == (SubClassOf(Atomic("HP_0007430"), Atomic("HP_0000969")),)
    assert o.labels["HP_0007430"] == "Generalized edema"


def test_term_shapes():
    text = """\
[Term]
id: GO:1
relationship: part_of GO:2
disjoint_from: GO:3
intersection_of: GO:4
intersection_of: regulates GO:5
intersection_of: part_of GO:6
xref: FMA:7
"""
    o, diags = parse_obo(text)
    g = lambda n: Atomic(f"GO_{n}")  # noqa: E731
    assert set(o.axioms) == {
        SubClassOf(g(1), Exists("part_of", g(2))),
        DisjointClasses([g(1), g(3)]),
        EquivalentClasses([g(1), And(g(4), Exists("regulates", g(5)), Exists("part_of", g(6)))]),
    }
    assert o.annotations["GO_1"] == (("xref", "FMA:7"),)
    assert diags == []


def test_typedef_shapes():
    text = """\
[Typedef]
id: BFO:0000050
name: part of
is_a: overlaps
is_transitive: true
domain: BFO:0000004
range: BFO:0000004
"""
    o, _ = parse_obo(text)
    assert set(o.axioms) == {
        SubRoleOf("BFO_0000050", "overlaps"), TransitiveRole("BFO_0000050"),
        Domain("BFO_0000050", Atomic("BFO_0000004")), Range("BFO_0000050", Atomic("BFO_0000004")),
    }
    assert o.labels["BFO_0000050"] == "part of"


def test_obsolete_is_skipped_with_warning():
    o, diags = parse_obo("[Term]\nid: X:1\nis_a: X:2\nis_obsolete: true\n")
    assert len(o) == 0
    assert [d.severity for d in diags] == ["warning"] and "obsolete" in diags[0].message


def test_unknown_tags_warn_and_logical_ones_are_flagged():
    o, diags = parse_obo("[Term]\nid: X:1\nfoo_tag: bar\nunion_of: X:2\nsynonym: \"x\" EXACT []\n")
    assert len(o) == 0
    assert [(d.line, d.code) for d in diags] == [(3, ""), (4, "fragment")]


def test_comments_and_modifiers_are_stripped():
    o, _ = parse_obo("[Term]\nid: X:1\nis_a: X:2 {source=\"x\"} ! two\nname: a \\! b ! c\n")
    assert o.axioms == (SubClassOf(Atomic("X_1"), Atomic("X_2")),)
    assert o.labels["X_1"] == "a ! b"


@pytest.mark.parametrize("text, line", [
    ("[Term]\nid: X:1\n[Term\nid: X:2\n", 3),
    ("[Term]\nname: nameless\n", 1),
    ("[Term]\nid: X:1\nthis line has no tag\n", 3),
    ("[Term]\nid: X:1\nrelationship: part_of\n", 3),
    ("\n\n[Term]\nid: X:1\nintersection_of: a b c\n", 5),
])
def test_error_line_numbers(text, line):
    with pytest.raises(ParseError) as exc:
        parse_obo(text)
    errors = [d for d in exc.value.diagnostics if d.severity == "error"]
    assert errors[0].line == line


def test_unsupported_stanza_warns():
    o, diags = parse_obo("[Instance]\nid: i\ninstance_of: X:1\n[Term]\nid: X:1\nis_a: X:2\n")
    assert len(o) == 1
    assert diags[0].line == 1 and diags[0].severity == "warning"


def test_canonical_id():
    assert canonical_id("HP:0000969") == "HP_0000969"
    assert canonical_id("part_of") == "part_of"
    assert canonical_id("http://x.org/a") == "http://x.org/a"


def test_bundled_go_fixture_shapes(fixtures):
    go = fixtures["go"]
    assert go.id == "go"
    assert SubClassOf(Atomic("GO_0008544"), Exists("BFO_0000050", Atomic("GO_0043588"))) in go.axioms
    assert EquivalentClasses([Atomic("GO_0030308"), And(
        Atomic("GO_0065007"), Exists("negatively_regulates", Atomic("GO_0016049")))]) in go.axioms
    assert TransitiveRole("BFO_0000050") in go.axioms
    assert SubRoleOf("negatively_regulates", "regulates") in go.axioms


def test_bundled_hpo_fixture(fixtures):
    hpo = fixtures["hpo"]
    assert {a.kind for a in hpo.axioms} == {"SubClassOf"}
    assert "HP_0000002" not in hpo.signature.concepts
    assert hpo.labels["HP_0000969"] == "Edema"


def _contains(c, types):
    if isinstance(c, types):
        return True
    for attr in ("operands",):
        for o in getattr(c, attr, ()):
            if _contains(o, types):
                return True
    for attr in ("filler", "operand"):
        sub = getattr(c, attr, None)
        if sub is not None and _contains(sub, types):
            return True
    return False


_ids = st.sampled_from(["X:1", "X:2", "Y:3", "Z:4"])
_rels = st.sampled_from(["part_of", "regulates"])
_lines = st.one_of(
    _ids.map(lambda i: f"is_a: {i}"),
    st.tuples(_rels, _ids).map(lambda t: f"relationship: {t[0]} {t[1]}"),
    _ids.map(lambda i: f"disjoint_from: {i}"),
    _ids.map(lambda i: f"intersection_of: {i}"),
    st.tuples(_rels, _ids).map(lambda t: f"intersection_of: {t[0]} {t[1]}"),
    st.just("name: something"),
)


@given(st.lists(st.tuples(_ids, st.lists(_lines, max_size=5)), max_size=5))
def test_obo_output_never_contains_or_not(stanzas):
    text = "\n".join("[Term]\nid: " + i + "\n" + "\n".join(ls) + "\n" for i, ls in stanzas)
    o, _ = parse_obo(text)
    for ax in o.axioms:
        for c in getattr(ax, "members", ()) or [getattr(ax, "sub", None), getattr(ax, "sup", None)]:
            if c is not None:
                assert not _contains(c, (Or, Not))
