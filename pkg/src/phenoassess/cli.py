"""Command-line front end: validate, extract-module, merge, classify, diff."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

from . import __version__
from .diff import (
    COLUMNS, DiffReport, Shape, cross_scope, default_scope, entry_record,
    logical_diff,
)
from .diff import to_markdown as diff_markdown
from .errors import FragmentError, ParseError, RuleCollisionError
from .explain import justification_record, justify, render_explanation
from .integrator import merge, normalize_iris, provenance_doc, read_rules
from .loader import load
from .modularity import LocalityKind, extract_module, read_seed
from .model import Ontology, Signature
from .ofn import serialize_ofn
from .reasoner import classify

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_REASONING = 2

ONTOLOGY_SUFFIXES = (".obo", ".ofn", ".owl", ".fss")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _warn(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from None


def _write(out: str | None, text: str) -> None:
    if not out or out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise CliError(f"{out}: {exc.strerror or exc}") from None


def _source_line(path: Path, line: int) -> str:
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
        return lines[line - 1].strip() if 0 < line <= len(lines) else ""
    except OSError:
        return ""


def _load(path: str, args) -> Ontology:
    """Parse a file; input errors exit 1, skipped logical constructs exit 2."""
    p = Path(path)
    try:
        onto, diags = load(p)
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError:
        raise CliError(f"{path}: not UTF-8 text") from None
    except ParseError as exc:
        for d in exc.diagnostics:
            _warn(f"{path}:{d}")
        raise CliError(f"{path}: {len([d for d in exc.diagnostics if d.severity == 'error'])} parse error(s)") from None
    fragment = [d for d in diags if d.code == "fragment"]
    for d in diags:
        if d.code != "fragment" and not getattr(args, "quiet", False):
            _warn(f"{path}:{d}")
    if fragment:
        lines = [f"{path}:{d.line}: {d.message}: {_source_line(p, d.line)}" for d in fragment]
        if not getattr(args, "skip_unsupported", False):
            raise CliError("construct outside the supported fragment\n" + "\n".join(lines),
                           EXIT_REASONING)
        for line in lines:
            _warn(line)
    return onto


# -- validate


def _ontology_files(paths: list[str]) -> list[Path]:
    out = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            out += sorted(f for f in p.rglob("*") if f.is_file() and f.suffix.lower() in ONTOLOGY_SUFFIXES)
        else:
            out.append(p)
    return out


def cmd_validate(args) -> int:
    files = _ontology_files(args.files)
    if not files:
        raise CliError("no ontology files found")
    failed = 0
    for f in files:
        try:
            onto, diags = load(f)
        except OSError as exc:
            failed += 1
            _warn(f"{f}: {exc.strerror or exc}")
            print(f"{f}: FAILED (unreadable)")
            continue
        except UnicodeDecodeError:
            failed += 1
            print(f"{f}: FAILED (not UTF-8 text)")
            continue
        except ParseError as exc:
            failed += 1
            for d in exc.diagnostics:
                _warn(f"{f}:{d}")
            n = sum(1 for d in exc.diagnostics if d.severity == "error")
            print(f"{f}: FAILED ({n} error{'s' if n != 1 else ''})")
            continue
        for d in diags:
            _warn(f"{f}:{d}")
        sig = onto.signature
        print(f"{f}: ok ({len(onto)} axioms, {len(sig.concepts)} concepts, "
              f"{len(sig.roles)} roles, {len(diags)} warning{'s' if len(diags) != 1 else ''})")
    if len(files) > 1:
        print(f"{len(files)} files, {failed} failed")
    return EXIT_INPUT if failed else EXIT_OK


# -- extract-module


def cmd_extract_module(args) -> int:
    onto = _load(args.ontology, args)
    seed = read_seed(_read_text(args.sig))
    missing = sorted((seed.concepts - onto.signature.concepts) | (seed.roles - onto.signature.roles))
    if missing:
        _warn(f"warning: {len(missing)} seed entities not in {args.ontology}: {', '.join(missing)}")
    module = extract_module(onto, seed, LocalityKind.parse(args.locality))
    _write(args.output, serialize_ofn(module))
    sig = module.signature
    _warn(f"module ({args.locality}): {len(module)} of {len(onto)} axioms, "
          f"{len(sig.concepts)} concepts, {len(sig.roles)} roles")
    return EXIT_OK


# -- merge


def cmd_merge(args) -> int:
    rules = read_rules(_read_text(args.rules)) if args.rules else []
    inputs = [_load(f, args) for f in args.files]
    try:
        normalized = [normalize_iris(o, rules) for o in inputs]
    except RuleCollisionError as exc:
        raise CliError(f"rule collision: {exc}") from None
    merged, warnings = merge(normalized, id=args.id)
    for w in warnings:
        _warn(f"warning: {w}")
    _write(args.output, serialize_ofn(merged))
    side = args.provenance
    if side is None and args.output and args.output != "-":
        side = args.output + ".provenance.json"
    if side:
        doc = provenance_doc(merged, [o.id for o in inputs])
        _write(side, json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    sig = merged.signature
    _warn(f"merged {len(inputs)} ontologies: {len(merged)} axioms, "
          f"{len(sig.concepts)} concepts, {len(sig.roles)} roles")
    return EXIT_OK


# -- classify


def _taxonomy_doc(onto: Ontology, tax) -> dict:
    labels = onto.labels
    nodes = []
    for n in tax.nodes:
        members = sorted(n.members)
        nodes.append({"id": n.name, "kind": n.kind, "members": members,
                      "labels": [labels.get(m, "") for m in members]})
    edges = sorted({(c.name, p.name) for c, p in tax.edges})
    return {
        "ontology": onto.id,
        "concepts": len(onto.signature.concepts),
        "nodes": nodes,
        "edges": [{"child": c, "parent": p} for c, p in edges],
        "unsatisfiable": sorted(tax.unsatisfiable),
    }


def _taxonomy_csv(onto: Ontology, tax) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["concept", "label", "equivalents", "parents", "unsatisfiable"])
    parents = {}
    for c, p in tax.edges:
        parents.setdefault(c, []).append(p.name)
    for node in tax.nodes:
        for m in sorted(node.members):
            eq = ";".join(x for x in sorted(node.members) if x != m)
            if node.kind == "bottom":
                w.writerow([m, onto.labels.get(m, ""), eq, "owl:Nothing", "true"])
            else:
                ps = ";".join(sorted(parents.get(node, [])))
                w.writerow([m, onto.labels.get(m, ""), eq, ps, "false"])
    return buf.getvalue()


def cmd_classify(args) -> int:
    onto = _load(args.ontology, args)
    start = time.perf_counter()
    tax = classify(onto)
    elapsed = time.perf_counter() - start
    _warn(f"classified {len(onto.signature.concepts)} concepts in {elapsed:.2f}s "
          f"({len(tax.nodes)} nodes, {len(tax.edges)} edges, {len(tax.unsatisfiable)} unsatisfiable)")
    if args.format == "csv":
        text = _taxonomy_csv(onto, tax)
    else:
        doc = _taxonomy_doc(onto, tax)
        if args.timing:
            doc["seconds"] = round(elapsed, 3)
        text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    _write(args.output, text)
    return EXIT_OK


# -- diff


def _scope_arg(value: str | None, new: Ontology, old: Ontology) -> tuple[Signature, Signature | None]:
    """Main scope and the cross-ontology scope (shared concepts outside it)."""
    if not value:
        return default_scope(new, old), None
    if Path(value).is_file():
        listed = read_seed(_read_text(value))
        roles = listed.roles or new.signature.roles
        main = Signature(listed.concepts, roles)
        shared = new.signature.concepts & old.signature.concepts
        return main, Signature(frozenset(shared - listed.concepts), roles)
    prefixes = [p.strip() for p in value.split(",") if p.strip()]
    return default_scope(new, old, prefixes), cross_scope(new, old, prefixes)


def _section(report: DiffReport, onto: Ontology, max_just: int, budget: int) -> dict:
    records = []
    for e in report.entries:
        rec = entry_record(e, report.labels)
        if max_just > 0:
            js = justify(onto, e.axiom, max_just, node_budget=budget)
            rec["justifications"] = [justification_record(j, onto.labels)["axioms"] for j in js]
            rec["justifications_truncated"] = js.truncated
        records.append(rec)
    return {
        "scope": {"concepts": len(report.scope.concepts), "roles": len(report.scope.roles)},
        "counts": report.counts(),
        "entries": records,
        "unsatisfiable": [entry_record(e, report.labels) for e in report.unsatisfiable],
    }


def cmd_diff(args) -> int:
    new = _load(args.new, args)
    old = _load(args.old, args)
    try:
        shapes = Shape.parse(args.shapes)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    scope, cross = _scope_arg(args.scope, new, old)
    if args.no_cross:
        cross = None
    kw = dict(shapes=shapes, include_unsatisfiable=args.include_unsatisfiable)
    start = time.perf_counter()
    main = logical_diff(new, old, scope, **kw)
    # role inclusions do not depend on the concept scope; report them once
    cross_kw = dict(kw, shapes=shapes - {Shape.ROLE})
    other = logical_diff(new, old, cross, **cross_kw) if cross is not None else None
    doc = {
        "new": new.id,
        "old": old.id,
        "shapes": [s.value for s in Shape if s in shapes],
        **_section(main, new, args.max_justifications, args.node_budget),
    }
    if other is not None:
        doc["cross_ontology"] = _section(other, new, args.max_justifications, args.node_budget)
    _warn(f"diff: {len(main)} entries, {len(main.unsatisfiable)} newly unsatisfiable"
          + (f", {len(other)} cross-ontology entries" if other is not None else "")
          + f" in {time.perf_counter() - start:.2f}s")

    if args.format == "json":
        text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    elif args.format == "csv":
        text = _diff_csv(doc)
    else:
        text = _diff_md(main, other, new, args.max_justifications, args.node_budget)
    _write(args.output, text)
    return EXIT_OK


def _diff_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=[*COLUMNS, "section"], extrasaction="ignore",
                       lineterminator="\n")
    w.writeheader()
    sections = [("main", doc)]
    if "cross_ontology" in doc:
        sections.append(("cross_ontology", doc["cross_ontology"]))
    for name, sec in sections:
        for key, label in (("entries", name), ("unsatisfiable", name + ":unsatisfiable")):
            for rec in sec[key]:
                w.writerow({**{k: ("" if rec.get(k) is None else rec.get(k)) for k in COLUMNS},
                            "section": label})
    return buf.getvalue()


def _diff_md(main: DiffReport, other: DiffReport | None, onto: Ontology, max_just: int,
             budget: int) -> str:
    parts = [diff_markdown(main, "Logical difference")]
    if other is not None:
        parts.append(diff_markdown(other, "Cross-ontology entailments"))
    if max_just > 0:
        parts.append("## Explanations\n")
        for report in (main, other):
            for e in (report.entries if report else []):
                for j in justify(onto, e.axiom, max_just, node_budget=budget):
                    parts.append("```\n" + render_explanation(j, onto.labels, "ids", True)
                                 + render_explanation(j, onto.labels, "names") + "```\n")
    return "\n".join(parts)


# -- entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phenoassess",
        description="Assess the logical consequences of integrating ontologies.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--skip-unsupported", action="store_true",
                        help="drop axioms outside the supported fragment instead of failing")
    common.add_argument("--threads", type=int, default=1,
                        help="parallelism cap (work currently runs in one thread)")
    common.add_argument("-q", "--quiet", action="store_true", help="hide parser warnings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse files and report diagnostics")
    p.add_argument("files", nargs="+", help="ontology files or directories")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("extract-module", parents=[common], help="locality-based module for a seed signature")
    p.add_argument("ontology")
    p.add_argument("--sig", required=True, help="seed file: one name per line, 'role:' for roles")
    p.add_argument("--locality", choices=[k.value for k in LocalityKind], default="bottom")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_extract_module)

    p = sub.add_parser("merge", parents=[common], help="normalize names and merge ontologies")
    p.add_argument("files", nargs="+")
    p.add_argument("--rules", help="normalization rules: 'pattern<TAB>replacement' per line")
    p.add_argument("--id", help="id of the merged ontology")
    p.add_argument("--provenance", help="provenance sidecar path (default: OUTPUT.provenance.json)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("classify", parents=[common], help="compute the concept hierarchy")
    p.add_argument("ontology")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--timing", action="store_true", help="include wall-clock seconds in the JSON report")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("diff", parents=[common], help="approximated logical difference")
    p.add_argument("new")
    p.add_argument("old")
    p.add_argument("--scope", help="comma-separated prefixes (e.g. HP) or a signature file")
    p.add_argument("--shapes", default="i,ii,iii,iv,v", help="witness shapes, e.g. i,iii (default: all)")
    p.add_argument("--max-justifications", type=int, default=0, metavar="N")
    p.add_argument("--node-budget", type=int, default=10_000, help="hitting-set tree node budget")
    p.add_argument("--include-unsatisfiable", action="store_true",
                   help="enumerate pairs over unsatisfiable concepts too")
    p.add_argument("--no-cross", action="store_true", help="skip the cross-ontology section")
    p.add_argument("--format", choices=["json", "csv", "md"], default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_diff)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; here 2 means a reasoning error
        return EXIT_INPUT if exc.code == 2 else int(exc.code or 0)
    if getattr(args, "threads", 1) < 1:
        _warn("error: --threads must be at least 1")
        return EXIT_INPUT
    try:
        return args.func(args)
    except CliError as exc:
        _warn(f"error: {exc}")
        return exc.code
    except FragmentError as exc:
        _warn(f"error: {exc}")
        return EXIT_REASONING
    except ValueError as exc:
        _warn(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
