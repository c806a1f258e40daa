"""Regenerate the derived fixtures in src/phenoassess/data.

* mini_hpo_all.ofn (+ provenance sidecar): mini_hpo_pc merged with the
  bottom-locality modules of mini_fma and mini_go after normalization.
* manifest.json: external entities of mini_hpo_pc per prefix.

The test suite checks that the bundled files match this script's output.
"""

import json
import sys
from pathlib import Path

from phenoassess.integrator import (
    external_signature, integrate, prefix_counts, provenance_doc, read_rules,
)
from phenoassess.loader import load
from phenoassess.ofn import serialize_ofn

DATA = Path(__file__).resolve().parents[1] / "src" / "phenoassess" / "data"
HEADER = ("# Generated from mini_hpo_pc.ofn, mini_fma.ofn and mini_go.obo with\n"
          "# rules.tsv and bottom-locality modules by demos/build_fixtures.py.\n")


def build(data: Path = DATA) -> dict[str, str]:
    """File name -> expected content."""
    pc, _ = load(data / "mini_hpo_pc.ofn")
    fma, _ = load(data / "mini_fma.ofn")
    go, _ = load(data / "mini_go.obo")
    rules = read_rules((data / "rules.tsv").read_text())
    merged, _ = integrate(pc, [fma, go], rules, id="hpo_all")

    external = {}
    for prefix in prefix_counts(pc, exclude=["HP"]):
        external[prefix] = sorted(external_signature(pc, prefix).concepts)
    manifest = {
        "mini_hpo_pc.ofn": {
            "base_prefix": "HP",
            "external": external,
            "counts": {p: len(v) for p, v in external.items()},
            "total_external": sum(len(v) for v in external.values()),
        }
    }
    return {
        "mini_hpo_all.ofn": HEADER + serialize_ofn(merged),
        "mini_hpo_all.ofn.provenance.json":
            json.dumps(provenance_doc(merged, [pc.id, fma.id, go.id]), indent=2) + "\n",
        "manifest.json": json.dumps(manifest, indent=2) + "\n",
    }


if __name__ == "__main__":
    for name, text in build().items():
        (DATA / name).write_text(text, encoding="utf-8", newline="\n")
        print(f"wrote {name}", file=sys.stderr)
