"""Logic-based assessment of ontology integration.

Parse OBO and OWL functional syntax, extract locality-based modules, merge,
classify with the built-in reasoner, compute an approximated logical
difference and explain each new consequence with minimal justifications.
"""

__version__ = "0.1.0"

from .diff import DiffEntry, DiffReport, Shape, Witness, candidates, logical_diff
from .errors import (
    FragmentError, NotEntailedError, ParseDiagnostic, ParseError,
    RuleCollisionError,
)
from .explain import Justification, justify, render_explanation
from .integrator import external_signature, integrate, merge, normalize_iris
from .loader import load
from .model import (
    BOTTOM, TOP, And, Atomic, DisjointClasses, Domain, EquivalentClasses,
    Exists, Forall, Iri, Not, Ontology, Or, Range, Signature, SubClassOf,
    SubRoleOf, TransitiveRole, normalize, signature_of, structurally_equal,
)
from .modularity import LocalityKind, extract_module, is_local
from .obo import parse_obo
from .ofn import parse_ofn, serialize_ofn
from .reasoner import Taxonomy, classify, entails, is_satisfiable

__all__ = [
    "And", "Atomic", "BOTTOM", "DiffEntry", "DiffReport", "DisjointClasses",
    "Domain", "EquivalentClasses", "Exists", "Forall", "FragmentError", "Iri",
    "Justification", "LocalityKind", "Not", "NotEntailedError", "Ontology",
    "Or", "ParseDiagnostic", "ParseError", "Range", "RuleCollisionError",
    "Shape", "Signature", "SubClassOf", "SubRoleOf", "TOP", "Taxonomy",
    "TransitiveRole", "Witness", "candidates", "classify", "entails",
    "external_signature", "extract_module", "integrate", "is_local",
    "is_satisfiable", "justify", "load", "logical_diff", "merge", "normalize",
    "normalize_iris", "parse_obo", "parse_ofn", "render_explanation",
    "serialize_ofn", "signature_of", "structurally_equal",
]
