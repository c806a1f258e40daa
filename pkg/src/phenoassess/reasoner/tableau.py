"""Tableau satisfiability for ALCH with transitive roles and domain/range.

The TBox is preprocessed once per ontology:

* definitions ``A ≡ C`` (A atomic, defined once, acyclic, no other GCI with
  A alone on the left) are lazily unfolded in both directions;
* GCIs with an atomic, conjunctive or existential left-hand side are
  absorbed into per-atom or per-role triggers;
* the remaining GCIs are internalized as disjunctions added to every node.

Since there are no inverse roles, a node's label never changes because of its
successors, so a node is decided by saturating its label propositionally
(branching on disjunctions) and then deciding each successor independently.
Termination comes from subset blocking against ancestor labels. Results for
node labels are cached: unsatisfiable results always, satisfiable ones only
when they do not rely on a blocking ancestor that is still being decided.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import FragmentError
from ..model import (
    AXIOM_TYPES, BOTTOM, TOP, And, Atomic, Axiom, Concept, EquivalentClasses,
    Exists, Forall, Not, Ontology, Or, SubClassOf, SubRoleOf, TransitiveRole,
    conjunction, disjunction, negate, nnf, normalize,
)

K_TOP, K_BOT, K_ATOM, K_NEG, K_AND, K_OR, K_SOME, K_ALL = range(8)
_INF = 1 << 30


@dataclass(frozen=True)
class RootResult:
    """Outcome of a top-level satisfiability run.

    ``determined`` holds the atoms forced before the first branching
    decision (all of them are entailed); ``model`` the positive atoms of the
    root node in the satisfying completion that was found.
    """

    satisfiable: bool
    determined: frozenset
    model: frozenset


class Tableau:
    def __init__(self, ontology: Ontology | list[Axiom]):
        axioms = list(ontology)
        for ax in axioms:
            if not isinstance(ax, AXIOM_TYPES):
                raise FragmentError(f"unsupported axiom: {ax!r}")

        self._ids: dict[Concept, int] = {}
        self._expr: list[Concept] = []
        self._kind: list[int] = []
        self._arg: list = []       # atom name / operand ids / role
        self._filler: list[int] = []
        self._comp: list[int | None] = []
        self._pos: dict[int, list[int]] = {}
        self._negunf: dict[int, list[int]] = {}
        self._role_trig: dict[str, list[int]] = {}
        self._globals: list[int] = []
        self._sat_cache: dict[frozenset, bool] = {}
        self._trans_cache: dict[tuple[str, str], tuple[str, ...]] = {}
        self._role_marker: dict[str, int] = {}

        self._build_roles(axioms)
        self._build_tbox(axioms)

    # ------------------------------------------------------------------ roles

    def _build_roles(self, axioms) -> None:
        told: dict[str, set[str]] = {}
        transitive: set[str] = set()
        for ax in axioms:
            for r in ax.signature.roles:
                told.setdefault(r, set())
            if type(ax) is SubRoleOf:
                told[ax.sub].add(ax.sup)
            elif type(ax) is TransitiveRole:
                transitive.add(ax.role)
        supers: dict[str, frozenset] = {}
        for r in told:
            seen = {r}
            todo = [r]
            while todo:
                for s in told.get(todo.pop(), ()):
                    if s not in seen:
                        seen.add(s)
                        todo.append(s)
            supers[r] = frozenset(seen)
        self._supers = supers
        self.transitive = frozenset(transitive)

    def supers(self, role: str) -> frozenset:
        """Reflexive-transitive closure of the told role hierarchy."""
        got = self._supers.get(role)
        if got is None:
            got = self._supers[role] = frozenset((role,))
        return got

    def _transitive_between(self, sub: str, sup: str) -> tuple[str, ...]:
        key = (sub, sup)
        got = self._trans_cache.get(key)
        if got is None:
            got = tuple(sorted(t for t in self.supers(sub)
                               if t in self.transitive and sup in self.supers(t)))
            self._trans_cache[key] = got
        return got

    def _marker(self, role: str) -> int:
        m = self._role_marker.get(role)
        if m is None:
            m = self._role_marker[role] = -1 - len(self._role_marker)
        return m

    # ------------------------------------------------------------------ TBox

    def _build_tbox(self, axioms) -> None:
        gcis: list[tuple[Concept, Concept]] = []
        candidates: dict[str, list[tuple[Axiom, Concept]]] = {}
        for ax in axioms:
            if type(ax) is EquivalentClasses and len(ax.members) == 2:
                a, b = ax.members
                if type(a) is Atomic and type(b) is not Atomic:
                    candidates.setdefault(a.iri, []).append((ax, b))
                elif type(b) is Atomic and type(a) is not Atomic:
                    candidates.setdefault(b.iri, []).append((ax, a))
        defining = {name: cands[0][0] for name, cands in candidates.items() if len(cands) == 1}

        def split(c: Concept, d: Concept, origin: str | None):
            if type(c) is Or:
                for op in c.operands:
                    split(op, d, origin)
            else:
                gcis.append((c, d, origin))

        owner = {id(ax): name for name, ax in defining.items()}
        lhs_count: dict[str, int] = {}
        for ax in axioms:
            own = owner.get(id(ax))
            for gci in normalize(ax):
                if type(gci) is not SubClassOf:
                    continue
                split(nnf(gci.sub), nnf(gci.sup), own)
        for c, d, origin in gcis:
            if type(c) is Atomic and c.iri != origin:
                lhs_count[c.iri] = lhs_count.get(c.iri, 0) + 1

        definitions = {name: nnf(candidates[name][0][1]) for name in defining
                       if lhs_count.get(name, 0) == 0}
        definitions = _drop_cycles(definitions)
        self.definitional = frozenset(definitions)

        for name, body in definitions.items():
            a = self.intern(Atomic(name))
            self._pos.setdefault(a, []).append(self.intern(body))
            self._negunf.setdefault(self.complement(a), []).append(self.intern(negate(body)))

        for c, d, origin in gcis:
            if origin is not None and origin in definitions:
                continue
            self._absorb(c, d)

    def _absorb(self, c: Concept, d: Concept) -> None:
        if c is BOTTOM or d is TOP:
            return
        t = type(c)
        if c is TOP:
            self._globals.append(self.intern(d))
        elif t is Atomic and c.iri not in self.definitional:
            self._pos.setdefault(self.intern(c), []).append(self.intern(d))
        elif t is And:
            prim = [op for op in c.operands
                    if type(op) is Atomic and op.iri not in self.definitional]
            if prim:
                rest = conjunction(*(op for op in c.operands if op is not prim[0]))
                self._pos.setdefault(self.intern(prim[0]), []).append(
                    self.intern(disjunction(negate(rest), d)))
                return
            ex = [op for op in c.operands if type(op) is Exists]
            if ex:
                rest = conjunction(*(op for op in c.operands if op is not ex[0]))
                self._add_role_trigger(ex[0], disjunction(negate(rest), d))
                return
            self._globals.append(self.intern(disjunction(negate(c), d)))
        elif t is Exists:
            self._add_role_trigger(c, d)
        else:
            self._globals.append(self.intern(disjunction(negate(c), d)))

    def _add_role_trigger(self, ex: Exists, d: Concept) -> None:
        # ∃R.X ⊑ D holds at nodes without R-successors; elsewhere D or ∀R.¬X
        body = d if ex.filler is TOP else disjunction(Forall(ex.role, negate(ex.filler)), d)
        self._role_trig.setdefault(ex.role, []).append(self.intern(body))

    # ------------------------------------------------------------- interning

    def intern(self, c: Concept) -> int:
        got = self._ids.get(c)
        if got is not None:
            return got
        t = type(c)
        filler = -1
        if c is TOP:
            kind, arg = K_TOP, None
        elif c is BOTTOM:
            kind, arg = K_BOT, None
        elif t is Atomic:
            kind, arg = K_ATOM, c.iri
        elif t is Not:
            if type(c.operand) is not Atomic:
                return self.intern(nnf(c))
            kind, arg = K_NEG, self.intern(c.operand)
        elif t is And:
            kind, arg = K_AND, tuple(self.intern(o) for o in c.operands)
        elif t is Or:
            kind, arg = K_OR, tuple(self.intern(o) for o in c.operands)
        elif t is Exists:
            kind, arg, filler = K_SOME, c.role, self.intern(c.filler)
        elif t is Forall:
            kind, arg, filler = K_ALL, c.role, self.intern(c.filler)
        else:
            raise FragmentError(f"unsupported concept construct: {c!r}")
        i = len(self._expr)
        self._ids[c] = i
        self._expr.append(c)
        self._kind.append(kind)
        self._arg.append(arg)
        self._filler.append(filler)
        self._comp.append(None)
        return i

    def complement(self, i: int) -> int:
        got = self._comp[i]
        if got is None:
            got = self.intern(negate(self._expr[i]))
            self._comp[i] = got
            self._comp[got] = i
        return got

    # ------------------------------------------------------------- expansion

    def _expand(self, label: set, items) -> bool:
        """Deterministic rules; False on clash."""
        kind, arg = self._kind, self._arg
        stack = list(items)
        while stack:
            c = stack.pop()
            if c in label:
                continue
            k = kind[c]
            if k == K_BOT:
                return False
            label.add(c)
            if k == K_ATOM:
                if self.complement(c) in label:
                    return False
                more = self._pos.get(c)
                if more:
                    stack.extend(more)
            elif k == K_NEG:
                if arg[c] in label:
                    return False
                more = self._negunf.get(c)
                if more:
                    stack.extend(more)
            elif k == K_AND:
                stack.extend(arg[c])
            elif k == K_SOME:
                for s in self.supers(arg[c]):
                    m = self._marker(s)
                    if m not in label:
                        label.add(m)
                        more = self._role_trig.get(s)
                        if more:
                            stack.extend(more)
        return True

    def _dead(self, label: set, c: int) -> bool:
        k = self._kind[c]
        if k == K_BOT:
            return True
        if k == K_ATOM or k == K_NEG:
            return self.complement(c) in label
        return False

    def _propagate(self, label: set):
        """Unit-propagate disjunctions; returns (ok, first open disjunction or None)."""
        kind, arg = self._kind, self._arg
        while True:
            progress = False
            branch = None
            for c in sorted(x for x in label if x >= 0 and kind[x] == K_OR):
                ops = arg[c]
                if any(o in label for o in ops):
                    continue
                live = [o for o in ops if not self._dead(label, o)]
                if not live:
                    return False, None
                if len(live) == 1:
                    if not self._expand(label, live):
                        return False, None
                    progress = True
                    break
                if branch is None:
                    branch = (c, live)
            if not progress:
                return True, branch

    def _search(self, label: set, path: list, root_record: list | None = None):
        """Returns (sat, dependency depth, completed label)."""
        ok, branch = self._propagate(label)
        if root_record is not None:
            root_record.append(frozenset(label))
        if not ok:
            return False, _INF, None
        if branch is not None:
            _, live = branch
            for op in live:
                trial = set(label)
                if not self._expand(trial, (op,)):
                    continue
                sat, dep, final = self._search(trial, path)
                if sat:
                    return True, dep, final
            return False, _INF, None
        return self._successors(label, path)

    def _successors(self, label: set, path: list):
        kind, arg, filler = self._kind, self._arg, self._filler
        somes = sorted(c for c in label if c >= 0 and kind[c] == K_SOME)
        if not somes:
            return True, _INF, label
        alls = [c for c in label if c >= 0 and kind[c] == K_ALL]
        sub_path = path + [label]
        dep = _INF
        for s in somes:
            r = arg[s]
            sup = self.supers(r)
            core = {filler[s]}
            for a in alls:
                ra = arg[a]
                if ra in sup:
                    core.add(filler[a])
                    for t in self._transitive_between(r, ra):
                        core.add(a if t == ra else self.intern(Forall(t, self._expr[filler[a]])))
            sat, d = self._sat_node(frozenset(core), sub_path)
            if not sat:
                return False, _INF, None
            if d < dep:
                dep = d
        return True, dep, label

    def _sat_node(self, core: frozenset, path: list) -> tuple[bool, int]:
        cached = self._sat_cache.get(core)
        if cached is not None:
            return cached, _INF
        for depth, lab in enumerate(path):
            if core <= lab:
                return True, depth
        depth = len(path)
        label: set = set()
        if not self._expand(label, [*self._globals, *core]):
            self._sat_cache[core] = False
            return False, _INF
        sat, dep, _ = self._search(label, path)
        if not sat:
            self._sat_cache[core] = False
            return False, _INF
        if dep >= depth:
            self._sat_cache[core] = True
            return True, _INF
        return True, dep

    # ------------------------------------------------------------- public

    def run(self, concepts) -> RootResult:
        """Decide satisfiability of the conjunction of ``concepts``."""
        ids = [self.intern(nnf(c)) for c in concepts]
        label: set = set()
        key = frozenset(ids)
        if not self._expand(label, [*self._globals, *ids]):
            self._sat_cache[key] = False
            return RootResult(False, frozenset(), frozenset())
        record: list = []
        sat, _, final = self._search(label, [], record)
        det = self._atoms(record[0]) if record else frozenset()
        self._sat_cache[key] = sat
        if not sat:
            return RootResult(False, det, frozenset())
        return RootResult(True, det, self._atoms(final))

    def _atoms(self, label) -> frozenset:
        kind, arg = self._kind, self._arg
        return frozenset(arg[c] for c in label if c >= 0 and kind[c] == K_ATOM)

    def satisfiable(self, *concepts: Concept) -> bool:
        ids = frozenset(self.intern(nnf(c)) for c in concepts)
        cached = self._sat_cache.get(ids)
        if cached is not None:
            return cached
        return self.run(concepts).satisfiable

    def subsumed(self, sub: Concept, sup: Concept) -> bool:
        return not self.satisfiable(sub, negate(sup))


def _drop_cycles(definitions: dict[str, Concept]) -> dict[str, Concept]:
    """Remove definitions lying on a cycle through other definitions."""
    deps = {a: sorted(x for x in body.atoms() if x in definitions)
            for a, body in definitions.items()}
    rdeps: dict[str, list[str]] = {a: [] for a in deps}
    for a, bs in deps.items():
        for b in bs:
            rdeps[b].append(a)

    # Kosaraju: finishing order on the graph, then components on the reverse
    order: list[str] = []
    seen: set[str] = set()
    for start in sorted(deps):
        if start in seen:
            continue
        seen.add(start)
        stack = [(start, iter(deps[start]))]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                order.append(node)
            elif nxt not in seen:
                seen.add(nxt)
                stack.append((nxt, iter(deps[nxt])))

    cyclic: set[str] = set()
    assigned: set[str] = set()
    for root in reversed(order):
        if root in assigned:
            continue
        comp = [root]
        assigned.add(root)
        todo = [root]
        while todo:
            for prev in rdeps[todo.pop()]:
                if prev not in assigned:
                    assigned.add(prev)
                    comp.append(prev)
                    todo.append(prev)
        if len(comp) > 1 or root in deps[root]:
            cyclic.update(comp)
    return {a: b for a, b in definitions.items() if a not in cyclic}
