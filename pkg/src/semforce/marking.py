"""Marking engine: partial 0/1 marks on forcing-tree nodes.

Marks spread by forced deduction: propositional table rules, quantifier
instantiation and generalization (with the independence side-condition),
iteration between nodes sharing one formula, and supposition scopes whose
absorbed marks are rolled back on discharge. A contradiction is a double mark:
two nodes associated with the same ground formula carrying opposite values.

State mutates in place; `checkpoint`/`rollback` give the search cheap undo.
Rolled-back trace steps are kept, flagged absorbed, so step numbering stays
dense and premise references stay meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import PremiseError, StateError
from .formulas import (
    Const,
    Formula,
    Term,
    Var,
    alpha_normalize,
    constants_of,
    free_variables,
    identifiers_of,
)
from .rules import CATALOG, RuleSpec, rules_for, verify_derived_rule
from .tree import ForcingTree

__all__ = [
    "DoubleMark",
    "Frame",
    "Justification",
    "MarkingState",
    "Quiescent",
    "RuleSpec",
    "TraceStep",
    "capped_obligations",
    "discharge",
    "forced_consequences",
    "init_marking",
    "is_independent",
    "open_supposition",
    "saturate",
    "set_mark",
    "verify_derived_rule",
]

Mark = int


@dataclass(frozen=True)
class Justification:
    rule: str
    premises: tuple[int, ...] = ()
    step: Optional[int] = None


@dataclass
class TraceStep:
    step: int
    node: Optional[int]
    value: Optional[Mark]
    rule: str
    premises: tuple[int, ...]
    absorbed: bool = False


@dataclass(frozen=True)
class Quiescent:
    pass


@dataclass(frozen=True)
class DoubleMark:
    n1: int
    n2: int


@dataclass
class Frame:
    """One open supposition: a provisional mark whose scope absorbs later steps."""

    node: int
    assumed: Mark
    opened_at: int
    free_vars: frozenset[str]
    kind: str
    checkpoint: "Checkpoint"


@dataclass
class Checkpoint:
    marks: dict
    step_of: dict
    consensus: dict
    index: dict
    registry: tuple
    witnesses: dict
    inst_rule: dict
    scopes_len: int
    trace_len: int
    next_nid: int
    dm: Optional[DoubleMark]
    generic: Optional[Var]


_WITNESS_RULES = ("IR∀", "IA∃")
_ALL_INST_RULES = ("IA∀", "IR∀", "I∀", "IA∃", "IR∃", "I∃")
_KIND_TO_POS = {"not": (("a", 0),), "and": (("i", 0), ("d", 1)), "or": (("i", 0), ("d", 1)),
                "imp": (("i", 0), ("d", 1)), "iff": (("i", 0), ("d", 1))}


class MarkingState:
    def __init__(self, tree: ForcingTree):
        self.tree = tree
        self.marks: dict[int, tuple[Mark, Justification]] = {}
        self.step_of: dict[int, int] = {}
        # formula key -> (value, first node marked with it); ground nodes only
        self.consensus: dict[Formula, tuple[Mark, int]] = {}
        # formula key -> node ids carrying that ground formula
        self.formula_index: dict[Formula, list[int]] = {}
        self.domain_registry: list[Term] = [Const(c) for c in constants_of(tree.source)]
        self.witness_registry: dict[str, tuple[int, frozenset[str]]] = {}
        self.inst_rule: dict[int, str] = {}
        self.scopes: list[Frame] = []
        self.trace: list[TraceStep] = []
        self.dm: Optional[DoubleMark] = None
        self.generic: Optional[Var] = None
        self._step = 0
        self._witness_counter = 0
        self._reserved = identifiers_of(tree.source)
        self._key_cache: dict[int, Optional[Formula]] = {}
        for nid in tree.preorder():
            self._index_node(nid)

    # ------------------------------------------------------------- inspection

    def marked(self, nid: int) -> Optional[Mark]:
        got = self.marks.get(nid)
        return None if got is None else got[0]

    def key(self, nid: int) -> Optional[Formula]:
        """Alpha-normalized node formula; None while placeholders are unfilled."""
        if nid in self._key_cache:
            return self._key_cache[nid]
        k = alpha_normalize(self.tree.node_formula(nid)) if self.tree.is_ground_node(nid) else None
        self._key_cache[nid] = k
        return k

    def _index_node(self, nid: int) -> None:
        k = self.key(nid)
        if k is not None:
            self.formula_index.setdefault(k, []).append(nid)

    def witness_child(self, qnid: int) -> Optional[int]:
        for c in self.tree.instance_children(qnid):
            if self.inst_rule.get(c) in _WITNESS_RULES:
                return c
        return None

    # ------------------------------------------------------- undo bookkeeping

    def checkpoint(self) -> Checkpoint:
        return Checkpoint(
            marks=dict(self.marks),
            step_of=dict(self.step_of),
            consensus=dict(self.consensus),
            index={k: list(v) for k, v in self.formula_index.items()},
            registry=tuple(self.domain_registry),
            witnesses=dict(self.witness_registry),
            inst_rule=dict(self.inst_rule),
            scopes_len=len(self.scopes),
            trace_len=len(self.trace),
            next_nid=self.tree._next_nid,
            dm=self.dm,
            generic=self.generic,
        )

    def rollback(self, cp: Checkpoint) -> None:
        self.marks = dict(cp.marks)
        self.step_of = dict(cp.step_of)
        self.consensus = dict(cp.consensus)
        self.formula_index = {k: list(v) for k, v in cp.index.items()}
        self.domain_registry = list(cp.registry)
        self.witness_registry = dict(cp.witnesses)
        self.inst_rule = dict(cp.inst_rule)
        del self.scopes[cp.scopes_len:]
        for rec in self.trace[cp.trace_len:]:
            rec.absorbed = True
        self.dm = cp.dm
        self.generic = cp.generic
        tree = self.tree
        for nid in range(cp.next_nid, tree._next_nid):
            node = tree.nodes.pop(nid, None)
            if node is None:
                continue
            self._key_cache.pop(nid, None)
            tree._formula_cache.pop(nid, None)
            if node.parent is not None and node.parent in tree.nodes:
                siblings = tree.nodes[node.parent].children
                if nid in siblings:
                    siblings.remove(nid)
        tree._next_nid = cp.next_nid

    def clone(self) -> "MarkingState":
        import copy

        return copy.deepcopy(self)

    # ----------------------------------------------------------- trace output

    def _record(self, node: Optional[int], value: Optional[Mark], rule: str, premise_nodes: tuple[int, ...],
                premise_steps: Optional[tuple[int, ...]] = None) -> int:
        self._step += 1
        if premise_steps is None:
            premise_steps = tuple(self.step_of[p] for p in premise_nodes if p in self.step_of)
        self.trace.append(TraceStep(self._step, node, value, rule, premise_steps))
        return self._step

    # -------------------------------------------------------------- new names

    def fresh_witness(self) -> str:
        while True:
            self._witness_counter += 1
            name = f"w{self._witness_counter}"
            if name not in self._reserved:
                return name

    def introduce_generic(self) -> Var:
        if self.generic is not None:
            raise StateError("a generic variable is already in the registry")
        n = 1
        while f"v{n}" in self._reserved:
            n += 1
        self.generic = Var(f"v{n}")
        self.domain_registry.append(self.generic)
        return self.generic

    # ------------------------------------------------------------ set_mark

    def set_mark(self, n: int, v: Mark, rule: str, premises: tuple[int, ...] = ()) -> None:
        """Mark node n with v, justified by rule over the cited premise nodes.

        Re-marking with the same value is a silent no-op. A conflicting value,
        on this node or on any node sharing its ground formula, records the
        step and transitions to double-mark-detected.
        """
        if self.dm is not None:
            raise StateError("state already holds a double mark")
        if v not in (0, 1):
            raise PremiseError(f"mark must be 0 or 1, got {v!r}")
        self._validate(n, v, rule, premises)
        current = self.marked(n)
        if current == v:
            return
        step = self._record(n, v, rule, premises)
        just = Justification(rule, premises, step)
        if current is not None:
            self.dm = DoubleMark(n, n)
            self._record(n, None, "DM", (), (self.step_of[n], step))
            return
        k = self.key(n)
        self.marks[n] = (v, just)
        self.step_of[n] = step
        hit = self.consensus.get(k)
        if hit is None:
            self.consensus[k] = (v, n)
        elif hit[0] != v:
            self.dm = DoubleMark(hit[1], n)
            self._record(n, None, "DM", (), (self.step_of[hit[1]], step))

    def _validate(self, n: int, v: Mark, rule: str, premises: tuple[int, ...]) -> None:
        tree = self.tree
        if n not in tree.nodes:
            raise PremiseError(f"unknown node {n}")
        node = tree.nodes[n]
        if not tree.is_ground_node(n):
            raise PremiseError(f"node {n} has unfilled placeholders and cannot be marked")

        def need(cond: bool, msg: str) -> None:
            if not cond:
                raise PremiseError(f"{rule}: {msg}")

        if rule == "RR":
            need(n == tree.root and v == 0, "only the root may be rejected by RR")
        elif rule == "m":
            need(node.kind == "atom", "external leaf marks apply to atom nodes only")
        elif rule == "OA":
            need(v == 1, "acceptance option assumes 1")
        elif rule == "OR":
            need(v == 0, "rejection option assumes 0")
        elif rule == "OA-DM":
            need(v == 0, "a failed acceptance option concludes 0")
        elif rule == "OR-DM":
            need(v == 1, "a failed rejection option concludes 1")
        elif rule in ("OAi-Ad→", "ORd-Ri→"):
            need(node.kind == "imp" and v == 1, "discharge concludes acceptance of the conditional")
        elif rule in ("ORi-Ad∨", "ORd-Ai∨"):
            need(node.kind == "or" and v == 1, "discharge concludes acceptance of the disjunction")
        elif rule in ("IA", "IR"):
            need(v == (1 if rule == "IA" else 0), "iteration keeps the source value")
            need(len(premises) == 1, "iteration cites one source node")
            src = premises[0]
            need(self.marked(src) == v, "source node does not carry the iterated value")
            need(self.key(src) == self.key(n), "iteration requires nodes associated with one formula")
        elif rule in ("A∀", "R∃", "R∀", "A∃"):
            parent = node.parent
            need(parent is not None, "no quantifier above this node")
            q = tree.nodes[parent]
            want_kind = "forall" if rule in ("A∀", "R∀") else "exists"
            want_parent = 1 if rule in ("A∀", "A∃") else 0
            want_child = 1 if rule in ("A∀", "A∃") else 0
            need(q.kind == want_kind, f"parent is not a {want_kind} node")
            need(self.marked(parent) == want_parent, "quantifier does not carry the required mark")
            need(node.fill_term is not None, "rule applies to instantiated branches only")
            need(v == want_child, "wrong conclusion value")
            if rule in ("R∀", "A∃"):
                need(self.inst_rule.get(n) in _WITNESS_RULES, "rule applies to the fresh-witness branch only")
        elif rule in ("Aa∃", "Ra∀", "Aa∀", "Ra∃"):
            want_kind = "exists" if rule in ("Aa∃", "Ra∃") else "forall"
            want_v = 1 if rule in ("Aa∃", "Aa∀") else 0
            need(node.kind == want_kind, f"rule applies to a {want_kind} node")
            need(v == want_v, "wrong conclusion value")
            need(len(premises) == 1, "rule cites one instance branch")
            c = premises[0]
            child = tree.nodes.get(c)
            need(child is not None and child.parent == n and child.fill_term is not None,
                 "premise is not an instance branch of this quantifier")
            need(self.marked(c) == want_v, "instance branch does not carry the required mark")
            if rule in ("Aa∀", "Ra∃"):
                term = child.fill_term
                need(isinstance(term, Var), "generalization requires a variable instance")
                need(self.is_independent(term.name, c),
                     f"variable {term.name} is not independent in the instance branch")
        elif rule in CATALOG:
            spec = CATALOG[rule]
            target_pos = None
            anchor = None
            if any(pos == "k" for pos, _ in spec.conclusions):
                if node.kind == spec.connective:
                    target_pos, anchor = "k", node
            if target_pos is None:
                parent = node.parent
                need(parent is not None and tree.nodes[parent].kind == spec.connective,
                     f"node is not positioned for a {spec.connective} rule")
                anchor = tree.nodes[parent]
                if spec.connective == "not":
                    target_pos = "a"
                else:
                    target_pos = "i" if anchor.children[0] == n else "d"
            need(any(pos == target_pos and val == v for pos, val in spec.conclusions),
                 "rule does not conclude this mark at this position")

            def at(pos: str) -> int:
                if pos == "k":
                    return anchor.nid
                idx = dict(_KIND_TO_POS[anchor.kind])[pos]
                return anchor.children[idx]

            for pos, val in spec.premises:
                need(self.marked(at(pos)) == val, f"premise {pos}={val} does not hold")
        else:
            raise PremiseError(f"unknown rule identifier {rule!r}")

    # -------------------------------------------------------- instantiation

    def instantiate(self, qnid: int, term: Term, rule: str) -> int:
        """Create an instance branch of quantifier qnid filled with term, as one
        of the instantiation rules; witness rules also register the new constant."""
        if rule not in _ALL_INST_RULES:
            raise PremiseError(f"unknown instantiation rule {rule!r}")
        q = self.tree.nodes.get(qnid)
        if q is None or not q.is_quantifier:
            raise PremiseError(f"node {qnid} is not a quantifier node")
        mark = self.marked(qnid)
        if rule == "IA∀":
            if not (q.kind == "forall" and mark == 1):
                raise PremiseError("IA∀ applies to an accepted universal")
        elif rule == "IR∃":
            if not (q.kind == "exists" and mark == 0):
                raise PremiseError("IR∃ applies to a rejected existential")
        elif rule == "IR∀":
            if not (q.kind == "forall" and mark == 0):
                raise PremiseError("IR∀ applies to a rejected universal")
        elif rule == "IA∃":
            if not (q.kind == "exists" and mark == 1):
                raise PremiseError("IA∃ applies to an accepted existential")
        # I∀/I∃ are permissions: an instance branch may exist without asserting
        # anything, so they carry no mark precondition.
        if rule in _WITNESS_RULES:
            if not isinstance(term, Const):
                raise PremiseError("a witness must be a fresh constant")
            used = {t.name for t in self.domain_registry} | self._reserved | set(self.witness_registry)
            if term.name in used:
                raise PremiseError(f"witness {term.name!r} is not fresh")
        child = self.tree.instantiate(qnid, term)
        self.inst_rule[child] = rule
        for nid in self.tree.preorder(child):
            self._index_node(nid)
        self._record(child, None, rule, (qnid,))
        if rule in _WITNESS_RULES:
            fv = frozenset(free_variables(self.tree.node_formula(child)))
            self.witness_registry[term.name] = (child, fv)
            self.domain_registry.append(term)
        return child

    # ----------------------------------------------------------- independence

    def is_independent(self, var: str, n: int) -> bool:
        """The eigenvariable condition: var is free of open suppositions that
        mention it and of witnesses introduced while it was free."""
        for frame in self.scopes:
            if var in frame.free_vars:
                return False
        for c in constants_of(self.tree.node_formula(n)):
            entry = self.witness_registry.get(c)
            if entry is not None and var in entry[1]:
                return False
        return True

    # ----------------------------------------------------------- suppositions

    def open_supposition(self, n: int, v: Mark, kind: Optional[str] = None) -> Frame:
        if self.marked(n) is not None:
            raise StateError(f"node {n} is already marked")
        kind = kind or ("OA" if v == 1 else "OR")
        cp = self.checkpoint()
        frame = Frame(
            node=n,
            assumed=v,
            opened_at=self._step + 1,
            free_vars=frozenset(free_variables(self.tree.node_formula(n))),
            kind=kind,
            checkpoint=cp,
        )
        self.scopes.append(frame)
        self.set_mark(n, v, kind if kind in ("OA", "OR", "RR") else ("OA" if v == 1 else "OR"))
        return frame

    def discharge(self, frame: Frame, outcome: Union[str, tuple[int, Mark]]) -> str:
        """Close the top frame: roll back its absorbed marks and assert the one
        conclusion the discharge rule licenses. Returns the rule applied.

        outcome is "contradiction" (a double mark arose in scope),
        "exhausted" (every budget-capped alternative inside the scope failed),
        or a pair (sibling node, mark) naming the conditional/disjunction goal
        reached.
        """
        if not self.scopes or self.scopes[-1] is not frame:
            raise StateError("only the innermost supposition can be discharged")
        sup_step = self.step_of.get(frame.node)
        if outcome in ("contradiction", "exhausted"):
            if outcome == "contradiction":
                if self.dm is None:
                    raise StateError("no double mark was derived inside the scope")
                cite = (sup_step, self.trace[-1].step)
            else:
                cite = (sup_step,)
            self.rollback(frame.checkpoint)
            if frame.kind == "RR":
                self._record(frame.node, None, "RR-DM", (), cite)
                return "RR-DM"
            rule = "OA-DM" if frame.kind == "OA" else "OR-DM"
            self.set_mark(frame.node, 1 - frame.assumed, rule, ())
            mark_step = self.step_of.get(frame.node)
            for rec in reversed(self.trace):
                if rec.step == mark_step:
                    rec.premises = cite
                    break
            return rule
        target, want = outcome
        if self.marked(target) != want:
            raise StateError("the stated goal was not derived inside the scope")
        parent = self.tree.nodes[frame.node].parent
        tparent = self.tree.nodes[target].parent
        if parent is None or parent != tparent:
            raise StateError("supposition and goal are not children of one connective")
        pnode = self.tree.nodes[parent]
        left, right = pnode.children[0], pnode.children[1]
        if pnode.kind == "imp" and frame.kind == "OA" and frame.node == left and target == right and want == 1:
            rule = "OAi-Ad→"
        elif pnode.kind == "imp" and frame.kind == "OR" and frame.node == right and target == left and want == 0:
            rule = "ORd-Ri→"
        elif pnode.kind == "or" and frame.kind == "OR" and frame.node == left and target == right and want == 1:
            rule = "ORi-Ad∨"
        elif pnode.kind == "or" and frame.kind == "OR" and frame.node == right and target == left and want == 1:
            rule = "ORd-Ai∨"
        else:
            raise StateError("no discharge rule matches this supposition/goal configuration")
        goal_step = self.step_of[target]
        self.rollback(frame.checkpoint)
        self.set_mark(parent, 1, rule, ())
        mark_step = self.step_of.get(parent)
        for rec in reversed(self.trace):
            if rec.step == mark_step:
                rec.premises = (sup_step, goal_step)
                break
        return rule

    def commit_frames(self) -> None:
        """Keep all provisional marks as final (a consistent completion stands)."""
        self.scopes.clear()

    # --------------------------------------------------- forced consequences

    def forced_for_anchor(self, n: int) -> list[tuple[int, Mark, str, tuple[int, ...]]]:
        """One-rule conclusions available from node n's current configuration,
        for currently existing, unmarked, ground nodes."""
        tree = self.tree
        node = tree.nodes[n]
        out: list[tuple[int, Mark, str, tuple[int, ...]]] = []

        def emit(t: int, v: Mark, rule: str, prem: tuple[int, ...]) -> None:
            # a conclusion against an existing opposite mark must surface as a
            # double mark, so only same-value repeats are dropped
            if self.marked(t) != v and tree.is_ground_node(t):
                out.append((t, v, rule, prem))

        if node.is_binary or node.kind == "not":
            pos_map = dict(_KIND_TO_POS[node.kind])

            def at(pos: str) -> int:
                return n if pos == "k" else node.children[pos_map[pos]]

            for spec in rules_for(node.kind):
                if not spec.conclusions:
                    continue
                if all(self.marked(at(pos)) == val for pos, val in spec.premises):
                    prem = tuple(at(pos) for pos, _ in spec.premises)
                    for pos, val in spec.conclusions:
                        emit(at(pos), val, spec.name, prem)
        elif node.is_quantifier:
            mark = self.marked(n)
            kids = tree.instance_children(n)
            if mark is not None:
                down = {("forall", 1): "A∀", ("exists", 0): "R∃"}.get((node.kind, mark))
                if down:
                    for c in kids:
                        emit(c, mark, down, (n,))
                wit = {("forall", 0): "R∀", ("exists", 1): "A∃"}.get((node.kind, mark))
                if wit:
                    w = self.witness_child(n)
                    if w is not None:
                        emit(w, mark, wit, (n,))
            else:
                for c in kids:
                    cv = self.marked(c)
                    if cv is None:
                        continue
                    if node.kind == "exists" and cv == 1:
                        emit(n, 1, "Aa∃", (c,))
                        break
                    if node.kind == "forall" and cv == 0:
                        emit(n, 0, "Ra∀", (c,))
                        break
                    term = tree.nodes[c].fill_term
                    if isinstance(term, Var) and self.is_independent(term.name, c):
                        if node.kind == "forall" and cv == 1:
                            emit(n, 1, "Aa∀", (c,))
                            break
                        if node.kind == "exists" and cv == 0:
                            emit(n, 0, "Ra∃", (c,))
                            break
        mark = self.marked(n)
        if mark is not None:
            k = self.key(n)
            rule = "IA" if mark == 1 else "IR"
            for other in self.formula_index.get(k, ()):
                if other != n:
                    emit(other, mark, rule, (n,))
        return out

    # ------------------------------------------------------------ traversal

    def relevant(self, order: str = "pre") -> list[int]:
        tree = self.tree
        out: list[int] = []

        def walk(nid: int) -> None:
            node = tree.nodes[nid]
            kids = node.children
            if node.is_quantifier and len(kids) > 1:
                kids = kids[1:]
            if order == "pre":
                out.append(nid)
            for c in kids:
                walk(c)
            if order != "pre":
                out.append(nid)

        walk(tree.root)
        return out

    def unmarked_relevant_ground(self) -> list[int]:
        return [n for n in self.relevant() if self.marked(n) is None and self.tree.is_ground_node(n)]

    def instance_key(self, qnid: int, term: Term) -> Formula:
        """The formula key an instance branch of qnid filled with term would carry."""
        from .tree import _subst_slot

        q = self.tree.nodes[qnid]
        template = self.tree.node_formula(q.children[0])
        return alpha_normalize(_subst_slot(template, q.qid, term))


def init_marking(t: ForcingTree) -> MarkingState:
    """Empty marking over t; the registry starts with the source's constants."""
    return MarkingState(t)


def set_mark(s: MarkingState, n: int, v: Mark, rule: str, premises: tuple[int, ...] = ()) -> MarkingState:
    s.set_mark(n, v, rule, premises)
    return s


def forced_consequences(s: MarkingState, n: int) -> list[tuple[int, Mark, Justification]]:
    return [(t, v, Justification(rule, prem)) for t, v, rule, prem in s.forced_for_anchor(n)]


def open_supposition(s: MarkingState, n: int, v: Mark) -> Frame:
    return s.open_supposition(n, v)


def discharge(s: MarkingState, scope: Frame, outcome: Union[str, tuple[int, Mark]]) -> str:
    return s.discharge(scope, outcome)


def is_independent(s: MarkingState, var: str, n: int) -> bool:
    return s.is_independent(var, n)


# ------------------------------------------------------------------ saturation


def _budget_of(cfg) -> Optional[int]:
    return getattr(cfg, "max_individuals", None) if cfg is not None else None


def capped_obligations(s: MarkingState, budget: Optional[int]) -> list[int]:
    """Quantifiers whose fresh-witness rule is suppressed by the budget."""
    if budget is None or len(s.domain_registry) < budget:
        return []
    out = []
    for nid in s.relevant():
        node = s.tree.nodes[nid]
        if not node.is_quantifier:
            continue
        mark = s.marked(nid)
        if (node.kind, mark) not in (("forall", 0), ("exists", 1)):
            continue
        if s.witness_child(nid) is not None:
            continue
        # an instance already carrying the required value settles the obligation
        if any(s.marked(c) == mark for c in s.tree.instance_children(nid)):
            continue
        out.append(nid)
    return out


def _marked_quantifiers(s: MarkingState, states: tuple[tuple[str, Mark], ...]) -> list[int]:
    out = []
    for nid in s.relevant():
        node = s.tree.nodes[nid]
        if node.is_quantifier and (node.kind, s.marked(nid)) in states:
            out.append(nid)
    return out


def _expand_obligations(s: MarkingState, budget: Optional[int]) -> bool:
    """Witness obligations first (they create individuals), then instantiation
    of accepted universals and rejected existentials over the registry. A
    generic variable enters only when nothing else will ever populate the
    registry, since models are nonempty."""
    changed = False
    for nid in _marked_quantifiers(s, (("forall", 0), ("exists", 1))):
        node = s.tree.nodes[nid]
        if s.witness_child(nid) is not None:
            continue
        if budget is not None and len(s.domain_registry) >= budget:
            continue
        rule = "IR∀" if node.kind == "forall" else "IA∃"
        mark_rule = "R∀" if node.kind == "forall" else "A∃"
        child = s.instantiate(nid, Const(s.fresh_witness()), rule)
        s.set_mark(child, s.marked(nid), mark_rule, (nid,))
        changed = True
        if s.dm is not None:
            return changed
    universal = _marked_quantifiers(s, (("forall", 1), ("exists", 0)))
    if universal and not s.domain_registry:
        s.introduce_generic()
        changed = True
    for nid in universal:
        node = s.tree.nodes[nid]
        mark = s.marked(nid)
        have = set(s.tree.instance_terms(nid))
        rule = "IA∀" if node.kind == "forall" else "IR∃"
        mark_rule = "A∀" if node.kind == "forall" else "R∃"
        for term in list(s.domain_registry):
            if term in have:
                continue
            child = s.instantiate(nid, term, rule)
            s.set_mark(child, mark, mark_rule, (nid,))
            changed = True
            if s.dm is not None:
                return changed
    return changed


def _remote_instances(s: MarkingState) -> bool:
    """Materialize a permitted instance of an unmarked quantifier when a node
    elsewhere already carries that instance's formula with a mark that lets the
    quantifier itself be marked."""
    changed = False
    for nid in s.relevant():
        if s.dm is not None:
            return changed
        node = s.tree.nodes[nid]
        if not node.is_quantifier or s.marked(nid) is not None or not s.tree.is_ground_node(nid):
            continue
        have = {t for t in s.tree.instance_terms(nid)}
        for term in list(s.domain_registry):
            if term in have:
                continue
            hit = s.consensus.get(s.instance_key(nid, term))
            if hit is None:
                continue
            val, src = hit
            up = None
            if node.kind == "exists" and val == 1:
                up = "Aa∃"
            elif node.kind == "forall" and val == 0:
                up = "Ra∀"
            elif isinstance(term, Var):
                if node.kind == "forall" and val == 1:
                    up = "Aa∀"
                elif node.kind == "exists" and val == 0:
                    up = "Ra∃"
            if up is None:
                continue
            rule = "I∀" if node.kind == "forall" else "I∃"
            child = s.instantiate(nid, term, rule)
            s.set_mark(child, val, "IA" if val == 1 else "IR", (src,))
            if s.dm is None and up in ("Aa∀", "Ra∃") and not s.is_independent(term.name, child):
                changed = True
                break
            if s.dm is None:
                s.set_mark(nid, val, up, (child,))
            changed = True
            break
    return changed


def saturate(s: MarkingState, cfg=None, order: str = "pre") -> Union[Quiescent, DoubleMark]:
    """Apply forced rules to fixpoint: rule sweeps in the given traversal order,
    then instantiation obligations, then remote instances; stop at the first
    double mark. Fresh witnesses respect cfg.max_individuals when set."""
    if s.dm is not None:
        return s.dm
    budget = _budget_of(cfg)
    while True:
        changed = False
        while True:
            swept = False
            for nid in s.relevant(order):
                for t, v, rule, prem in s.forced_for_anchor(nid):
                    s.set_mark(t, v, rule, prem)
                    swept = True
                    if s.dm is not None:
                        return s.dm
            if not swept:
                break
            changed = True
        if _expand_obligations(s, budget):
            changed = True
        if s.dm is not None:
            return s.dm
        if _remote_instances(s):
            changed = True
        if s.dm is not None:
            return s.dm
        if not changed:
            return Quiescent()
