"""Mark-forcing rules for the propositional connectives.

Every rule relates the mark of a connective node ("k") to the marks of its
children ("i"/"d" for binary, "a" for negation). The catalog is exactly the
primitive and derived sets of the tree calculus; note the deliberate gap at
disjunction: an accepted `|` with rejected right child does not force the left
child (no such rule exists), the search layer compensates by branching.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Union

PREMISE_POSITIONS = ("k", "i", "d", "a")

_TRUTH_TABLE = {
    "and": lambda i, d: i & d,
    "or": lambda i, d: i | d,
    "imp": lambda i, d: (1 - i) | d,
    "iff": lambda i, d: 1 if i == d else 0,
}


@dataclass(frozen=True)
class RuleSpec:
    """One forcing rule: if all premise positions carry the given marks, the
    conclusion positions get theirs. `equal_children` encodes the biconditional
    acceptance rule, whose conclusion is that both children share one mark (and
    which also holds in reverse)."""

    name: str
    connective: str
    premises: tuple[tuple[str, int], ...]
    conclusions: tuple[tuple[str, int], ...]
    primitive: bool = False
    equal_children: bool = False


_RULES = [
    # conjunction
    RuleSpec("A∧", "and", (("k", 1),), (("i", 1), ("d", 1)), primitive=True),
    RuleSpec("AiAd∧", "and", (("i", 1), ("d", 1)), (("k", 1),), primitive=True),
    RuleSpec("AiR∧", "and", (("i", 1), ("k", 0)), (("d", 0),)),
    RuleSpec("AdR∧", "and", (("d", 1), ("k", 0)), (("i", 0),)),
    RuleSpec("Ri∧", "and", (("i", 0),), (("k", 0),)),
    RuleSpec("Rd∧", "and", (("d", 0),), (("k", 0),)),
    # disjunction (no rule concludes i=1 from k=1, d=0)
    RuleSpec("R∨", "or", (("k", 0),), (("i", 0), ("d", 0)), primitive=True),
    RuleSpec("RiRd∨", "or", (("i", 0), ("d", 0)), (("k", 0),), primitive=True),
    RuleSpec("RiA∨", "or", (("i", 0), ("k", 1)), (("d", 1),)),
    RuleSpec("Ai∨", "or", (("i", 1),), (("k", 1),)),
    RuleSpec("Ad∨", "or", (("d", 1),), (("k", 1),)),
    # conditional
    RuleSpec("R→", "imp", (("k", 0),), (("i", 1), ("d", 0)), primitive=True),
    RuleSpec("AiRd→", "imp", (("i", 1), ("d", 0)), (("k", 0),), primitive=True),
    RuleSpec("AiA→", "imp", (("i", 1), ("k", 1)), (("d", 1),)),
    RuleSpec("RdA→", "imp", (("d", 0), ("k", 1)), (("i", 0),)),
    RuleSpec("Ri→", "imp", (("i", 0),), (("k", 1),)),
    RuleSpec("Ad→", "imp", (("d", 1),), (("k", 1),)),
    # biconditional
    RuleSpec("A↔", "iff", (("k", 1),), (), primitive=True, equal_children=True),
    RuleSpec("AiAd↔", "iff", (("i", 1), ("d", 1)), (("k", 1),)),
    RuleSpec("RiRd↔", "iff", (("i", 0), ("d", 0)), (("k", 1),)),
    RuleSpec("AiRd↔", "iff", (("i", 1), ("d", 0)), (("k", 0),)),
    RuleSpec("RiAd↔", "iff", (("i", 0), ("d", 1)), (("k", 0),)),
    RuleSpec("AiA↔", "iff", (("i", 1), ("k", 1)), (("d", 1),)),
    RuleSpec("RdA↔", "iff", (("d", 0), ("k", 1)), (("i", 0),)),
    RuleSpec("RiA↔", "iff", (("i", 0), ("k", 1)), (("d", 0),)),
    RuleSpec("AdA↔", "iff", (("d", 1), ("k", 1)), (("i", 1),)),
    RuleSpec("RiR↔", "iff", (("i", 0), ("k", 0)), (("d", 1),)),
    RuleSpec("AiR↔", "iff", (("i", 1), ("k", 0)), (("d", 0),)),
    RuleSpec("RdR↔", "iff", (("d", 0), ("k", 0)), (("i", 1),)),
    RuleSpec("AdR↔", "iff", (("d", 1), ("k", 0)), (("i", 0),)),
    # negation
    RuleSpec("A∼", "not", (("k", 1),), (("a", 0),), primitive=True),
    RuleSpec("Ra∼", "not", (("a", 0),), (("k", 1),), primitive=True),
    RuleSpec("Aa∼", "not", (("a", 1),), (("k", 0),)),
    RuleSpec("R∼", "not", (("k", 0),), (("a", 1),)),
]

CATALOG: dict[str, RuleSpec] = {r.name: r for r in _RULES}

_BY_CONNECTIVE: dict[str, tuple[RuleSpec, ...]] = {}
for _r in _RULES:
    _BY_CONNECTIVE.setdefault(_r.connective, ())
    _BY_CONNECTIVE[_r.connective] += (_r,)

# identifiers that are rules of the calculus but not propositional forcings
NON_PROPOSITIONAL = frozenset(
    {
        "A∀", "Aa∃", "Aa∀", "Ra∃", "R∀", "Ra∀", "R∃", "A∃",
        "IA∀", "IR∀", "I∀", "IA∃", "IR∃", "I∃",
        "IA", "IR",
        "OA-DM", "OR-DM", "RR-DM", "OAi-Ad→", "ORd-Ri→", "ORi-Ad∨", "ORd-Ai∨",
        "RR", "DM", "OA", "OR", "m",
    }
)


def rules_for(connective: str) -> tuple[RuleSpec, ...]:
    return _BY_CONNECTIVE.get(connective, ())


def _worlds(connective: str):
    """All total (k, children) assignments consistent with the truth table."""
    if connective == "not":
        for a in (0, 1):
            yield {"k": 1 - a, "a": a}
    else:
        tt = _TRUTH_TABLE[connective]
        for i, d in product((0, 1), repeat=2):
            yield {"k": tt(i, d), "i": i, "d": d}


def verify_derived_rule(rule: Union[str, RuleSpec]) -> bool:
    """Check a propositional rule against the classical truth tables.

    True iff in every total assignment consistent with the connective's truth
    table where the premises hold, the conclusions hold too (both directions
    for the equal-children biconditional rule). Quantifier, iteration, and
    option rule identifiers are rejected: their premise space is not finite.
    """
    if isinstance(rule, str):
        if rule in NON_PROPOSITIONAL:
            raise ValueError(f"rule {rule!r} is not propositional; cannot be verified by finite tables")
        spec = CATALOG.get(rule)
        if spec is None:
            raise ValueError(f"unknown rule identifier {rule!r}")
    else:
        spec = rule
    if spec.connective not in ("not", *_TRUTH_TABLE):
        raise ValueError(f"unknown connective {spec.connective!r}")
    for world in _worlds(spec.connective):
        premises_hold = all(world[pos] == v for pos, v in spec.premises)
        conclusion = all(world[pos] == v for pos, v in spec.conclusions)
        if spec.equal_children:
            conclusion = conclusion and world["i"] == world["d"]
            if conclusion and not premises_hold:
                return False
        if premises_hold and not conclusion:
            return False
    return True
