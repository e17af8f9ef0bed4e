"""Seeded random formula generation for decider/oracle cross-checks."""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .formulas import (
    And,
    Atom,
    Const,
    Exists,
    Forall,
    Formula,
    Iff,
    Imp,
    Not,
    Or,
    Var,
)

_BINARY_OPS = (And, Or, Imp, Iff)
_VAR_POOL = ("x", "y", "z", "u", "s", "t")


def random_monadic(
    rng: random.Random,
    preds: Sequence[str] = ("P", "Q"),
    max_complexity: int = 6,
    consts: Sequence[str] = ("c",),
) -> Formula:
    """A closed formula over monadic predicates with complexity at most
    max_complexity. Atoms use an enclosing bound variable when one exists,
    falling back to a constant."""

    def go(budget: int, bound: tuple[str, ...]) -> Formula:
        choices = ["atom"]
        if budget > 0:
            choices += ["not", "binary", "binary", "quant", "quant", "quant"]
        pick = rng.choice(choices)
        if pick == "atom":
            pred = rng.choice(list(preds))
            if bound and (not consts or rng.random() < 0.85):
                return Atom(pred, (Var(rng.choice(bound)),))
            return Atom(pred, (Const(rng.choice(list(consts))),))
        if pick == "not":
            return Not(go(budget - 1, bound))
        if pick == "binary":
            op = rng.choice(_BINARY_OPS)
            left = go(rng.randint(0, budget - 1), bound)
            right = go(rng.randint(0, budget - 1), bound)
            return op(left, right)
        fresh = next(v for v in _VAR_POOL + tuple(f"x{k}" for k in range(1, 30)) if v not in bound)
        body = go(budget - 1, bound + (fresh,))
        return (Forall if rng.random() < 0.5 else Exists)(fresh, body)

    return go(max_complexity, ())


def random_ground(
    rng: random.Random,
    max_complexity: int = 6,
    monadic: Sequence[str] = ("P", "Q"),
    dyadic: Sequence[str] = ("R",),
    consts: Sequence[str] = ("a", "b"),
) -> Formula:
    """A quantifier-free formula whose atoms are ground."""

    def atom() -> Formula:
        if dyadic and rng.random() < 0.4:
            pred = rng.choice(list(dyadic))
            return Atom(pred, (Const(rng.choice(list(consts))), Const(rng.choice(list(consts)))))
        pred = rng.choice(list(monadic))
        return Atom(pred, (Const(rng.choice(list(consts))),))

    def go(budget: int) -> Formula:
        if budget == 0 or rng.random() < 0.2:
            return atom()
        if rng.random() < 0.25:
            return Not(go(budget - 1))
        op = rng.choice(_BINARY_OPS)
        return op(go(rng.randint(0, budget - 1)), go(rng.randint(0, budget - 1)))

    return go(max_complexity)
