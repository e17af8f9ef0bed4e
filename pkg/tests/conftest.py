"""Shared fixtures: the worked formulas, reference countermodels, an
isomorphism canonicalizer, and a broad random formula generator."""

from __future__ import annotations

import itertools
import random

import pytest

from semforce import And, Atom, Const, Exists, Forall, Iff, Imp, Interpretation, Not, Or, Var

ILLUSTRATIONS = {
    1: "exists x. (P(x) & forall y. R(x,y)) -> forall x. exists y. R(x,y)",
    2: "forall x. (exists y. P(y) -> ~exists y. ~R(y,x)) -> ~exists x. (P(x) & ~forall y. R(x,y))",
    3: "forall x. ((P(x) & Q(b)) & exists y. R(x,y)) -> forall x. ~(P(x) -> ~Q(b))",
    4: "(forall x. (H(x) -> B(x)) & exists x. (~B(x) & A(x))) -> forall x. (H(x) -> ~A(x))",
    5: "exists y. forall x. P(y,x) -> ~exists x. forall y. ~P(y,x)",
    6: "forall x. exists y. P(x,y) -> exists y. forall x. P(x,y)",
}

EXPECTED_VERDICT = {1: "Invalid", 2: "Valid", 3: "Valid", 4: "Invalid", 5: "Valid", 6: "Invalid"}

REFERENCE_MODELS = {
    1: Interpretation(
        domain=("a", "b"),
        monadic={"P": frozenset({"b"})},
        dyadic={"R": frozenset({("b", "a"), ("b", "b")})},
    ),
    4: Interpretation(
        domain=("d", "e"),
        monadic={"H": frozenset({"d"}), "B": frozenset({"d"}), "A": frozenset({"d", "e"})},
        dyadic={},
    ),
    6: Interpretation(
        domain=("a", "b"),
        monadic={},
        dyadic={"P": frozenset({("a", "b"), ("b", "a")})},
    ),
}


def canonical_structure(i: Interpretation):
    """Name-independent form of the predicate structure: the least relabeling
    over all domain permutations. Two interpretations are isomorphic (ignoring
    constant denotations) exactly when these agree."""
    best = None
    for perm in itertools.permutations(range(len(i.domain))):
        rename = {e: perm[k] for k, e in enumerate(i.domain)}
        mono = tuple(
            (p, tuple(sorted(rename[e] for e in ext))) for p, ext in sorted(i.monadic.items())
        )
        dy = tuple(
            (p, tuple(sorted((rename[a], rename[b]) for a, b in ext)))
            for p, ext in sorted(i.dyadic.items())
        )
        cand = (len(i.domain), mono, dy)
        if best is None or cand < best:
            best = cand
    return best


def random_formula(rng: random.Random, budget: int, bound: tuple[str, ...] = ()):
    """Closed random formula mixing monadic and dyadic atoms, any variable
    count. Used for parser round-trips and structural properties."""
    pool = ("x", "y", "z", "u", "t", "s")
    choices = ["atom"]
    if budget > 0:
        choices += ["not", "and", "or", "imp", "iff", "forall", "exists", "forall", "exists"]
    pick = rng.choice(choices)
    if pick == "atom":
        def term():
            if bound and rng.random() < 0.8:
                return Var(rng.choice(bound))
            return Const(rng.choice(("a", "b", "c")))
        if rng.random() < 0.4:
            return Atom(rng.choice(("R", "S")), (term(), term()))
        return Atom(rng.choice(("P", "Q")), (term(),))
    if pick == "not":
        return Not(random_formula(rng, budget - 1, bound))
    if pick in ("and", "or", "imp", "iff"):
        op = {"and": And, "or": Or, "imp": Imp, "iff": Iff}[pick]
        return op(
            random_formula(rng, rng.randint(0, budget - 1), bound),
            random_formula(rng, rng.randint(0, budget - 1), bound),
        )
    fresh = next(v for v in pool + tuple(f"x{k}" for k in range(1, 40)) if v not in bound)
    body = random_formula(rng, budget - 1, bound + (fresh,))
    return (Forall if pick == "forall" else Exists)(fresh, body)


@pytest.fixture(scope="session")
def rng():
    return random.Random(20240817)
