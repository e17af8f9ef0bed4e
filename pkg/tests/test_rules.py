"""The rule catalog and the exhaustive soundness checker."""

import pytest

from semforce import RuleSpec, verify_derived_rule
from semforce.rules import CATALOG, NON_PROPOSITIONAL, rules_for


def test_catalog_size_per_connective():
    by_conn = {}
    for spec in CATALOG.values():
        by_conn.setdefault(spec.connective, []).append(spec)
    assert len(by_conn["and"]) == 6
    assert len(by_conn["or"]) == 5
    assert len(by_conn["imp"]) == 6
    assert len(by_conn["iff"]) == 13
    assert len(by_conn["not"]) == 4
    assert len(CATALOG) == 34


def test_disjunction_catalog_has_no_left_recovery():
    # accepted disjunction with rejected right child does not force the left:
    # the search compensates, the table stays as given
    for spec in rules_for("or"):
        premises = dict(spec.premises)
        assert not (premises.get("k") == 1 and premises.get("d") == 0)


def test_all_catalog_rules_verify():
    for name in CATALOG:
        assert verify_derived_rule(name), name


def test_primitive_flags():
    for name in ("A∧", "AiAd∧", "R∨", "RiRd∨", "R→", "AiRd→", "A↔", "A∼", "Ra∼"):
        assert CATALOG[name].primitive, name
    for name in ("Ri∧", "Ai∨", "Ri→", "AiA↔", "Aa∼"):
        assert not CATALOG[name].primitive, name


CORRUPTED = [
    RuleSpec("bad-acceptance-and", "and", (("k", 1),), (("i", 1), ("d", 0))),
    RuleSpec("bad-left-rejection-and", "and", (("i", 0),), (("k", 1),)),
    RuleSpec("bad-rejection-or", "or", (("k", 0),), (("i", 1), ("d", 0))),
    RuleSpec("bad-modus-ponens", "imp", (("i", 1), ("k", 1)), (("d", 0),)),
    RuleSpec("bad-acceptance-not", "not", (("k", 1),), (("a", 1),)),
]


@pytest.mark.parametrize("spec", CORRUPTED, ids=lambda s: s.name)
def test_corrupted_rules_fail(spec):
    assert verify_derived_rule(spec) is False


def test_quantifier_and_structural_rules_raise():
    for name in ("A∀", "Aa∀", "Ra∃", "IA", "IR∀", "OA-DM", "RR", "DM", "m"):
        assert name in NON_PROPOSITIONAL
        with pytest.raises(ValueError):
            verify_derived_rule(name)


def test_unknown_rule_raises():
    with pytest.raises(ValueError):
        verify_derived_rule("no-such-rule")


def test_sound_but_absent_rule_still_verifies():
    # filling the disjunction gap would be sound; the checker measures
    # soundness, not catalog membership
    spec = RuleSpec("left-recovery-or", "or", (("k", 1), ("d", 0)), (("i", 1),))
    assert verify_derived_rule(spec) is True


def test_biconditional_family():
    # the four child configurations determine the biconditional both ways
    assert verify_derived_rule("AiAd↔")
    assert verify_derived_rule("RiRd↔")
    assert verify_derived_rule("AiRd↔")
    assert verify_derived_rule("RiAd↔")
    assert verify_derived_rule("A↔")
