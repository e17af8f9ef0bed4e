"""Validity by semantic forcing: tableau-style 0/1 marking of syntax trees for
monadic and two-variable dyadic predicate logic, with countermodel extraction
and an exhaustive model-search oracle."""

from .decide import (
    EngineConfig,
    Invalid,
    NoCountermodelUpTo,
    Valid,
    decide,
    direct_force,
    domain_bound,
)
from .errors import (
    FragmentError,
    FreeVariableError,
    ParseError,
    PremiseError,
    ResourceLimitError,
    SemforceError,
    StateError,
)
from .formulas import (
    And,
    Atom,
    Const,
    Dyadic2Var,
    Exists,
    Forall,
    Formula,
    Iff,
    Imp,
    Monadic,
    Not,
    Or,
    Outside,
    Var,
    alpha_normalize,
    classify_fragment,
    complexity,
    format_formula,
    parse_formula,
)
from .marking import (
    DoubleMark,
    Justification,
    MarkingState,
    Quiescent,
    RuleSpec,
    TraceStep,
    discharge,
    forced_consequences,
    init_marking,
    is_independent,
    open_supposition,
    saturate,
    set_mark,
    verify_derived_rule,
)
from .models import (
    Interpretation,
    Refuted,
    Signature,
    ValidUpTo,
    enumerate_interpretations,
    evaluate,
    extract_model,
    marks_from_model,
    oracle_validity,
    signature_of,
)
from .render import render_ascii, render_dot, render_trace
from .tree import ForcingTree, build_initial_tree, instantiate_branch, node_formula, profundity

__version__ = "0.1.0"

__all__ = [
    "And",
    "Atom",
    "Const",
    "Dyadic2Var",
    "DoubleMark",
    "EngineConfig",
    "Exists",
    "Forall",
    "ForcingTree",
    "Formula",
    "FragmentError",
    "FreeVariableError",
    "Iff",
    "Imp",
    "Interpretation",
    "Invalid",
    "Justification",
    "MarkingState",
    "Monadic",
    "NoCountermodelUpTo",
    "Not",
    "Or",
    "Outside",
    "ParseError",
    "PremiseError",
    "Quiescent",
    "Refuted",
    "ResourceLimitError",
    "RuleSpec",
    "SemforceError",
    "Signature",
    "StateError",
    "TraceStep",
    "Valid",
    "ValidUpTo",
    "Var",
    "alpha_normalize",
    "build_initial_tree",
    "classify_fragment",
    "complexity",
    "decide",
    "direct_force",
    "discharge",
    "domain_bound",
    "enumerate_interpretations",
    "evaluate",
    "extract_model",
    "forced_consequences",
    "format_formula",
    "init_marking",
    "instantiate_branch",
    "is_independent",
    "marks_from_model",
    "node_formula",
    "open_supposition",
    "oracle_validity",
    "parse_formula",
    "profundity",
    "render_ascii",
    "render_dot",
    "render_trace",
    "saturate",
    "set_mark",
    "signature_of",
    "verify_derived_rule",
]
