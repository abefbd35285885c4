"""Team semantics, cumulative relational models and System C at desk scale."""
from .families import ClassIndex, TeamFamily, cn, enumerate_classes, synthesize, th
from .relmodel import (
    ModelClassification,
    RelationalModel,
    classify,
    entails,
    is_smooth,
    min_models,
    minimal_states,
    states_of,
)
from .semantics import Logic, check_property, eval_classical, eval_team, models_of
from .syntax import Signature, is_pl, parse, to_text
from .systemc import (
    EntailmentTable,
    audit,
    build_klm_model,
    c_consequences,
    close,
    norm,
    verify_definability,
)

print_formula = to_text

__all__ = [
    "ClassIndex", "EntailmentTable", "Logic", "ModelClassification", "RelationalModel",
    "Signature", "TeamFamily", "audit", "build_klm_model", "c_consequences", "check_property",
    "classify", "close", "cn", "entails", "enumerate_classes", "eval_classical", "eval_team",
    "is_pl", "is_smooth", "min_models", "minimal_states", "models_of", "norm", "parse",
    "print_formula", "states_of", "synthesize", "th", "to_text", "verify_definability",
]
