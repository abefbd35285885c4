"""JSON Schemas for the documents the command line emits with ``--json``."""
from __future__ import annotations

_BITS = {"type": "string", "pattern": "^[01]+$"}
_VALUATION = {"type": "object", "additionalProperties": {"enum": [0, 1]}}
_TEAM = {"type": "array", "items": _VALUATION}
_SIGNATURE = {"type": "array", "items": {"type": "string"}, "minItems": 1}
_LOGIC = {"enum": ["CPL", "TPL", "PDL"]}
_PAIR = {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2}
_FAIL = {
    "type": "object",
    "required": ["status", "error"],
    "properties": {"status": {"const": "fail"}, "error": {"type": "string"}},
}

FAMILY = {
    "type": "object",
    "required": ["signature", "teams", "bits"],
    "properties": {
        "signature": _SIGNATURE,
        "teams": {"type": "array", "items": {"anyOf": [_TEAM, _VALUATION]}},
        "bits": _BITS,
        "count": {"type": "integer"},
        "properties": {"type": "object", "additionalProperties": {"type": "boolean"}},
    },
}

MODEL = {
    "type": "object",
    "required": ["signature", "logic", "states", "relation"],
    "properties": {
        "signature": _SIGNATURE,
        "logic": _LOGIC,
        "states": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "label"],
                "properties": {"id": {"type": "string"}, "label": {"type": "array"}},
            },
        },
        "relation": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
        },
    },
}

RELATION = {
    "type": "object",
    "required": ["signature", "logic", "class_pairs"],
    "properties": {
        "signature": _SIGNATURE,
        "logic": _LOGIC,
        "class_pairs": {"type": "array", "items": _PAIR},
        "pairs": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
    },
}

_RULE = {
    "type": "object",
    "required": ["status", "violations", "witness"],
    "properties": {
        "status": {"enum": ["pass", "fail", "structural"]},
        "violations": {"type": "integer", "minimum": 0},
        "witness": {"anyOf": [{"type": "null"}, {"type": "array", "items": {"type": "integer"}}]},
    },
}

AUDIT = {
    "type": "object",
    "required": ["status", "rules"],
    "properties": {
        "status": {"enum": ["pass", "fail"]},
        "rules": {
            "type": "object",
            "required": ["Ref", "LLE", "RW", "Cut", "CM"],
            "additionalProperties": _RULE,
        },
    },
}

VERIFICATION = {
    "type": "object",
    "required": ["theorem", "scope", "status", "counterexample", "counts", "seed", "ms"],
    "properties": {
        "theorem": {"enum": ["pdl-rep", "tpl-rep", "definability"]},
        "scope": {"type": "object"},
        "status": {"enum": ["pass", "fail"]},
        "counterexample": {"anyOf": [{"type": "null"}, {"type": "object"}]},
        "counts": {"type": "object", "additionalProperties": {"type": "integer"}},
        "seed": {"type": ["integer", "null"]},
        "ms": {"type": ["number", "null"]},
    },
}

DEFINABILITY = {
    "anyOf": [
        {
            "type": "object",
            "required": ["theorem", "status", "pairs_checked", "mismatches", "theta", "theta_failures"],
            "properties": {
                "theorem": {"const": "definability"},
                "status": {"enum": ["pass", "fail"]},
                "pairs_checked": {"type": "integer"},
                "mismatches": {"type": "array", "items": _PAIR},
                "theta": {"type": "object", "additionalProperties": {"type": "string"}},
                "theta_failures": {"type": "array", "items": {"type": "integer"}},
            },
        },
        _FAIL,
    ]
}

EVAL = {
    "type": "object",
    "required": ["formula", "logic", "value"],
    "properties": {"formula": {"type": "string"}, "logic": _LOGIC, "value": {"type": "boolean"}},
}

FAMILIES = {
    "type": "object",
    "required": ["signature", "logic", "count", "classes"],
    "properties": {
        "signature": _SIGNATURE,
        "logic": _LOGIC,
        "count": {"type": "integer"},
        "classes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["index", "bits", "size", "formula"],
                "properties": {
                    "index": {"type": "integer"},
                    "bits": _BITS,
                    "size": {"type": "integer"},
                    "formula": {"type": "string"},
                },
            },
        },
    },
}

SYNTH = {
    "anyOf": [
        {
            "type": "object",
            "required": ["status", "formula"],
            "properties": {"status": {"const": "pass"}, "formula": {"type": "string"}},
        },
        _FAIL,
    ]
}

CLASSIFY = {
    "type": "object",
    "required": ["flags", "witnesses", "star_skipped"],
    "properties": {
        "flags": {
            "type": "object",
            "required": [
                "cumulative",
                "strong_cumulative",
                "asymmetric_model",
                "preferential",
                "pref_triangle",
                "star_property",
            ],
            "additionalProperties": {"type": ["boolean", "null"]},
        },
        "witnesses": {"type": "object"},
        "star_skipped": {"type": "integer"},
    },
}

ENTAIL = {
    "type": "object",
    "required": ["value", "min_models"],
    "properties": {"value": {"type": "boolean"}, "min_models": FAMILY},
}

# schema per subcommand (verify is keyed by theorem)
BY_COMMAND = {
    "eval": EVAL,
    "models": FAMILY,
    "families": FAMILIES,
    "synth": SYNTH,
    "classify-model": CLASSIFY,
    "entail": ENTAIL,
    "audit": AUDIT,
    "close": RELATION,
    "klm-build": {"anyOf": [MODEL, _FAIL]},
    "rep-pdl": VERIFICATION,
    "rep-tpl": VERIFICATION,
    "definability": DEFINABILITY,
}
