"""JSON forms of teams, families, models, relations and reports.

* valuation: ``{"p": 0, "q": 1}`` covering the signature;
* team: an array of valuations, or a bitstring over canonical valuation order
  (character ``i`` is ``"1"`` iff valuation ``i`` is a member);
* family: ``{"signature": [...], "teams": [team, ...]}`` or ``{"bits": "..."}``;
* model: ``{"signature", "logic", "states": [{"id", "label"}], "relation"}``;
* relation: ``{"signature", "logic", "pairs": [[f, g], ...]}`` with formula
  text, or ``"class_pairs": [[i, j], ...]`` against the published class order.
"""
from __future__ import annotations

import json
from typing import Any

from .families import ClassIndex, enumerate_classes
from .relmodel import RelationalModel
from .semantics import DomainError, Logic, members, models_of, valuation_dict, valuation_index
from .syntax import Signature, parse, to_text
from .systemc import EntailmentTable


class InputError(ValueError):
    pass


def dumps(obj: Any) -> str:
    """Canonical JSON text (sorted keys, fixed separators)."""
    return json.dumps(obj, sort_keys=True, indent=2)


def _bitstring(bits: int, length: int) -> str:
    return "".join("1" if (bits >> i) & 1 else "0" for i in range(length))


def _from_bitstring(text: str, length: int, what: str) -> int:
    if len(text) != length or set(text) - {"0", "1"}:
        raise InputError(f"{what} bitstring must be {length} characters of 0/1")
    return sum(1 << i for i, c in enumerate(text) if c == "1")


def signature_from_json(data) -> Signature:
    try:
        return Signature(tuple(data))
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad signature: {exc}") from None


# --- valuations and teams --------------------------------------------------


def valuation_from_json(sig: Signature, data) -> int:
    if not isinstance(data, dict):
        raise InputError("a valuation is a JSON object mapping variables to 0/1")
    try:
        return valuation_index(sig, data)
    except DomainError as exc:
        raise InputError(str(exc)) from None


def valuation_to_json(sig: Signature, v: int) -> dict:
    return valuation_dict(sig, v)


def team_from_json(sig: Signature, data) -> int:
    if isinstance(data, str):
        return _from_bitstring(data, sig.num_valuations, "team")
    if not isinstance(data, list):
        raise InputError("a team is an array of valuations or a bitstring")
    team = 0
    for item in data:
        team |= 1 << valuation_from_json(sig, item)
    return team


def team_to_json(sig: Signature, team: int) -> list[dict]:
    return [valuation_dict(sig, v) for v in members(team)]


# --- families --------------------------------------------------------------


def family_from_json(data, sig: Signature | None = None, logic: Logic = Logic.PDL) -> tuple[Signature, int]:
    if not isinstance(data, dict):
        raise InputError("a family is a JSON object")
    if "signature" in data:
        sig = signature_from_json(data["signature"])
    if sig is None:
        raise InputError("family needs a signature")
    if "bits" in data:
        length = sig.num_valuations if logic is Logic.CPL else 1 << sig.num_valuations
        return sig, _from_bitstring(data["bits"], length, "family")
    if "teams" in data:
        bits = 0
        for t in data["teams"]:
            if logic is Logic.CPL:
                bits |= 1 << valuation_from_json(sig, t)
            else:
                bits |= 1 << team_from_json(sig, t)
        return sig, bits
    raise InputError('family needs "teams" or "bits"')


def family_to_json(sig: Signature, bits: int, logic: Logic = Logic.PDL) -> dict:
    if logic is Logic.CPL:
        return {"signature": list(sig.vars), "teams": [valuation_dict(sig, v) for v in members(bits)],
                "bits": _bitstring(bits, sig.num_valuations)}
    return {
        "signature": list(sig.vars),
        "teams": [team_to_json(sig, t) for t in members(bits)],
        "bits": _bitstring(bits, 1 << sig.num_valuations),
    }


# --- models ----------------------------------------------------------------


def model_from_json(data) -> RelationalModel:
    try:
        sig = signature_from_json(data["signature"])
        logic = Logic.coerce(data.get("logic", "PDL"))
        ids, labels = [], []
        for st in data["states"]:
            ids.append(str(st["id"]))
            lab = 0
            for item in st["label"]:
                if logic is Logic.CPL:
                    lab |= 1 << valuation_from_json(sig, item)
                else:
                    lab |= 1 << team_from_json(sig, item)
            labels.append(lab)
        relation = frozenset((str(a), str(b)) for a, b in data.get("relation", []))
        return RelationalModel(sig, logic, tuple(ids), tuple(labels), relation)
    except InputError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad model: {exc}") from None


def model_to_json(m: RelationalModel) -> dict:
    states = []
    for s, lab in zip(m.states, m.labels):
        if m.logic is Logic.CPL:
            label = [valuation_dict(m.sig, v) for v in members(lab)]
        else:
            label = [team_to_json(m.sig, t) for t in members(lab)]
        states.append({"id": s, "label": label})
    return {
        "signature": list(m.sig.vars),
        "logic": m.logic.value,
        "states": states,
        "relation": sorted([a, b] for a, b in m.relation),
    }


# --- relations -------------------------------------------------------------


def relation_from_json(data) -> tuple[ClassIndex, list[tuple[int, int]]]:
    """Class index and class pairs of a relation document."""
    try:
        sig = signature_from_json(data["signature"])
        logic = Logic.coerce(data.get("logic", "PDL"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad relation: {exc}") from None
    classes = enumerate_classes(sig, logic)
    pairs = []
    for a, b in data.get("class_pairs", []):
        if not (isinstance(a, int) and isinstance(b, int) and 0 <= a < len(classes) and 0 <= b < len(classes)):
            raise InputError(f"class pair [{a}, {b}] out of range 0..{len(classes) - 1}")
        pairs.append((a, b))
    for lhs, rhs in data.get("pairs", []):
        try:
            fa = models_of(parse(lhs, sig), sig, logic)
            fb = models_of(parse(rhs, sig), sig, logic)
        except ValueError as exc:
            raise InputError(f"bad formula pair [{lhs!r}, {rhs!r}]: {exc}") from None
        pairs.append((classes.class_of(fa), classes.class_of(fb)))
    return classes, pairs


def table_to_json(t: EntailmentTable, names: dict[int, str] | None = None) -> dict:
    cls = t.classes
    out = {
        "signature": list(cls.sig.vars),
        "logic": cls.logic.value,
        "class_pairs": [list(p) for p in t.pairs],
    }
    if names:
        out["pairs"] = [[names[a], names[b]] for a, b in t.pairs]
    return out


def class_names(classes: ClassIndex) -> dict[int, str]:
    from .families import synthesize

    return {i: to_text(synthesize(f, classes.sig, classes.logic)) for i, f in enumerate(classes.families)}
