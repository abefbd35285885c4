"""Relational models ``<S, l, R>`` and the entailment they induce.

Labels are bitmasks over the interpretation space of the model's logic
(teams for TPL/PDL, valuations for CPL), the same encoding used for
families. Quantifiers over all formulas are discharged over the definable
classes of a :class:`~teamklm.families.ClassIndex`: every notion below
depends on a formula only through its extension.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .families import ClassIndex, enumerate_classes
from .semantics import Logic, members, models_of, num_interpretations
from .syntax import Formula, Signature


@dataclass(frozen=True)
class RelationalModel:
    sig: Signature
    logic: Logic
    states: tuple[str, ...]
    labels: tuple[int, ...]
    relation: frozenset[tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "logic", Logic.coerce(self.logic))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "relation", frozenset(tuple(e) for e in self.relation))
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate state ids")
        if len(self.labels) != len(self.states):
            raise ValueError("every state needs exactly one label")
        space = num_interpretations(self.sig, self.logic)
        for lab in self.labels:
            if lab < 0 or lab >> space:
                raise ValueError("label outside the interpretation space")
        known = set(self.states)
        for a, b in self.relation:
            if a not in known or b not in known:
                raise ValueError(f"relation edge ({a}, {b}) names an unknown state")

    @classmethod
    def build(cls, sig, logic, labels: dict[str, int], relation: Iterable[tuple[str, str]] = ()):
        return cls(sig, Logic.coerce(logic), tuple(labels), tuple(labels.values()), frozenset(relation))

    def label(self, state: str) -> int:
        return self.labels[self._pos[state]]

    @cached_property
    def _pos(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def _pred(self) -> tuple[int, ...]:
        """``_pred[j]``: bitmask of states ``i`` with ``i R j``."""
        pred = [0] * len(self.states)
        for a, b in self.relation:
            pred[self._pos[b]] |= 1 << self._pos[a]
        return tuple(pred)

    def ids(self, mask: int) -> frozenset[str]:
        return frozenset(self.states[i] for i in members(mask))

    def mask(self, ids: Iterable[str]) -> int:
        out = 0
        for s in ids:
            out |= 1 << self._pos[s]
        return out

    # index-level primitives, used by the tabulating code

    def state_mask(self, family: int) -> int:
        out = 0
        for i, lab in enumerate(self.labels):
            if lab & ~family == 0:
                out |= 1 << i
        return out

    def min_mask(self, smask: int) -> int:
        out = 0
        for i in members(smask):
            if not self._pred[i] & smask:
                out |= 1 << i
        return out

    def non_smooth_state(self, smask: int) -> int | None:
        mins = self.min_mask(smask)
        for i in members(smask & ~mins):
            if not self._pred[i] & mins:
                return i
        return None

    def union_labels(self, smask: int) -> int:
        out = 0
        for i in members(smask):
            out |= self.labels[i]
        return out

    def relabel(self, mapping: dict[str, str]) -> "RelationalModel":
        return RelationalModel(
            self.sig,
            self.logic,
            tuple(mapping[s] for s in self.states),
            self.labels,
            frozenset((mapping[a], mapping[b]) for a, b in self.relation),
        )

    # relation shape

    @property
    def is_asymmetric(self) -> bool:
        return all((b, a) not in self.relation for a, b in self.relation)

    @property
    def is_strict_partial_order(self) -> bool:
        if any(a == b for a, b in self.relation):
            return False
        succ: dict[str, set[str]] = {}
        for a, b in self.relation:
            succ.setdefault(a, set()).add(b)
        return all(
            (a, c) in self.relation for a, b in self.relation for c in succ.get(b, ())
        )


def _family(m: RelationalModel, f) -> int:
    if isinstance(f, int):
        return f
    return models_of(f, m.sig, m.logic)


def states_of(m: RelationalModel, f: "int | Formula") -> frozenset[str]:
    """States whose whole label satisfies ``f`` (a family bitmask or formula)."""
    return m.ids(m.state_mask(_family(m, f)))


def minimal_states(m: RelationalModel, subset: Iterable[str]) -> frozenset[str]:
    return m.ids(m.min_mask(m.mask(subset)))


@dataclass(frozen=True)
class Smoothness:
    smooth: bool
    witness: str | None = None


def is_smooth(m: RelationalModel, subset: Iterable[str]) -> Smoothness:
    bad = m.non_smooth_state(m.mask(subset))
    return Smoothness(True) if bad is None else Smoothness(False, m.states[bad])


def min_models(m: RelationalModel, f: "int | Formula") -> int:
    """Union of the labels of the minimal ``f``-states."""
    return m.union_labels(m.min_mask(m.state_mask(_family(m, f))))


def entails(m: RelationalModel, f: "int | Formula", g: "int | Formula") -> bool:
    return min_models(m, f) & ~_family(m, g) == 0


def tabulate_rows(m: RelationalModel, classes: ClassIndex) -> tuple[int, ...]:
    """Row ``a`` is the bitmask of classes ``b`` with ``a |~_M b``."""
    fams = classes.families
    rows = []
    for fa in fams:
        mm = min_models(m, fa)
        row = 0
        for j, fb in enumerate(fams):
            if mm & ~fb == 0:
                row |= 1 << j
        rows.append(row)
    return tuple(rows)


# --- classification --------------------------------------------------------


@dataclass(frozen=True)
class ModelClassification:
    cumulative: bool
    strong_cumulative: bool
    asymmetric_model: bool
    preferential: bool
    pref_triangle: bool
    star_property: bool | None
    witnesses: dict = field(default_factory=dict)
    star_skipped: int = 0

    def flags(self) -> dict[str, bool | None]:
        return {
            "cumulative": self.cumulative,
            "strong_cumulative": self.strong_cumulative,
            "asymmetric_model": self.asymmetric_model,
            "preferential": self.preferential,
            "pref_triangle": self.pref_triangle,
            "star_property": self.star_property,
        }


def _singleton_teams_only(label: int) -> bool:
    return all(t.bit_count() == 1 for t in members(label))


def classify(m: RelationalModel, classes: ClassIndex | None = None, star: bool = False) -> ModelClassification:
    if classes is None:
        classes = enumerate_classes(m.sig, m.logic)
    if classes.sig != m.sig or classes.logic is not m.logic:
        raise ValueError("class index does not match the model's signature and logic")
    witnesses: dict = {}

    cumulative = True
    for ci, fam in enumerate(classes.families):
        bad = m.non_smooth_state(m.state_mask(fam))
        if bad is not None:
            cumulative = False
            witnesses["cumulative"] = {"class": ci, "state": m.states[bad]}
            break

    asym = m.is_asymmetric
    if not asym:
        witnesses["asymmetric"] = sorted(
            (a, b) for a, b in m.relation if (b, a) in m.relation
        )[0]

    strong = cumulative and asym
    if strong:
        for ci, fam in enumerate(classes.families):
            mins = m.min_mask(m.state_mask(fam))
            if mins.bit_count() != 1:
                strong = False
                witnesses["strong_cumulative"] = {"class": ci, "minimal": sorted(m.ids(mins))}
                break

    singletons = all(lab.bit_count() == 1 for lab in m.labels)
    asym_model = cumulative and asym and singletons
    preferential = cumulative and singletons and m.is_strict_partial_order

    if m.logic is Logic.CPL:
        pref_triangle = preferential
    else:
        every = (1 << len(m.states)) - 1
        pref_triangle = preferential and all(
            _singleton_teams_only(m.labels[i]) for i in members(m.min_mask(every))
        )

    star_ok: bool | None = None
    skipped = 0
    if star:
        star_ok = True
        n = len(classes)
        mm = [min_models(m, f) for f in classes.families]
        for a in range(n):
            for b in range(a, n):
                j = classes.join(a, b)
                if j is None:
                    skipped += 1
                    continue
                if mm[j] & ~(mm[a] | mm[b]):
                    star_ok = False
                    witnesses["star_property"] = {"classes": [a, b], "join": j}
                    break
            if not star_ok:
                break

    return ModelClassification(
        cumulative=cumulative,
        strong_cumulative=strong,
        asymmetric_model=asym_model,
        preferential=preferential,
        pref_triangle=pref_triangle,
        star_property=star_ok,
        witnesses=witnesses,
        star_skipped=skipped,
    )
