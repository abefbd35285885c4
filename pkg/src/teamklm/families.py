"""Definable semantic classes over a small signature.

For a fixed signature and logic the definable classes form a finite lattice:

* CPL: all sets of valuations,
* TPL: all powersets ``P(V)`` of valuation sets (flatness),
* PDL: all downward-closed families of teams that contain the empty team.

Entailment relations are tabulated over a :class:`ClassIndex`, which fixes a
canonical order (ascending family bitmask) on these classes.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .semantics import (
    MAX_LATTICE_SIG,
    Logic,
    check_capacity,
    is_downward_closed,
    literal_mask,
    members,
    models_of,
    num_interpretations,
    split_union,
    subteams,
    value_of,
)
from .syntax import And, Bot, Dep, Formula, NegVar, Or, Signature, Top, Var, conjoin, disjoin, size

DEFAULT_BUDGET = 10**6


class SynthesisError(ValueError):
    pass


class SynthesisBudgetError(SynthesisError):
    pass


@dataclass(frozen=True)
class TeamFamily:
    """A set of teams over one signature, stored as a bitmask over team indices."""

    sig: Signature
    bits: int

    @classmethod
    def from_teams(cls, sig: Signature, teams: Iterable[int]) -> "TeamFamily":
        bits = 0
        for t in teams:
            if t >> sig.num_valuations:
                raise ValueError("team outside signature")
            bits |= 1 << t
        return cls(sig, bits)

    @property
    def teams(self) -> list[int]:
        return list(members(self.bits))

    @property
    def downward_closed(self) -> bool:
        return is_downward_closed(self.bits, self.sig.num_valuations)

    @property
    def contains_empty_team(self) -> bool:
        return bool(self.bits & 1)

    def __contains__(self, team: int) -> bool:
        return bool((self.bits >> team) & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()


# --- enumeration -----------------------------------------------------------


def pdl_downsets(num_valuations: int) -> list[int]:
    """All nonempty downsets of the team lattice, grown one maximal team at a time."""
    num_teams = 1 << num_valuations
    start = 1  # {emptyset}
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for fam in frontier:
            for x in range(1, num_teams):
                if (fam >> x) & 1:
                    continue
                # x is addable iff every maximal proper subteam is already present
                y, ok = x, True
                while y:
                    low = y & -y
                    if not (fam >> (x ^ low)) & 1:
                        ok = False
                        break
                    y ^= low
                if ok:
                    grown = fam | (1 << x)
                    if grown not in seen:
                        seen.add(grown)
                        nxt.append(grown)
        frontier = nxt
    return sorted(seen)


def powerset_family(valuation_set: int) -> int:
    out = 0
    for y in subteams(valuation_set):
        out |= 1 << y
    return out


@dataclass(frozen=True, eq=False)
class ClassIndex:
    sig: Signature
    logic: Logic
    families: tuple[int, ...]
    index: dict[int, int] = field(repr=False)
    meet: tuple[tuple[int, ...], ...] = field(repr=False)
    up: tuple[int, ...] = field(repr=False)
    _join: dict[tuple[int, int], int | None] = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.families)

    @cached_property
    def intersection_closed(self) -> bool:
        return all(j >= 0 for row in self.meet for j in row)

    @property
    def num_interpretations(self) -> int:
        return num_interpretations(self.sig, self.logic)

    @property
    def full(self) -> int:
        """Bitmask of the whole interpretation space."""
        return (1 << self.num_interpretations) - 1

    @property
    def top(self) -> int:
        return self.index[self.full]

    @property
    def bottom(self) -> int:
        return 0

    def family(self, i: int) -> int:
        return self.families[i]

    def class_of(self, family: int) -> int:
        try:
            return self.index[family]
        except KeyError:
            raise KeyError(f"family {family:#x} is not definable in {self.logic.value}") from None

    def class_of_formula(self, f: Formula) -> int:
        return self.class_of(models_of(f, self.sig, self.logic))

    def all_classes_mask(self) -> int:
        return (1 << len(self.families)) - 1

    def join(self, i: int, j: int) -> int | None:
        """Class of the disjunction of classes ``i`` and ``j`` (None if not definable)."""
        key = (i, j) if i <= j else (j, i)
        if key not in self._join:
            fam = disjunction_family(self.families[i], self.families[j], self.sig, self.logic)
            self._join[key] = self.index.get(fam)
        return self._join[key]


def disjunction_family(f_bits: int, g_bits: int, sig: Signature, logic: Logic) -> int:
    if logic is Logic.CPL:
        return f_bits | g_bits
    return split_union(f_bits, g_bits, sig.num_valuations)


def index_from_families(sig: Signature, logic: Logic, families: Sequence[int]) -> ClassIndex:
    fams = tuple(sorted(set(families)))
    index = {f: i for i, f in enumerate(fams)}
    meet = tuple(tuple(index.get(a & b, -1) for b in fams) for a in fams)
    up = []
    for a in fams:
        mask = 0
        for j, b in enumerate(fams):
            if a & ~b == 0:
                mask |= 1 << j
        up.append(mask)
    return ClassIndex(sig, logic, fams, index, meet, tuple(up))


@functools.lru_cache(maxsize=None)
def enumerate_classes(sig: Signature, logic: Logic | str) -> ClassIndex:
    logic = Logic.coerce(logic)
    k = sig.num_valuations
    if logic is Logic.CPL:
        check_capacity(sig, 4, "CPL class enumeration")
        fams = list(range(1 << k))
    else:
        check_capacity(sig, MAX_LATTICE_SIG, "class enumeration")
        if logic is Logic.TPL:
            fams = [powerset_family(v) for v in range(1 << k)]
        else:
            fams = pdl_downsets(k)
    return index_from_families(sig, logic, fams)


# --- Th and Cn -------------------------------------------------------------


def th(family: int, classes: ClassIndex) -> frozenset[int]:
    """Classes satisfied by every interpretation of ``family``."""
    return frozenset(i for i, f in enumerate(classes.families) if family & ~f == 0)


def cn(selected: Iterable[int], classes: ClassIndex) -> frozenset[int]:
    """Semantic consequences of a set of classes: ``th`` of their intersection."""
    common = classes.full
    for i in selected:
        common &= classes.families[i]
    return th(common, classes)


# --- synthesis -------------------------------------------------------------


def valuation_literals(sig: Signature, v: int) -> Formula:
    return conjoin([Var(x) if value_of(sig, v, x) else NegVar(x) for x in sig.vars])


def principal_formula(sig: Signature, team: int) -> Formula:
    """Formula defining ``{Y | Y subset of team}``; the empty team gives ``bot``."""
    return disjoin([valuation_literals(sig, v) for v in members(team)])


def _atom_seeds(sig: Signature, logic: Logic) -> list[Formula]:
    seeds: list[Formula] = [Bot(), Top()]
    for x in sig.vars:
        seeds += [Var(x), NegVar(x)]
    if logic is Logic.PDL:
        for target in sig.vars:
            others = [x for x in sig.vars if x != target]
            for r in range(len(others) + 1):
                for args in combinations(others, r):
                    seeds.append(Dep(args, target))
    return seeds


class Synthesizer:
    """Level-order search for defining formulas in semantic space.

    Tracks the smallest formula found per class; formulas are combined with
    ``&`` and ``|`` in order of total size, so the first formula recorded
    for a class is minimal for the seed set.
    """

    def __init__(self, sig: Signature, logic: Logic):
        self.sig = sig
        self.logic = logic
        self.best: dict[int, Formula] = {}
        self.by_size: dict[int, list[int]] = {}
        self.size_done = 0
        self.examined = 0
        self._or_cache: dict[tuple[int, int], int] = {}
        self._pending: dict[int, list[tuple[int, Formula]]] = {}
        seeds = _atom_seeds(sig, logic)
        for v in range(1 << sig.num_valuations):
            seeds.append(principal_formula(sig, v))
        for f in seeds:
            fam = models_of(f, sig, logic)
            self._pending.setdefault(size(f), []).append((fam, f))

    def _record(self, fam: int, f: Formula, s: int) -> None:
        self.examined += 1
        if fam not in self.best:
            self.best[fam] = f
            self.by_size.setdefault(s, []).append(fam)

    def _or(self, a: int, b: int) -> int:
        key = (a, b) if a <= b else (b, a)
        hit = self._or_cache.get(key)
        if hit is None:
            hit = disjunction_family(a, b, self.sig, self.logic)
            self._or_cache[key] = hit
        return hit

    def _advance(self) -> None:
        s = self.size_done + 1
        for fam, f in self._pending.pop(s, []):
            self._record(fam, f, s)
        for i in range(1, (s - 1) // 2 + 1):
            j = s - 1 - i
            left, right = self.by_size.get(i, []), self.by_size.get(j, [])
            for ai, a in enumerate(left):
                for b in right[ai:] if i == j else right:
                    fa, fb = self.best[a], self.best[b]
                    self._record(a & b, And(fa, fb), s)
                    self._record(self._or(a, b), Or(fa, fb), s)
        self.size_done = s

    def _exhausted(self) -> bool:
        if self._pending and max(self._pending) > self.size_done:
            return False
        largest = max(self.by_size) if self.by_size else 0
        return self.size_done > 2 * largest + 1

    def find(self, target: int, budget: int = DEFAULT_BUDGET) -> Formula:
        while target not in self.best:
            if self.examined > budget:
                raise SynthesisBudgetError(f"budget of {budget} entries exhausted")
            if self._exhausted():
                raise SynthesisError("target family is not reachable from the seeds")
            self._advance()
        return self.best[target]


@functools.lru_cache(maxsize=None)
def _synthesizer(sig: Signature, logic: Logic) -> Synthesizer:
    return Synthesizer(sig, logic)


def check_definable(family: int, sig: Signature, logic: Logic) -> None:
    k = sig.num_valuations
    if logic is Logic.CPL:
        if family >> k:
            raise SynthesisError("valuation set outside signature")
        return
    if family >> (1 << k):
        raise SynthesisError("family contains teams outside signature")
    if not family & 1:
        raise SynthesisError(f"family lacks the empty team, not definable in {logic.value}")
    if not is_downward_closed(family, k):
        raise SynthesisError(f"family is not downward closed, not definable in {logic.value}")
    if logic is Logic.TPL:
        top = 0
        for x in members(family):
            top |= x
        if family != powerset_family(top):
            raise SynthesisError("TPL classes are powersets of valuation sets")


def synthesize(
    family: int,
    sig: Signature,
    logic: Logic | str = Logic.PDL,
    budget: int = DEFAULT_BUDGET,
) -> Formula:
    """A formula whose extension is exactly ``family``."""
    logic = Logic.coerce(logic)
    check_definable(family, sig, logic)
    if logic is Logic.CPL:
        return disjoin([valuation_literals(sig, v) for v in members(family)])
    if logic is Logic.TPL:
        top = 0
        for x in members(family):
            top |= x
        return principal_formula(sig, top)
    check_capacity(sig, MAX_LATTICE_SIG, "PDL synthesis")
    return _synthesizer(sig, logic).find(family, budget)
