"""Tabulated entailment relations: System C audit, closure, Norm and C_|~.

An :class:`EntailmentTable` stores, for each antecedent class ``a``, the
bitmask ``rows[a]`` of consequent classes ``b`` with ``a |~ b``. Tabulating
on classes bakes in invariance under semantic equivalence on both sides;
for relations closed under RW that loses nothing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .families import ClassIndex, synthesize
from .relmodel import RelationalModel, tabulate_rows
from .semantics import members, models_of

RULES = ("Ref", "LLE", "RW", "Cut", "CM")
CLOSURE_ORDER = ("Ref", "RW", "Cut", "CM")


class NotSystemCError(ValueError):
    """Operation needs a relation satisfying System C."""


class ConstructionError(AssertionError):
    pass


@dataclass(frozen=True, eq=False)
class EntailmentTable:
    classes: ClassIndex
    rows: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        if len(self.rows) != len(self.classes):
            raise ValueError("one row per class required")

    @classmethod
    def from_pairs(cls, classes: ClassIndex, pairs: Iterable[tuple[int, int]]) -> "EntailmentTable":
        rows = [0] * len(classes)
        for a, b in pairs:
            if not (0 <= a < len(classes) and 0 <= b < len(classes)):
                raise ValueError(f"class pair ({a}, {b}) out of range")
            rows[a] |= 1 << b
        return cls(classes, tuple(rows))

    @classmethod
    def semantic(cls, classes: ClassIndex) -> "EntailmentTable":
        """The underlying consequence relation: ``a |~ b`` iff ``a`` implies ``b``."""
        return cls(classes, classes.up)

    @classmethod
    def of_model(cls, m: RelationalModel, classes: ClassIndex) -> "EntailmentTable":
        return cls(classes, tabulate_rows(m, classes))

    def __contains__(self, pair: tuple[int, int]) -> bool:
        a, b = pair
        return bool((self.rows[a] >> b) & 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EntailmentTable):
            return NotImplemented
        return self.classes.families == other.classes.families and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __le__(self, other: "EntailmentTable") -> bool:
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a, row in enumerate(self.rows) for b in members(row)]

    def with_pairs(self, pairs: Iterable[tuple[int, int]]) -> "EntailmentTable":
        rows = list(self.rows)
        for a, b in pairs:
            rows[a] |= 1 << b
        return EntailmentTable(self.classes, tuple(rows))

    def without_pairs(self, pairs: Iterable[tuple[int, int]]) -> "EntailmentTable":
        rows = list(self.rows)
        for a, b in pairs:
            rows[a] &= ~(1 << b)
        return EntailmentTable(self.classes, tuple(rows))

    @cached_property
    def report(self) -> "AuditReport":
        return audit(self)

    @property
    def is_system_c(self) -> bool:
        return self.report.passed


# --- audit -----------------------------------------------------------------


@dataclass
class RuleStatus:
    status: str  # "pass", "fail" or "structural"
    count: int = 0
    violations: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def witness(self) -> tuple[int, ...] | None:
        return self.violations[0] if self.violations else None


@dataclass
class AuditReport:
    rules: dict[str, RuleStatus]

    @property
    def passed(self) -> bool:
        return all(r.status != "fail" for r in self.rules.values())

    def to_dict(self) -> dict:
        return {
            "status": "pass" if self.passed else "fail",
            "rules": {
                name: {
                    "status": r.status,
                    "violations": r.count,
                    "witness": list(r.witness) if r.witness else None,
                }
                for name, r in self.rules.items()
            },
        }


class _Collector:
    def __init__(self, keep: int):
        self.keep = keep
        self.count = 0
        self.items: list[tuple[int, ...]] = []

    def add(self, triple: tuple[int, ...]) -> None:
        self.count += 1
        if len(self.items) < self.keep:
            self.items.append(triple)

    def status(self) -> RuleStatus:
        return RuleStatus("fail" if self.count else "pass", self.count, self.items)


def audit(t: EntailmentTable, enable_or: bool = False, keep: int = 20) -> AuditReport:
    """Check System C (plus Or, optionally) on a tabulated relation.

    Violation triples, in canonical order:
    Ref ``(a,)``; RW ``(c, a, b)`` with ``c |~ a``, ``a`` implies ``b`` but not
    ``c |~ b``; Cut and CM ``(a, b, c)`` as in the rules' premises
    ``a |~ b`` and ``a & b |~ c`` (Cut) or ``a |~ c`` (CM); Or ``(a, b, c)``.
    """
    cls = t.classes
    rows, up, meet = t.rows, cls.up, cls.meet
    n = len(rows)
    if not cls.intersection_closed:
        raise ValueError("class index is not closed under intersection")
    ref, rw, cut, cm = (_Collector(keep) for _ in range(4))
    for a in range(n):
        if not (rows[a] >> a) & 1:
            ref.add((a,))
    for c in range(n):
        rc = rows[c]
        for a in members(rc):
            missing = up[a] & ~rc
            if missing:
                for b in members(missing):
                    rw.add((c, a, b))
    for a in range(n):
        ra = rows[a]
        for b in members(ra):
            rm = rows[meet[a][b]]
            if rm == ra:
                continue
            for c in members(rm & ~ra):
                cut.add((a, b, c))
            for c in members(ra & ~rm):
                cm.add((a, b, c))
    rules = {
        "Ref": ref.status(),
        "LLE": RuleStatus("structural"),
        "RW": rw.status(),
        "Cut": cut.status(),
        "CM": cm.status(),
    }
    if enable_or:
        orc = _Collector(keep)
        for a in range(n):
            for b in range(a, n):
                j = cls.join(a, b)
                if j is None:
                    continue
                for c in members(rows[a] & rows[b] & ~rows[j]):
                    orc.add((a, b, c))
        rules["Or"] = orc.status()
    return AuditReport(rules)


def rows_satisfy_system_c(rows: Sequence[int], up: Sequence[int], meet: Sequence[Sequence[int]]) -> bool:
    """Boolean-only System C check, cheapest rejectors first."""
    n = len(rows)
    for a in range(n):
        ra = rows[a]
        if not (ra >> a) & 1:
            return False
        for b in members(ra):
            if up[b] & ~ra:
                return False
    for a in range(n):
        ra = rows[a]
        for b in members(ra):
            if rows[meet[a][b]] != ra:
                return False
    return True


# --- closure ---------------------------------------------------------------


def close(
    seeds: Iterable[tuple[int, int]],
    classes: ClassIndex,
    order: Sequence[str] = CLOSURE_ORDER,
) -> EntailmentTable:
    """Least relation containing ``seeds`` and closed under Ref, RW, Cut, CM."""
    if sorted(order) != sorted(CLOSURE_ORDER):
        raise ValueError(f"order must be a permutation of {CLOSURE_ORDER}")
    n = len(classes)
    up, meet = classes.up, classes.meet
    rows = [0] * n
    for a, b in seeds:
        rows[a] |= 1 << b

    def ref() -> bool:
        changed = False
        for a in range(n):
            if not (rows[a] >> a) & 1:
                rows[a] |= 1 << a
                changed = True
        return changed

    def rw() -> bool:
        changed = False
        for c in range(n):
            grown = rows[c]
            for a in members(rows[c]):
                grown |= up[a]
            if grown != rows[c]:
                rows[c] = grown
                changed = True
        return changed

    def cut() -> bool:
        changed = False
        for a in range(n):
            for b in members(rows[a]):
                grown = rows[a] | rows[meet[a][b]]
                if grown != rows[a]:
                    rows[a] = grown
                    changed = True
        return changed

    def cm() -> bool:
        changed = False
        for a in range(n):
            for b in members(rows[a]):
                m = meet[a][b]
                grown = rows[m] | rows[a]
                if grown != rows[m]:
                    rows[m] = grown
                    changed = True
        return changed

    steps = {"Ref": ref, "RW": rw, "Cut": cut, "CM": cm}
    while True:
        changed = False
        for name in order:
            changed |= steps[name]()
        if not changed:
            return EntailmentTable(classes, tuple(rows))


# --- Norm, consequences, canonical model -----------------------------------


def _require_system_c(t: EntailmentTable) -> None:
    if not t.is_system_c:
        failed = [k for k, r in t.report.rules.items() if r.status == "fail"]
        raise NotSystemCError(f"relation violates System C rules: {', '.join(failed)}")


def norm(t: EntailmentTable, a: int) -> int:
    """Interpretations satisfying every consequence of class ``a``."""
    _require_system_c(t)
    return _norm(t, a)


def _norm(t: EntailmentTable, a: int) -> int:
    out = t.classes.full
    for b in members(t.rows[a]):
        out &= t.classes.families[b]
    return out


def c_consequences(t: EntailmentTable, a: int) -> frozenset[int]:
    _require_system_c(t)
    return frozenset(members(t.rows[a]))


def equivalence_classes(t: EntailmentTable) -> list[list[int]]:
    """Classes of mutual entailment, each sorted, ordered by least member."""
    n = len(t.rows)
    rep = [-1] * n
    groups: list[list[int]] = []
    for a in range(n):
        if rep[a] >= 0:
            continue
        group = [b for b in range(a, n) if (t.rows[a] >> b) & 1 and (t.rows[b] >> a) & 1]
        if a not in group:
            group.insert(0, a)
        for b in group:
            rep[b] = a
        groups.append(group)
    return groups


def state_name(rep: int) -> str:
    return f"c{rep}"


def build_klm_model(t: EntailmentTable) -> RelationalModel:
    """The canonical model: states are mutual-entailment classes labelled by Norm."""
    _require_system_c(t)
    groups = equivalence_classes(t)
    labels = []
    for group in groups:
        lab = _norm(t, group[0])
        for b in group[1:]:
            if _norm(t, b) != lab:
                raise ConstructionError(
                    f"Norm differs between equivalent classes {group[0]} and {b}"
                )
        labels.append(lab)
    # [A] R [B] iff [A] != [B] and B |~ C for some C ~ A
    group_mask = []
    for group in groups:
        m = 0
        for b in group:
            m |= 1 << b
        group_mask.append(m)
    relation = set()
    for gi, ga in enumerate(groups):
        for gj, gb in enumerate(groups):
            if gi == gj:
                continue
            if t.rows[gb[0]] & group_mask[gi]:
                relation.add((state_name(ga[0]), state_name(gb[0])))
    cls = t.classes
    return RelationalModel(
        cls.sig,
        cls.logic,
        tuple(state_name(g[0]) for g in groups),
        tuple(labels),
        frozenset(relation),
    )


@dataclass
class DefinabilityReport:
    status: str
    pairs_checked: int
    mismatches: list[tuple[int, int]]
    theta: dict[int, str]
    theta_failures: list[int]

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "pairs_checked": self.pairs_checked,
            "mismatches": [list(p) for p in self.mismatches[:20]],
            "theta_failures": self.theta_failures,
            "theta": {str(k): v for k, v in sorted(self.theta.items())},
        }


def verify_definability(t: EntailmentTable, synthesize_theta: bool = True) -> DefinabilityReport:
    """``a |~ b`` iff Norm(a) implies ``b``, and Norm(a) is defined by a formula."""
    from .syntax import to_text

    _require_system_c(t)
    cls = t.classes
    n = len(cls)
    mismatches = []
    theta: dict[int, str] = {}
    theta_failures = []
    for a in range(n):
        nm = _norm(t, a)
        for b in range(n):
            if ((t.rows[a] >> b) & 1) != (nm & ~cls.families[b] == 0):
                mismatches.append((a, b))
        if synthesize_theta:
            f = synthesize(nm, cls.sig, cls.logic)
            theta[a] = to_text(f)
            if models_of(f, cls.sig, cls.logic) != nm:
                theta_failures.append(a)
    ok = not mismatches and not theta_failures
    return DefinabilityReport("pass" if ok else "fail", n * n, mismatches, theta, theta_failures)
