"""Classical and team semantics over a finite signature.

Encodings used throughout the package:

* a valuation is an int in ``[0, 2**n)``; variable ``sig.vars[j]`` is bit
  ``n-1-j`` so that valuations enumerate in binary-lexicographic order;
* a team is an int bitmask over valuations (bit ``v`` set iff ``v`` is in
  the team);
* a family (set of teams, or for CPL a set of valuations) is an int bitmask
  over the interpretation space.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .syntax import (
    And,
    Bot,
    Dep,
    Formula,
    NegVar,
    Or,
    Signature,
    Top,
    UnknownVariableError,
    Var,
    is_pl,
    variables,
)

MAX_TEAM_SIG = 4
MAX_LATTICE_SIG = 2


class Logic(str, enum.Enum):
    CPL = "CPL"
    TPL = "TPL"
    PDL = "PDL"

    @classmethod
    def coerce(cls, value: "Logic | str") -> "Logic":
        return value if isinstance(value, cls) else cls(str(value).upper())

    @property
    def team_based(self) -> bool:
        return self is not Logic.CPL


class CapacityError(ValueError):
    pass


class UnsupportedConnectiveError(ValueError):
    pass


class DomainError(ValueError):
    pass


def check_capacity(sig: Signature, limit: int, what: str) -> None:
    if len(sig) > limit:
        raise CapacityError(f"{what} supports signatures of size <= {limit}, got {len(sig)}")


def check_domain(sig: Signature, f: Formula) -> None:
    missing = sorted(variables(f) - set(sig.vars))
    if missing:
        raise DomainError(f"variables {missing} not in signature {sig}")


# --- valuations and teams --------------------------------------------------


def value_of(sig: Signature, v: int, name: str) -> int:
    return (v >> (len(sig) - 1 - sig.position(name))) & 1


def valuation_index(sig: Signature, assignment: Mapping[str, int]) -> int:
    extra = set(assignment) - set(sig.vars)
    if extra:
        raise DomainError(f"valuation mentions variables outside signature: {sorted(extra)}")
    v = 0
    for name in sig.vars:
        if name not in assignment:
            raise DomainError(f"valuation does not assign {name!r}")
        bit = assignment[name]
        if bit not in (0, 1, True, False):
            raise DomainError(f"value for {name!r} must be 0 or 1, got {bit!r}")
        v = (v << 1) | int(bit)
    return v


def valuation_dict(sig: Signature, v: int) -> dict[str, int]:
    return {name: value_of(sig, v, name) for name in sig.vars}


def members(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def team_of(valuations) -> int:
    """Team bitmask from valuation indices; duplicates collapse."""
    team = 0
    for v in valuations:
        team |= 1 << v
    return team


def subteams(team: int) -> Iterator[int]:
    """All subteams of ``team`` in ascending order, ``0`` first."""
    subs = []
    sub = team
    while True:
        subs.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & team
    return reversed(subs)


def literal_mask(sig: Signature, name: str, positive: bool = True) -> int:
    """Valuations (as a bitmask) where ``name`` is true, or false."""
    out = 0
    for v in range(sig.num_valuations):
        if value_of(sig, v, name) == positive:
            out |= 1 << v
    return out


# --- classical semantics ---------------------------------------------------


def eval_classical(sig: Signature, v: int, f: Formula) -> bool:
    if isinstance(f, Var):
        return value_of(sig, v, f.name) == 1
    if isinstance(f, NegVar):
        return value_of(sig, v, f.name) == 0
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, And):
        return eval_classical(sig, v, f.lhs) and eval_classical(sig, v, f.rhs)
    if isinstance(f, Or):
        return eval_classical(sig, v, f.lhs) or eval_classical(sig, v, f.rhs)
    if isinstance(f, Dep):
        raise UnsupportedConnectiveError("dependence atoms have no classical semantics")
    raise TypeError(f"not a formula: {f!r}")


# --- team semantics, one team at a time ------------------------------------


def _dep_holds(sig: Signature, team: int, f: Dep) -> bool:
    seen: dict[tuple[int, ...], int] = {}
    for v in members(team):
        key = tuple(value_of(sig, v, a) for a in f.args)
        b = value_of(sig, v, f.target)
        if seen.setdefault(key, b) != b:
            return False
    return True


def eval_team(sig: Signature, team: int, f: Formula, logic: Logic | str = Logic.PDL) -> bool:
    """Decide ``team |= f`` by direct recursion on the formula.

    Disjunction tries every split ``Y, X \\ Y``. Every formula of the language
    is downward closed, so complement splits are as strong as arbitrary
    covers ``Y u Z = X``.
    """
    logic = Logic.coerce(logic)
    if logic is Logic.CPL:
        raise ValueError("eval_team needs a team logic; use eval_classical for CPL")
    if logic is Logic.TPL and not is_pl(f):
        raise UnsupportedConnectiveError("TPL formulas may not contain dependence atoms")
    check_domain(sig, f)
    if team >> sig.num_valuations:
        raise DomainError("team contains valuations outside the signature")
    memo: dict[tuple[Formula, int], bool] = {}

    def sat(g: Formula, x: int) -> bool:
        key = (g, x)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(g, Var):
            r = x & ~literal_mask(sig, g.name, True) == 0
        elif isinstance(g, NegVar):
            r = x & ~literal_mask(sig, g.name, False) == 0
        elif isinstance(g, Top):
            r = True
        elif isinstance(g, Bot):
            r = x == 0
        elif isinstance(g, And):
            r = sat(g.lhs, x) and sat(g.rhs, x)
        elif isinstance(g, Or):
            r = any(sat(g.lhs, y) and sat(g.rhs, x ^ y) for y in subteams(x))
        elif isinstance(g, Dep):
            r = _dep_holds(sig, x, g)
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[key] = r
        return r

    return sat(f, team)


# --- whole-lattice extensions ----------------------------------------------


def bits_to_array(bits: int, length: int) -> np.ndarray:
    raw = bits.to_bytes((length + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:length].astype(bool)


def array_to_bits(arr: np.ndarray) -> int:
    return int.from_bytes(np.packbits(arr.astype(bool), bitorder="little").tobytes(), "little")


def _zeta(a: np.ndarray, k: int) -> np.ndarray:
    a = a.copy()
    for i in range(k):
        view = a.reshape(-1, 2, 1 << i)
        view[:, 1, :] += view[:, 0, :]
    return a


def _mobius(a: np.ndarray, k: int) -> np.ndarray:
    a = a.copy()
    for i in range(k):
        view = a.reshape(-1, 2, 1 << i)
        view[:, 1, :] -= view[:, 0, :]
    return a


def split_union_array(f: np.ndarray, g: np.ndarray, k: int) -> np.ndarray:
    """``{Y u Z | Y in f, Z in g}`` over teams of ``k`` valuations (covering product)."""
    fz = _zeta(f.astype(np.int64), k)
    gz = _zeta(g.astype(np.int64), k)
    return _mobius(fz * gz, k) > 0


def split_union(f_bits: int, g_bits: int, num_valuations: int) -> int:
    """Family of teams ``Y u Z`` with ``Y`` in ``f`` and ``Z`` in ``g``."""
    length = 1 << num_valuations
    f = bits_to_array(f_bits, length)
    g = bits_to_array(g_bits, length)
    return array_to_bits(split_union_array(f, g, num_valuations))


def _team_array(sig: Signature, f: Formula, teams: np.ndarray) -> np.ndarray:
    k = sig.num_valuations
    if isinstance(f, Var):
        return teams & ~literal_mask(sig, f.name, True) == 0
    if isinstance(f, NegVar):
        return teams & ~literal_mask(sig, f.name, False) == 0
    if isinstance(f, Top):
        return np.ones(len(teams), dtype=bool)
    if isinstance(f, Bot):
        return teams == 0
    if isinstance(f, And):
        return _team_array(sig, f.lhs, teams) & _team_array(sig, f.rhs, teams)
    if isinstance(f, Or):
        return split_union_array(_team_array(sig, f.lhs, teams), _team_array(sig, f.rhs, teams), k)
    if isinstance(f, Dep):
        groups: dict[tuple[int, ...], list[int]] = {}
        for v in range(k):
            key = tuple(value_of(sig, v, a) for a in f.args)
            groups.setdefault(key, [0, 0])[value_of(sig, v, f.target)] |= 1 << v
        ok = np.ones(len(teams), dtype=bool)
        for g0, g1 in groups.values():
            ok &= ~(((teams & g0) != 0) & ((teams & g1) != 0))
        return ok
    raise TypeError(f"not a formula: {f!r}")


def models_of(f: Formula, sig: Signature, logic: Logic | str = Logic.PDL) -> int:
    """Extension of ``f`` as a bitmask: over valuations for CPL, over teams otherwise."""
    logic = Logic.coerce(logic)
    check_domain(sig, f)
    if logic is Logic.CPL:
        if not is_pl(f):
            raise UnsupportedConnectiveError("CPL formulas may not contain dependence atoms")
        return team_of(v for v in range(sig.num_valuations) if eval_classical(sig, v, f))
    if logic is Logic.TPL and not is_pl(f):
        raise UnsupportedConnectiveError("TPL formulas may not contain dependence atoms")
    check_capacity(sig, MAX_TEAM_SIG, "team enumeration")
    teams = np.arange(1 << sig.num_valuations, dtype=np.int64)
    return array_to_bits(_team_array(sig, f, teams))


def num_interpretations(sig: Signature, logic: Logic | str) -> int:
    logic = Logic.coerce(logic)
    k = sig.num_valuations
    return k if logic is Logic.CPL else 1 << k


# --- structural properties of families -------------------------------------


def is_downward_closed(family: int, num_valuations: int) -> bool:
    for x in members(family):
        y = x
        while y:
            low = y & -y
            if not (family >> (x ^ low)) & 1:
                return False
            y ^= low
    return True


def downward_closure(family: int) -> int:
    out = 0
    for x in members(family):
        for y in subteams(x):
            out |= 1 << y
    return out


@dataclass(frozen=True)
class PropertyResult:
    holds: bool
    witness: int | None = None
    subteam: int | None = None


PROPERTIES = ("flatness", "empty_team", "downward_closure")


def family_property(family: int, num_valuations: int, which: str) -> PropertyResult:
    """Check one structural property of a family of teams, exhaustively.

    The witness is the least failing team in canonical order.
    """
    num_teams = 1 << num_valuations
    if which == "empty_team":
        return PropertyResult(True) if family & 1 else PropertyResult(False, witness=0)
    if which == "flatness":
        for x in range(num_teams):
            in_family = bool((family >> x) & 1)
            flat = all((family >> (1 << v)) & 1 for v in members(x))
            if in_family != flat:
                return PropertyResult(False, witness=x)
        return PropertyResult(True)
    if which == "downward_closure":
        for x in members(family):
            for y in subteams(x):
                if not (family >> y) & 1:
                    return PropertyResult(False, witness=x, subteam=y)
        return PropertyResult(True)
    raise ValueError(f"unknown property {which!r}; expected one of {PROPERTIES}")


def check_property(f: Formula, sig: Signature, logic: Logic | str, which: str) -> PropertyResult:
    logic = Logic.coerce(logic)
    if not logic.team_based:
        raise ValueError("team properties are only defined for TPL and PDL")
    return family_property(models_of(f, sig, logic), sig.num_valuations, which)
