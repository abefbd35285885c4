import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teamklm.semantics import (
    CapacityError,
    DomainError,
    Logic,
    UnsupportedConnectiveError,
    check_property,
    eval_classical,
    eval_team,
    models_of,
    split_union,
    valuation_index,
)
from teamklm.syntax import And, Dep, Or, Signature, is_pl, parse

from conftest import P, PQ, PQR, formulas, team


# --- independent oracle: teams as sets of dicts, disjunction over all covers ---


def _valuations(sig):
    return [dict(zip(sig.vars, bits)) for bits in itertools.product((0, 1), repeat=len(sig))]


def _subsets(xs):
    for r in range(len(xs) + 1):
        yield from itertools.combinations(xs, r)


def oracle(sig, team_vals, f):
    """Team satisfaction straight from the inductive definition (covers Y u Z = X)."""
    x = [dict(v) for v in team_vals]
    name = type(f).__name__
    if name == "Var":
        return all(v[f.name] == 1 for v in x)
    if name == "NegVar":
        return all(v[f.name] == 0 for v in x)
    if name == "Top":
        return True
    if name == "Bot":
        return not x
    if name == "And":
        return oracle(sig, x, f.lhs) and oracle(sig, x, f.rhs)
    if name == "Dep":
        return all(
            u[f.target] == w[f.target] for u in x for w in x if all(u[a] == w[a] for a in f.args)
        )
    assert name == "Or"
    idx = list(range(len(x)))
    for ys in _subsets(idx):
        for zs in _subsets(idx):
            if set(ys) | set(zs) == set(idx):
                if oracle(sig, [x[i] for i in ys], f.lhs) and oracle(sig, [x[i] for i in zs], f.rhs):
                    return True
    return False


def _team_vals(sig, t):
    vals = _valuations(sig)
    return [vals[v] for v in range(sig.num_valuations) if (t >> v) & 1]


EXAMPLE_TEAM = [{"p": 1, "q": 0, "r": 0}, {"p": 0, "q": 1, "r": 0}]


def _example_team():
    return team(*(valuation_index(PQR, v) for v in EXAMPLE_TEAM))


@pytest.mark.parametrize(
    "text, expected",
    [("=(p;q)", True), ("=(;r)", True), ("=(;p) | =(;p)", True), ("=(;p)", False)],
)
def test_dependence_example(text, expected):
    assert eval_team(PQR, _example_team(), parse(text), Logic.PDL) is expected
    assert oracle(PQR, EXAMPLE_TEAM, parse(text)) is expected


def test_duplicate_valuations_collapse():
    assert team(4, 2, 2) == team(4, 2)


@pytest.mark.parametrize(
    "v, text, expected",
    [({"p": 1}, "p", True), ({"p": 0}, "p | !p", True)],
)
def test_eval_classical_examples(v, text, expected):
    assert eval_classical(P, valuation_index(P, v), parse(text)) is expected


def test_eval_classical_conjunction():
    assert eval_classical(PQ, valuation_index(PQ, {"p": 1, "q": 0}), parse("p & q")) is False


def test_eval_classical_rejects_dep():
    with pytest.raises(UnsupportedConnectiveError):
        eval_classical(P, 0, Dep((), "p"))


def test_eval_team_examples():
    assert eval_team(P, 0, parse("bot"))
    both = team(0, 1)
    assert eval_team(P, both, parse("p | !p"), Logic.TPL)
    assert not eval_team(P, both, parse("=(;p)"))


def test_eval_team_errors():
    with pytest.raises(DomainError):
        eval_team(P, 1, parse("q"))
    with pytest.raises(DomainError):
        eval_team(P, 1 << 2, parse("p"))
    with pytest.raises(UnsupportedConnectiveError):
        eval_team(P, 1, parse("=(;p)"), Logic.TPL)


def test_models_of_examples():
    assert models_of(parse("=(;p)"), P) == 0b0111
    assert models_of(parse("top"), P) == 0b1111
    assert models_of(parse("p"), P, Logic.TPL) == 0b0101
    assert models_of(parse("p | !p"), P, Logic.CPL) == 0b11


def test_models_of_capacity():
    sig = Signature.parse("a,b,c,d,e")
    with pytest.raises(CapacityError):
        models_of(parse("a"), sig)


@settings(max_examples=150, deadline=None)
@given(formulas(("p", "q"), max_leaves=5), st.integers(0, 15))
def test_eval_team_and_models_of_match_oracle(f, t):
    expected = oracle(PQ, _team_vals(PQ, t), f)
    assert eval_team(PQ, t, f) is expected
    assert bool((models_of(f, PQ) >> t) & 1) is expected


def test_dep_with_target_in_args_is_tautological():
    f = parse("=(p,q;p)")
    assert models_of(f, PQ) == (1 << 16) - 1


def test_check_property_examples():
    r = check_property(parse("=(;p)"), P, Logic.PDL, "flatness")
    assert not r.holds and r.witness == team(0, 1)
    assert check_property(parse("p | q"), PQ, Logic.TPL, "flatness").holds
    assert check_property(parse("=(p;q)"), PQ, Logic.PDL, "downward_closure").holds


def test_check_property_rejects_unknown():
    with pytest.raises(ValueError):
        check_property(parse("p"), P, Logic.PDL, "monotone")


@given(formulas(("p", "q"), with_dep=False), st.integers(0, 3))
def test_singleton_team_bridge(f, v):
    assert eval_team(PQ, 1 << v, f, Logic.TPL) is eval_classical(PQ, v, f)


@settings(deadline=None)
@given(formulas(("p", "q")))
def test_team_properties(f):
    if is_pl(f):
        assert check_property(f, PQ, Logic.TPL, "flatness").holds
    assert check_property(f, PQ, Logic.PDL, "empty_team").holds
    assert check_property(f, PQ, Logic.PDL, "downward_closure").holds


@settings(deadline=None)
@given(formulas(("p", "q")), formulas(("p", "q")))
def test_conjunction_is_intersection(f, g):
    assert models_of(And(f, g), PQ) == models_of(f, PQ) & models_of(g, PQ)
    assert models_of(Or(f, g), PQ) == split_union(models_of(f, PQ), models_of(g, PQ), 4)


@given(formulas(("p", "q"), with_dep=False))
def test_tpl_models_are_powerset_of_cpl(f):
    cpl = models_of(f, PQ, Logic.CPL)
    expected = 0
    for t in range(16):
        if t & ~cpl == 0:
            expected |= 1 << t
    assert models_of(f, PQ, Logic.TPL) == expected


def test_split_union_brute_force():
    rng = random.Random(7)
    for _ in range(50):
        f, g = rng.getrandbits(16), rng.getrandbits(16)
        expected = 0
        for y in range(16):
            for z in range(16):
                if (f >> y) & 1 and (g >> z) & 1:
                    expected |= 1 << (y | z)
        assert split_union(f, g, 4) == expected
