import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teamklm.families import enumerate_classes
from teamklm.relmodel import (
    RelationalModel,
    classify,
    entails,
    is_smooth,
    min_models,
    minimal_states,
    states_of,
    tabulate_rows,
)
from teamklm.representation import ModelParams, generate_random_model
from teamklm.semantics import Logic
from teamklm.syntax import parse

from conftest import P, PQ

# team {p=1} is team index 2, team {p=0} is team index 1
P1 = 1 << 2
P0 = 1 << 1


def example_model(relation=(("s1", "s2"),), logic=Logic.PDL):
    return RelationalModel.build(P, logic, {"s1": P1, "s2": P0}, relation)


def test_states_of_examples():
    m = example_model()
    assert states_of(m, parse("top")) == {"s1", "s2"}
    assert states_of(m, parse("p")) == {"s1"}
    empty = RelationalModel.build(P, Logic.PDL, {"s": 0})
    assert states_of(empty, parse("bot")) == {"s"}


def test_minimal_states_examples():
    assert minimal_states(example_model(()), {"s1", "s2"}) == {"s1", "s2"}
    assert minimal_states(example_model(), {"s1", "s2"}) == {"s1"}
    cycle = example_model((("s1", "s2"), ("s2", "s1")))
    assert minimal_states(cycle, {"s1", "s2"}) == frozenset()
    loop = example_model((("s1", "s1"),))
    assert minimal_states(loop, {"s1"}) == frozenset()


def test_is_smooth_examples():
    cycle = example_model((("s1", "s2"), ("s2", "s1")))
    r = is_smooth(cycle, {"s1", "s2"})
    assert not r.smooth and r.witness == "s1"
    chain = RelationalModel.build(
        P, Logic.PDL, {"s1": P1, "s2": P1, "s3": P1}, [("s1", "s2"), ("s2", "s3"), ("s1", "s3")]
    )
    assert is_smooth(chain, {"s1", "s2", "s3"}).smooth
    assert is_smooth(cycle, set()).smooth
    # without the transitive edge s3 is only dominated by the non-minimal s2
    bare = RelationalModel.build(P, Logic.PDL, {"s1": P1, "s2": P1, "s3": P1}, [("s1", "s2"), ("s2", "s3")])
    assert is_smooth(bare, {"s1", "s2", "s3"}).witness == "s3"


def test_classify_examples():
    k = classify(example_model())
    assert k.cumulative and k.asymmetric_model
    classes = enumerate_classes(P, Logic.PDL)
    two_cycle = [("s1", "s2"), ("s2", "s1")]
    both = 1 << 3  # the team {p=0, p=1}, which only the top class contains
    cycle = classify(RelationalModel.build(P, Logic.PDL, {"s1": both, "s2": both}, two_cycle))
    assert not cycle.cumulative
    assert cycle.witnesses["cumulative"]["class"] == classes.top
    # the least failing class is reported; top fails as well
    m = RelationalModel.build(P, Logic.PDL, {"s1": P1, "s2": P1}, two_cycle)
    assert classify(m).witnesses["cumulative"]["class"] == classes.class_of_formula(parse("p"))
    assert not is_smooth(m, states_of(m, parse("top"))).smooth


def test_classify_single_state():
    k = classify(RelationalModel.build(P, Logic.PDL, {"s": P1}), star=True)
    assert k.cumulative and k.asymmetric_model and k.preferential and k.pref_triangle and k.star_property
    # no state satisfies bot, so the bot class has no minimal state
    assert not k.strong_cumulative
    assert k.witnesses["strong_cumulative"]["class"] == 0
    # a state labelled by the empty team satisfies every class
    assert classify(RelationalModel.build(P, Logic.PDL, {"s": 1})).strong_cumulative


def test_min_models_and_entails_examples():
    m = example_model()
    assert min_models(m, parse("top")) == P1
    assert min_models(m, parse("bot")) == 0
    assert min_models(example_model(()), parse("top")) == P1 | P0
    assert entails(m, parse("top"), parse("p"))
    assert not entails(m, parse("top"), parse("!p"))


def _random_model(seed, sig=PQ, require=frozenset({"cumulative"})):
    return generate_random_model(sig, Logic.PDL, ModelParams(require=require), seed).model


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_reflexivity_and_smooth_minimum(seed):
    m = _random_model(seed)
    classes = enumerate_classes(PQ, Logic.PDL)
    rows = tabulate_rows(m, classes)
    for i, fam in enumerate(classes.families):
        assert (rows[i] >> i) & 1
        if m.state_mask(fam):
            assert m.min_mask(m.state_mask(fam))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_strong_models_have_unique_minimum(seed):
    m = _random_model(seed, P, frozenset({"strong_cumulative"}))
    for fam in enumerate_classes(P, Logic.PDL).families:
        (state,) = minimal_states(m, states_of(m, fam))
        assert min_models(m, fam) == m.label(state)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_relabelling_invariance(seed):
    m = _random_model(seed)
    ids = list(m.states)
    shuffled = ids[:]
    random.Random(seed).shuffle(shuffled)
    renamed = m.relabel({a: f"t{b}" for a, b in zip(ids, shuffled)})
    classes = enumerate_classes(PQ, Logic.PDL)
    assert tabulate_rows(renamed, classes) == tabulate_rows(m, classes)
    assert classify(renamed).flags() == classify(m).flags()


def test_model_validation():
    with pytest.raises(ValueError):
        RelationalModel.build(P, Logic.PDL, {"s": P1}, [("s", "t")])
    with pytest.raises(ValueError):
        RelationalModel.build(P, Logic.PDL, {"s": 1 << 4})


def test_star_property_on_preferential_cpl():
    m = RelationalModel.build(P, Logic.CPL, {"a": 0b10, "b": 0b01}, [("a", "b")])
    k = classify(m, star=True)
    assert k.preferential and k.pref_triangle and k.star_property
