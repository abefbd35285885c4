import random

import pytest
from hypothesis import strategies as st

from teamklm.syntax import And, Bot, Dep, NegVar, Or, Signature, Top, Var

P = Signature(("p",))
PQ = Signature(("p", "q"))
PQR = Signature(("p", "q", "r"))


def team(*vals):
    """Team bitmask from valuation indices."""
    out = 0
    for v in vals:
        out |= 1 << v
    return out


def formulas(names=("p", "q"), with_dep=True, max_leaves=4):
    atoms = [st.just(Top()), st.just(Bot())]
    atoms += [st.builds(Var, st.sampled_from(names)), st.builds(NegVar, st.sampled_from(names))]
    if with_dep:
        atoms.append(
            st.builds(
                Dep,
                st.lists(st.sampled_from(names), max_size=3).map(tuple),
                st.sampled_from(names),
            )
        )
    return st.recursive(
        st.one_of(atoms),
        lambda sub: st.one_of(st.builds(And, sub, sub), st.builds(Or, sub, sub)),
        max_leaves=max_leaves,
    )


def random_formula(rng: random.Random, names, max_size: int, with_dep: bool):
    """Random AST with at most ``max_size`` nodes (odd sizes: leaves + binary nodes)."""
    size = rng.randrange(1, max_size + 1, 2)

    def build(n):
        if n == 1:
            kind = rng.randrange(5 if with_dep else 4)
            if kind == 0:
                return rng.choice([Top(), Bot()])
            if kind in (1, 2):
                return Var(rng.choice(names))
            if kind == 3:
                return NegVar(rng.choice(names))
            args = tuple(rng.sample(list(names), rng.randrange(len(names) + 1)))
            return Dep(args, rng.choice(names))
        left = rng.randrange(1, n - 1, 2)
        op = And if rng.random() < 0.5 else Or
        return op(build(left), build(n - 1 - left))

    return build(size)


def brute_force_downsets(k):
    """Filter every family of teams over ``k`` valuations for downward closure and the empty team."""
    n = 1 << k
    out = []
    for fam in range(1 << n):
        if not fam & 1:
            continue
        present = [x for x in range(n) if (fam >> x) & 1]
        if all((fam >> y) & 1 for x in present for y in range(n) if y & ~x == 0):
            out.append(fam)
    return out


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(1234)
