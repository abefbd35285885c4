"""End-to-end checks of the representation results at desk scale.

Two directions are checked for each logic. Models to rules: relations
induced by cumulative models pass the System C audit. Rules to models:
every System C relation is reproduced by its canonical strong model.
The TPL checks also cover the transfer between TPL and CPL via label
flattening.
"""
from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from .families import ClassIndex, enumerate_classes
from .relmodel import RelationalModel, classify
from .semantics import CapacityError, Logic, members, num_interpretations
from .syntax import Signature
from .systemc import (
    EntailmentTable,
    audit,
    build_klm_model,
    close,
    rows_satisfy_system_c,
    verify_definability,
)

MAX_EXHAUSTIVE_BITS = 20
DEFAULT_TABLE_SAMPLES = 500
DEFAULT_MODEL_SAMPLES = 1000


# --- lifting and lowering --------------------------------------------------


class ShapeError(ValueError):
    pass


def lift_cpl_to_tpl(m: RelationalModel, mode: str = "flatten") -> RelationalModel:
    """Reinterpret a CPL model over teams.

    ``flatten`` turns a label ``{v1..vm}`` into the single team ``{{v1..vm}}``;
    ``singleton`` needs one-valuation labels and maps ``{v}`` to ``{{v}}``.
    States and relation are kept.
    """
    if m.logic is not Logic.CPL:
        raise ShapeError("lift expects a CPL model")
    if mode not in ("flatten", "singleton"):
        raise ValueError(f"unknown lift mode {mode!r}")
    if mode == "singleton":
        for s, lab in zip(m.states, m.labels):
            if lab.bit_count() != 1:
                raise ShapeError(f"singleton lift needs one valuation per label; state {s} has {lab.bit_count()}")
    # a valuation-set bitmask is itself a team index
    labels = tuple(1 << lab for lab in m.labels)
    return RelationalModel(m.sig, Logic.TPL, m.states, labels, m.relation)


def lower_tpl_to_cpl(m: RelationalModel) -> RelationalModel:
    """Unwrap each single-team label ``{X}`` into the valuation set ``X``."""
    if m.logic is not Logic.TPL:
        raise ShapeError("lowering expects a TPL model")
    labels = []
    for s, lab in zip(m.states, m.labels):
        if lab.bit_count() != 1:
            raise ShapeError(f"state {s} is not labelled by exactly one team")
        labels.append(lab.bit_length() - 1)
    return RelationalModel(m.sig, Logic.CPL, m.states, tuple(labels), m.relation)


def tpl_cpl_bijection(sig: Signature) -> list[int]:
    """``out[i]`` is the CPL class index matching TPL class ``i`` (``P(V) <-> V``)."""
    tpl = enumerate_classes(sig, Logic.TPL)
    cpl = enumerate_classes(sig, Logic.CPL)
    out = []
    for fam in tpl.families:
        top = 0
        for x in members(fam):
            top |= x
        out.append(cpl.class_of(top))
    return out


def map_rows(rows: Iterable[int], mapping: list[int]) -> tuple[int, ...]:
    rows = list(rows)
    out = [0] * len(rows)
    for a, row in enumerate(rows):
        mapped = 0
        for b in members(row):
            mapped |= 1 << mapping[b]
        out[mapping[a]] = mapped
    return tuple(out)


# --- random models ---------------------------------------------------------


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class ModelParams:
    max_states: int = 5
    min_states: int = 1
    edge_density: float = 0.3
    label_density: float = 0.3
    require: frozenset[str] = frozenset({"cumulative"})
    single_labels: bool | None = None
    max_attempts: int = 20000

    def __post_init__(self):
        object.__setattr__(self, "require", frozenset(self.require))


@dataclass(frozen=True)
class GeneratedModel:
    model: RelationalModel
    rejections: int


_NEEDS_SINGLE = {"asymmetric_model", "preferential", "pref_triangle"}
_NEEDS_ASYM = {"asymmetric_model", "strong_cumulative"}


def _draw(sig: Signature, logic: Logic, p: ModelParams, rng: random.Random) -> RelationalModel:
    k = rng.randint(p.min_states, p.max_states)
    space = num_interpretations(sig, logic)
    single = p.single_labels if p.single_labels is not None else bool(p.require & _NEEDS_SINGLE)
    labels = []
    for _ in range(k):
        if single:
            labels.append(1 << rng.randrange(space))
        else:
            lab = 0
            for w in range(space):
                if rng.random() < p.label_density:
                    lab |= 1 << w
            labels.append(lab)
    ids = [f"s{i}" for i in range(k)]
    edges = set()
    if p.require & {"preferential", "pref_triangle"}:
        order = list(range(k))
        rng.shuffle(order)
        for i in range(k):
            for j in range(i + 1, k):
                if rng.random() < p.edge_density:
                    edges.add((order[i], order[j]))
        grown = True
        while grown:
            grown = False
            for a, b in list(edges):
                for c, d in list(edges):
                    if b == c and (a, d) not in edges:
                        edges.add((a, d))
                        grown = True
    elif p.require & _NEEDS_ASYM:
        for i in range(k):
            for j in range(i + 1, k):
                if rng.random() < p.edge_density:
                    edges.add((i, j) if rng.random() < 0.5 else (j, i))
    else:
        for i in range(k):
            for j in range(k):
                if i != j and rng.random() < p.edge_density:
                    edges.add((i, j))
    return RelationalModel(sig, logic, tuple(ids), tuple(labels), frozenset((ids[a], ids[b]) for a, b in edges))


def generate_random_model(
    sig: Signature,
    logic: Logic | str,
    params: ModelParams = ModelParams(),
    seed: int | random.Random = 0,
) -> GeneratedModel:
    """Rejection-sample a model whose classification has every required flag."""
    logic = Logic.coerce(logic)
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    classes = enumerate_classes(sig, logic)
    for attempt in range(params.max_attempts):
        m = _draw(sig, logic, params, rng)
        flags = classify(m, classes).flags()
        if all(flags[name] for name in params.require):
            return GeneratedModel(m, attempt)
    raise GenerationError(f"no model with {sorted(params.require)} after {params.max_attempts} attempts")


# --- reports ---------------------------------------------------------------


@dataclass
class VerificationReport:
    theorem: str
    scope: dict
    status: str = "pass"
    counts: dict = field(default_factory=dict)
    counterexample: dict | None = None
    seed: int | None = None
    ms: float | None = None

    def fail(self, what: str, **detail) -> None:
        if self.counterexample is None:
            self.counterexample = {"check": what, **detail}
        self.status = "fail"

    def to_dict(self, timing: bool = False) -> dict:
        """JSON-ready form; timing is left out unless asked for, so output is reproducible."""
        return {
            "theorem": self.theorem,
            "scope": self.scope,
            "status": self.status,
            "counterexample": self.counterexample,
            "counts": self.counts,
            "seed": self.seed,
            "ms": round(self.ms, 3) if timing and self.ms is not None else None,
        }


def _bump(counts: dict, key: str, by: int = 1) -> None:
    counts[key] = counts.get(key, 0) + by


def default_threads() -> int:
    return os.cpu_count() or 1


# --- exhaustive enumeration of System C relations --------------------------


def _offdiag(n: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(n) for b in range(n) if a != b]


def _enumerate_chunk(args) -> tuple[int, list[tuple[int, ...]]]:
    sig_vars, logic, start, stop = args
    classes = enumerate_classes(Signature(sig_vars), logic)
    n = len(classes)
    up, meet = classes.up, classes.meet
    width = n - 1
    # per-row decode tables: off-diagonal bits of row a -> row bitmask
    decode = []
    for a in range(n):
        targets = [b for b in range(n) if b != a]
        table = []
        for bits in range(1 << width):
            row = 1 << a
            for i, b in enumerate(targets):
                if (bits >> i) & 1:
                    row |= 1 << b
            # RW pre-filter: the row must be upward closed
            ok = all(up[b] & ~row == 0 for b in members(row))
            table.append(row if ok else -1)
        decode.append(table)
    row_mask = (1 << width) - 1
    survivors = []
    for cand in range(start, stop):
        rows = []
        for a in range(n):
            r = decode[a][(cand >> (a * width)) & row_mask]
            if r < 0:
                break
            rows.append(r)
        else:
            if rows_satisfy_system_c(rows, up, meet):
                survivors.append(tuple(rows))
    return stop - start, survivors


def enumerate_system_c(classes: ClassIndex, threads: int = 1) -> tuple[int, list[tuple[int, ...]]]:
    """All reflexive relations on the classes, filtered by the System C audit.

    Returns the number of candidates enumerated and the surviving row tuples
    in canonical candidate order.
    """
    n = len(classes)
    bits = n * (n - 1)
    if bits > MAX_EXHAUSTIVE_BITS:
        raise CapacityError(f"exhaustive enumeration over {n} classes needs 2^{bits} candidates")
    total = 1 << bits
    chunks = max(1, min(64, threads * 4))
    step = -(-total // chunks)
    jobs = [
        (classes.sig.vars, classes.logic, lo, min(total, lo + step))
        for lo in range(0, total, step)
    ]
    if threads <= 1 or len(jobs) == 1:
        results = [_enumerate_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_enumerate_chunk, jobs))
    count = sum(c for c, _ in results)
    survivors = [rows for _, rs in results for rows in rs]
    return count, survivors


# --- rules-to-models round trip --------------------------------------------


def check_round_trip(t: EntailmentTable) -> str | None:
    """None if the canonical model is strong and reproduces ``t``, else the failed check."""
    m = build_klm_model(t)
    if not classify(m, t.classes).strong_cumulative:
        return "strong_cumulative"
    if EntailmentTable.of_model(m, t.classes) != t:
        return "re_tabulation"
    if verify_definability(t).status != "pass":
        return "definability"
    return None


def _check_tables(report: VerificationReport, tables: Iterable[EntailmentTable], tag: str) -> None:
    for t in tables:
        _bump(report.counts, f"{tag}_tables")
        if not t.is_system_c:
            report.fail(f"{tag}_audit", class_pairs=[list(p) for p in t.pairs])
            continue
        problem = check_round_trip(t)
        if problem:
            report.fail(f"{tag}_{problem}", class_pairs=[list(p) for p in t.pairs])
        else:
            _bump(report.counts, f"{tag}_round_trip_ok")


def random_seed_pairs(classes: ClassIndex, rng: random.Random, max_seeds: int = 3) -> list[tuple[int, int]]:
    n = len(classes)
    return [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(1, max_seeds))]


def _check_models(report: VerificationReport, sig_sizes, logic, samples, rng, tag) -> None:
    params = ModelParams(max_states=5)
    for i in range(samples):
        sig = sig_sizes[i % len(sig_sizes)]
        classes = enumerate_classes(sig, logic)
        gen = generate_random_model(sig, logic, params, rng)
        _bump(report.counts, f"{tag}_models")
        _bump(report.counts, f"{tag}_rejections", gen.rejections)
        t = EntailmentTable.of_model(gen.model, classes)
        if audit(t).passed:
            _bump(report.counts, f"{tag}_models_audit_ok")
        else:
            from .jsonio import model_to_json

            report.fail(f"{tag}_model_audit", model=model_to_json(gen.model))


def _signature(n: int) -> Signature:
    names = ("p", "q", "r", "s")
    if not 1 <= n <= len(names):
        raise CapacityError(f"unsupported signature size {n}")
    return Signature(names[:n])


def verify_pdl_representation(
    n: int,
    exhaustive: bool = False,
    samples: int = DEFAULT_TABLE_SAMPLES,
    model_samples: int = DEFAULT_MODEL_SAMPLES,
    seed: int = 0,
    threads: int = 1,
) -> VerificationReport:
    """Cumulative PDL relations coincide with System C relations over ``n`` variables."""
    started = time.perf_counter()
    if exhaustive and n != 1:
        raise CapacityError("exhaustive PDL verification is only supported for n=1")
    if n > 2:
        raise CapacityError("PDL verification supports n <= 2")
    sig = _signature(n)
    classes = enumerate_classes(sig, Logic.PDL)
    rng = random.Random(seed)
    report = VerificationReport(
        "pdl-rep",
        {"n": n, "logic": "PDL", "classes": len(classes), "mode": "exhaustive" if exhaustive else "sampled",
         "samples": None if exhaustive else samples, "model_samples": model_samples},
        seed=seed,
    )
    if exhaustive:
        count, survivors = enumerate_system_c(classes, threads)
        report.counts["candidates"] = count
        report.counts["system_c"] = len(survivors)
        _check_tables(report, (EntailmentTable(classes, rows) for rows in survivors), "rules")
    else:
        tables = (close(random_seed_pairs(classes, rng), classes) for _ in range(samples))
        _check_tables(report, tables, "rules")
    sizes = [_signature(k) for k in range(1, n + 1)]
    _check_models(report, sizes, Logic.PDL, model_samples, rng, "cumulative")
    report.ms = (time.perf_counter() - started) * 1000
    return report


def verify_tpl_representation(
    n: int,
    exhaustive: bool | None = None,
    samples: int = DEFAULT_TABLE_SAMPLES,
    model_samples: int = DEFAULT_MODEL_SAMPLES,
    seed: int = 0,
    threads: int = 1,
) -> VerificationReport:
    """Asymmetric TPL, cumulative TPL/CPL and System C TPL/CPL relations coincide."""
    started = time.perf_counter()
    if n > 2:
        raise CapacityError("TPL verification supports n <= 2")
    if exhaustive is None:
        exhaustive = n == 1
    if exhaustive and n != 1:
        raise CapacityError("exhaustive TPL enumeration is only supported for n=1")
    sig = _signature(n)
    tpl = enumerate_classes(sig, Logic.TPL)
    cpl = enumerate_classes(sig, Logic.CPL)
    bij = tpl_cpl_bijection(sig)
    inverse = [0] * len(bij)
    for i, j in enumerate(bij):
        inverse[j] = i
    rng = random.Random(seed)
    report = VerificationReport(
        "tpl-rep",
        {"n": n, "logic": "TPL/CPL", "classes": len(tpl), "mode": "exhaustive" if exhaustive else "sampled",
         "samples": None if exhaustive else samples, "model_samples": model_samples},
        seed=seed,
    )
    counts = report.counts

    # (i) asymmetric TPL models agree with their CPL lowerings; lift/lower round trip
    asym = ModelParams(max_states=5, require=frozenset({"asymmetric_model"}))
    for _ in range(model_samples):
        m = generate_random_model(sig, Logic.TPL, asym, rng).model
        low = lower_tpl_to_cpl(m)
        _bump(counts, "asymmetric_models")
        lhs = EntailmentTable.of_model(m, tpl).rows
        rhs = EntailmentTable.of_model(low, cpl).rows
        if map_rows(lhs, bij) != rhs:
            from .jsonio import model_to_json

            report.fail("lowering_tabulation", model=model_to_json(m))
        elif lift_cpl_to_tpl(low, "flatten") != m:
            report.fail("lift_lower_round_trip")
        else:
            _bump(counts, "asymmetric_models_ok")

    # (ii) strong cumulative CPL models lift without changing the relation
    strong = ModelParams(max_states=5, require=frozenset({"strong_cumulative"}), label_density=0.4)
    lift_samples = max(1, model_samples // 5)
    for _ in range(lift_samples):
        m = generate_random_model(sig, Logic.CPL, strong, rng).model
        _bump(counts, "strong_cpl_models")
        base = EntailmentTable.of_model(m, cpl).rows
        modes = ["flatten"] + (["singleton"] if all(lab.bit_count() == 1 for lab in m.labels) else [])
        ok = True
        for mode in modes:
            lifted = lift_cpl_to_tpl(m, mode)
            if map_rows(EntailmentTable.of_model(lifted, tpl).rows, bij) != base:
                report.fail("lift_tabulation", mode=mode)
                ok = False
            if lower_tpl_to_cpl(lifted) != m:
                report.fail("lower_lift_round_trip", mode=mode)
                ok = False
        if ok:
            _bump(counts, "strong_cpl_models_ok")

    # (iii) System C relations correspond under P(V) <-> V
    if exhaustive:
        c_tpl, s_tpl = enumerate_system_c(tpl, threads)
        c_cpl, s_cpl = enumerate_system_c(cpl, threads)
        counts.update(tpl_candidates=c_tpl, cpl_candidates=c_cpl, tpl_system_c=len(s_tpl), cpl_system_c=len(s_cpl))
        if sorted(map_rows(r, bij) for r in s_tpl) != sorted(s_cpl):
            report.fail("system_c_bijection")
        cpl_tables = [EntailmentTable(cpl, rows) for rows in s_cpl]
    else:
        cpl_tables = []
        for _ in range(samples):
            seeds = random_seed_pairs(tpl, rng)
            t_tpl = close(seeds, tpl)
            t_cpl = close([(bij[a], bij[b]) for a, b in seeds], cpl)
            _bump(counts, "closures")
            if map_rows(t_tpl.rows, bij) != t_cpl.rows:
                report.fail("closure_bijection", seeds=[list(s) for s in seeds])
            else:
                _bump(counts, "closures_ok")
            cpl_tables.append(t_cpl)

    # System C CPL relation -> canonical strong CPL model -> flattened asymmetric TPL model
    for t in cpl_tables:
        _bump(counts, "cpl_tables")
        m = build_klm_model(t)
        klass = classify(m, cpl)
        lifted = lift_cpl_to_tpl(m, "flatten")
        if not klass.strong_cumulative:
            report.fail("cpl_canonical_strong", class_pairs=[list(p) for p in t.pairs])
        elif EntailmentTable.of_model(m, cpl) != t:
            report.fail("cpl_canonical_round_trip", class_pairs=[list(p) for p in t.pairs])
        elif not classify(lifted, tpl).asymmetric_model:
            report.fail("flattened_asymmetric", class_pairs=[list(p) for p in t.pairs])
        elif map_rows(EntailmentTable.of_model(lifted, tpl).rows, bij) != t.rows:
            report.fail("flattened_tabulation", class_pairs=[list(p) for p in t.pairs])
        else:
            _bump(counts, "cpl_tables_ok")

    # (iv) cumulative TPL models satisfy System C
    _check_models(report, [sig], Logic.TPL, model_samples, rng, "tpl_cumulative")
    report.ms = (time.perf_counter() - started) * 1000
    return report
