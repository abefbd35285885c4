"""Command-line front end.

Exit codes: 0 success / property holds, 1 property fails or a check found
a counterexample, 2 bad input or usage.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import jsonio
from .families import SynthesisError, enumerate_classes, synthesize
from .jsonio import InputError, dumps
from .relmodel import classify, entails, min_models
from .representation import default_threads, verify_pdl_representation, verify_tpl_representation
from .semantics import PROPERTIES, Logic, check_property, eval_classical, eval_team, models_of
from .syntax import Signature, is_pl, parse, to_text
from .systemc import EntailmentTable, NotSystemCError, audit, build_klm_model, close, verify_definability


class UsageError(Exception):
    pass


def _load_json(arg: str):
    """Inline JSON, or a path to a JSON file."""
    text = arg
    if not arg.lstrip().startswith(("{", "[", '"')):
        path = Path(arg)
        if not path.exists():
            raise UsageError(f"no such file: {arg}")
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from None


def _sig(args) -> Signature:
    if not args.sig:
        raise UsageError("--sig is required")
    try:
        return Signature.parse(args.sig)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _logic(args) -> Logic:
    return Logic.coerce(args.logic)


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(dumps(payload))
    else:
        print("\n".join(lines))


# --- subcommands -----------------------------------------------------------


def cmd_eval(args) -> int:
    sig, logic = _sig(args), _logic(args)
    f = parse(args.formula, sig)
    if args.team is None:
        raise UsageError("--team is required")
    data = _load_json(args.team)
    if logic is Logic.CPL:
        if isinstance(data, list) and len(data) == 1:
            data = data[0]
        value = eval_classical(sig, jsonio.valuation_from_json(sig, data), f)
    else:
        value = eval_team(sig, jsonio.team_from_json(sig, data), f, logic)
    _emit(args, {"formula": to_text(f), "logic": logic.value, "value": value}, ["true" if value else "false"])
    return 0 if value else 1


def cmd_models(args) -> int:
    sig, logic = _sig(args), _logic(args)
    f = parse(args.formula, sig)
    bits = models_of(f, sig, logic)
    doc = jsonio.family_to_json(sig, bits, logic)
    doc["count"] = bits.bit_count()
    props = {}
    if logic.team_based:
        for which in PROPERTIES:
            props[which] = check_property(f, sig, logic, which).holds
        doc["properties"] = props
    lines = [f"{bits.bit_count()} models of {to_text(f)} ({logic.value})"]
    lines += [json.dumps(t) for t in doc["teams"]]
    lines += [f"{k}: {v}" for k, v in props.items()]
    _emit(args, doc, lines)
    return 0


def cmd_families(args) -> int:
    sig, logic = _sig(args), _logic(args)
    classes = enumerate_classes(sig, logic)
    names = jsonio.class_names(classes)
    length = sig.num_valuations if logic is Logic.CPL else 1 << sig.num_valuations
    rows = [
        {"index": i, "bits": jsonio._bitstring(fam, length), "size": fam.bit_count(), "formula": names[i]}
        for i, fam in enumerate(classes.families)
    ]
    _emit(
        args,
        {"signature": list(sig.vars), "logic": logic.value, "count": len(rows), "classes": rows},
        [f"{len(rows)} classes"] + [f"{r['index']:4d}  {r['bits']}  {r['formula']}" for r in rows],
    )
    return 0


def cmd_synth(args) -> int:
    logic = _logic(args)
    sig = _sig(args) if args.sig else None
    sig, bits = jsonio.family_from_json(_load_json(args.family), sig, logic)
    try:
        f = synthesize(bits, sig, logic)
    except SynthesisError as exc:
        _emit(args, {"status": "fail", "error": str(exc)}, [f"not definable: {exc}"])
        return 1
    assert models_of(f, sig, logic) == bits
    _emit(args, {"status": "pass", "formula": to_text(f)}, [to_text(f)])
    return 0


def _model(args):
    if not args.model:
        raise UsageError("--model is required")
    return jsonio.model_from_json(_load_json(args.model))


def cmd_classify(args) -> int:
    m = _model(args)
    k = classify(m, enumerate_classes(m.sig, m.logic), star=args.star)
    payload = {"flags": k.flags(), "witnesses": k.witnesses, "star_skipped": k.star_skipped}
    _emit(args, payload, [f"{name}: {value}" for name, value in k.flags().items()])
    return 0 if k.cumulative else 1


def cmd_entail(args) -> int:
    m = _model(args)
    f, g = parse(args.antecedent, m.sig), parse(args.consequent, m.sig)
    value = entails(m, f, g)
    mm = min_models(m, f)
    payload = {"value": value, "min_models": jsonio.family_to_json(m.sig, mm, m.logic)}
    _emit(args, payload, ["true" if value else "false"])
    return 0 if value else 1


def _relation(args) -> EntailmentTable:
    if not args.relation:
        raise UsageError("--relation is required")
    classes, pairs = jsonio.relation_from_json(_load_json(args.relation))
    return EntailmentTable.from_pairs(classes, pairs)


def cmd_audit(args) -> int:
    t = _relation(args)
    report = audit(t, enable_or=args.or_rule)
    doc = report.to_dict()
    lines = [
        f"{name:4s} {r['status']}" + (f"  ({r['violations']} violations, witness {r['witness']})" if r["witness"] else "")
        for name, r in doc["rules"].items()
    ]
    _emit(args, doc, lines)
    return 0 if report.passed else 1


def cmd_close(args) -> int:
    seeds = _relation(args)
    t = close(seeds.pairs, seeds.classes)
    doc = jsonio.table_to_json(t)
    _emit(args, doc, [f"{len(t.pairs)} pairs"] + [f"{a} |~ {b}" for a, b in t.pairs])
    return 0


def cmd_klm_build(args) -> int:
    t = _relation(args)
    try:
        m = build_klm_model(t)
    except NotSystemCError as exc:
        _emit(args, {"status": "fail", "error": str(exc)}, [str(exc)])
        return 1
    doc = jsonio.model_to_json(m)
    k = classify(m, t.classes)
    lines = [f"{len(m.states)} states, {len(m.relation)} edges, strong cumulative: {k.strong_cumulative}"]
    _emit(args, doc, lines)
    return 0


def cmd_verify(args) -> int:
    threads = args.threads or default_threads()
    if args.theorem == "definability":
        t = _relation(args)
        try:
            report = verify_definability(t)
        except NotSystemCError as exc:
            _emit(args, {"theorem": "definability", "status": "fail", "error": str(exc)}, [str(exc)])
            return 1
        doc = {"theorem": "definability", **report.to_dict()}
        _emit(args, doc, [f"definability: {report.status}"])
        return 0 if report.status == "pass" else 1
    if args.n is None:
        raise UsageError("--n is required")
    kwargs = {"seed": args.seed, "threads": threads}
    if args.samples is not None:
        kwargs["samples"] = args.samples
        kwargs["model_samples"] = args.samples
    if args.theorem == "rep-pdl":
        report = verify_pdl_representation(args.n, exhaustive=args.exhaustive, **kwargs)
    else:
        report = verify_tpl_representation(args.n, exhaustive=args.exhaustive or None, **kwargs)
    print(f"elapsed {report.ms:.0f} ms", file=sys.stderr)
    doc = report.to_dict()
    lines = [f"{report.theorem}: {report.status}"] + [f"  {k}: {v}" for k, v in sorted(report.counts.items())]
    if report.counterexample:
        lines.append(f"  counterexample: {json.dumps(report.counterexample)}")
    _emit(args, doc, lines)
    return 0 if report.status == "pass" else 1


# --- argument parsing ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--logic", choices=["cpl", "tpl", "pdl", "CPL", "TPL", "PDL"], default="pdl")
    common.add_argument("--sig", help="ordered variable list, e.g. p,q,r")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="teamklm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula on a team")
    p.add_argument("--team", help="team JSON (valuation object for cpl)")
    p.add_argument("formula")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("models", parents=[common], help="all models of a formula")
    p.add_argument("formula")
    p.set_defaults(func=cmd_models)

    p = sub.add_parser("families", parents=[common], help="list definable classes")
    p.set_defaults(func=cmd_families)

    p = sub.add_parser("synth", parents=[common], help="synthesize a formula for a family")
    p.add_argument("family", help="family JSON, inline or a path")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("classify-model", parents=[common], help="classify a relational model")
    p.add_argument("--model")
    p.add_argument("--star", action="store_true", help="also check the star property")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("entail", parents=[common], help="model-based entailment")
    p.add_argument("--model")
    p.add_argument("antecedent")
    p.add_argument("consequent")
    p.set_defaults(func=cmd_entail)

    for name, func, help_ in (
        ("audit", cmd_audit, "audit a relation against System C"),
        ("close", cmd_close, "least System C closure of seed pairs"),
        ("klm-build", cmd_klm_build, "canonical model of a System C relation"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--relation")
        if name == "audit":
            p.add_argument("--or", dest="or_rule", action="store_true", help="also check the Or rule")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", parents=[common], help="run a theorem verifier")
    p.add_argument("theorem", choices=["rep-pdl", "rep-tpl", "definability"])
    p.add_argument("--n", type=int, choices=[1, 2])
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--samples", type=int)
    p.add_argument("--relation")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, InputError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
