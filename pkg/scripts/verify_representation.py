#!/usr/bin/env python3
"""Run every representation verifier and write one JSON report per run.

Example:
    python3 scripts/verify_representation.py --out reports --seed 0
"""
import argparse
import sys
from pathlib import Path

from teamklm.jsonio import dumps
from teamklm.representation import default_threads, verify_pdl_representation, verify_tpl_representation

RUNS = {
    "pdl-n1-exhaustive": lambda a: verify_pdl_representation(
        1, exhaustive=True, model_samples=a.models, seed=a.seed, threads=a.threads
    ),
    "pdl-n2-sampled": lambda a: verify_pdl_representation(
        2, samples=a.samples, model_samples=a.models, seed=a.seed, threads=a.threads
    ),
    "tpl-n1-exhaustive": lambda a: verify_tpl_representation(
        1, exhaustive=True, model_samples=a.models, seed=a.seed, threads=a.threads
    ),
    "tpl-n2-sampled": lambda a: verify_tpl_representation(
        2, samples=a.samples, model_samples=a.models, seed=a.seed, threads=a.threads
    ),
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("reports"))
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--samples", type=int, default=500, help="closures per sampled run")
    parser.add_argument("--models", type=int, default=1000, help="random models per run")
    parser.add_argument("--threads", type=int, default=default_threads())
    parser.add_argument("--only", choices=sorted(RUNS), action="append")
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    failed = 0
    for name in args.only or RUNS:
        report = RUNS[name](args)
        (args.out / f"{name}.json").write_text(dumps(report.to_dict()) + "\n")
        print(f"{name:20s} {report.status:5s} {report.ms / 1000:7.1f} s  {dict(sorted(report.counts.items()))}")
        failed += report.status != "pass"
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
