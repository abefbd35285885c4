#!/usr/bin/env python3
"""Tabulate the definable classes per logic and signature size, with defining formulas.

Example:
    python3 scripts/enumerate_classes.py --n 2 --logic pdl --formulas
"""
import argparse
import time

from teamklm.families import enumerate_classes, synthesize
from teamklm.semantics import Logic, models_of
from teamklm.syntax import Signature, size, to_text


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[1, 2])
    parser.add_argument("--logic", choices=["cpl", "tpl", "pdl"], nargs="+", default=["cpl", "tpl", "pdl"])
    parser.add_argument("--formulas", action="store_true", help="list every class with its formula")
    args = parser.parse_args()

    for n in args.n:
        sig = Signature(("p", "q", "r", "s")[:n])
        for name in args.logic:
            logic = Logic.coerce(name)
            start = time.perf_counter()
            classes = enumerate_classes(sig, logic)
            formulas = [synthesize(f, sig, logic) for f in classes.families]
            assert all(models_of(g, sig, logic) == f for g, f in zip(formulas, classes.families))
            elapsed = time.perf_counter() - start
            largest = max(size(g) for g in formulas)
            print(f"{logic.value} n={n}: {len(classes)} classes, largest formula {largest} nodes ({elapsed:.2f} s)")
            if args.formulas:
                for i, g in enumerate(formulas):
                    print(f"  {i:4d}  {to_text(g)}")


if __name__ == "__main__":
    main()
