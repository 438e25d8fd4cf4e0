#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import argparse
from fractions import Fraction

from backend.planner import plan
from .common import add_json_flag, add_problem_argument, decimal, prepared, print_json
from .registry import register_command


def configure(parser:argparse.ArgumentParser):
    add_problem_argument(parser)
    add_json_flag(parser)


def run(args:argparse.Namespace) -> int:
    p, dom = prepared(args.file)
    grid, budget = plan(p, dom)
    if args.json:
        print_json({"plan": grid.to_document(), "budget": budget.to_document()})
        return 0
    for name, value in grid.to_document().items():
        if name == 'diagnostics':
            for key, bound in value.items():
                print(f"{key:>22} = {bound}")
        elif isinstance(value, str):
            print(f"{name:>22} = {value} ≈ {decimal(Fraction(value))}")
        else:
            print(f"{name:>22} = {value}")
    print()
    for name, value in budget.to_document().items():
        print(f"{name:>22} = {value} ≈ {decimal(Fraction(value))}")
    print(f"{'target 1/a':>22} = 1/{p.precision_a}")
    return 0


register_command(__name__, configure, run, help="print the grid plan and the error budget", order=3)
