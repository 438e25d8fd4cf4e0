#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import argparse

from backend.problem import load_problem, validate
from .common import add_json_flag, add_problem_argument, print_json
from .registry import register_command


def configure(parser:argparse.ArgumentParser):
    add_problem_argument(parser)
    add_json_flag(parser)


def run(args:argparse.Namespace) -> int:
    report = validate(load_problem(args.file))
    if args.json:
        print_json(report.model_dump())
    else:
        for check in report.checks:
            status = "PASS" if check.passed else ("WARN" if check.severity == 'warning' else "FAIL")
            print(f"{status}  {check.name}" + (f"  ({check.detail})" if check.detail else ""))
        if report.strongly_dissipative is not None:
            print(f"strongly dissipative: {'yes' if report.strongly_dissipative else 'no'}")
        print("valid" if report.ok else f"invalid: {len(report.failures)} failed check(s)")
    return 0 if report.ok else 1


register_command(__name__, configure, run, help="check a problem file against the structural conditions", order=1)
