#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import argparse
import json
import pathlib as pl
from fractions import Fraction

from backend.certify import Interpolant, interp_eval, restrict_H, verify_certificate
from backend.engine import read_trace_csv
from backend.errors import GridMismatchError, ProblemParseError
from backend.planner import GridPlan, plan
from backend.problem import problem_hash
from .common import add_problem_argument, decimal, parse_rational, prepared
from .registry import register_command


def configure(parser:argparse.ArgumentParser):
    add_problem_argument(parser)
    parser.add_argument('trace', type=pl.Path, help="layers.csv written by solve")
    parser.add_argument('t', help="time, a rational such as 1/8")
    parser.add_argument('x', nargs='+', help="space coordinates, one per axis")
    parser.add_argument('--certificate', type=pl.Path, default=None, help="certificate.json of the run, for the rounding error bar")


def run(args:argparse.Namespace) -> int:
    p, dom = prepared(args.file)
    t = parse_rational(args.t, "t")
    x = [parse_rational(v, f"x{i + 1}") for i, v in enumerate(args.x)]

    error_bar = None
    backend = 'exact'
    if args.certificate is not None:
        try:
            with open(args.certificate, 'r', encoding='utf8') as f:
                cert = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ProblemParseError(f"cannot read certificate {args.certificate}: {e}") from e
        if cert.get("problem_hash") != problem_hash(p):
            raise GridMismatchError("the certificate belongs to a different problem")
        if not verify_certificate(cert):
            raise GridMismatchError("the certificate does not verify")
        backend = cert.get("backend", backend)
        error_bar = Fraction(cert["budgets"]["rounding_term"])
        # the trace was written on the certified grid, whatever the current configuration plans
        grid = GridPlan.from_document(cert["plan"])
    else:
        grid, _ = plan(p, dom)

    itp = Interpolant(read_trace_csv(args.trace, grid, p.m, backend))
    if p.kind == 'cauchy':
        itp = restrict_H(itp, dom)
    value = interp_eval(itp, t, x)
    for k, v in enumerate(value):
        print(f"u{k + 1} = {v} ≈ {decimal(v)}")
    if error_bar is not None:
        print(f"rounding error bar ± {error_bar} ≈ {decimal(error_bar)}")
    return 0


register_command(__name__, configure, run, help="evaluate the interpolant of a trace at (t, x)", order=5)
