#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import argparse
import json
from fractions import Fraction

import pandas as pd
from celery import group

from backend.certify import convergence_table, exact_oracle, successive_ratios
from backend.errors import SolverRuntimeError
from backend.jobqueue import convergence_level
from backend.planner import plan
from backend.problem import problem_to_document
from backend.settings import SETTINGS
from .common import add_json_flag, add_problem_argument, prepared
from .registry import register_command


def configure(parser:argparse.ArgumentParser):
    add_problem_argument(parser)
    parser.add_argument('--levels', type=int, default=3, help="number of levels")
    parser.add_argument('--start', type=int, default=None, help="coarsest N (default: the planned N)")
    parser.add_argument('--backend', choices=['exact', 'dyadic'], default=None)
    parser.add_argument('--queue', action='store_true', help="compute the levels as celery tasks")
    add_json_flag(parser)


def _queued(p, levels:range, backend:str) -> pd.DataFrame:
    document = problem_to_document(p)
    results = group(convergence_level.s(document, N, backend) for N in levels)().get()
    rows = [{"N": r["N"], "h": Fraction(r["h"]), "L": r["L"], "error": Fraction(r["error"])} for r in sorted(results, key=lambda r: r["N"])]
    df = pd.DataFrame(rows, columns=["N", "h", "L", "error"])
    df["ratio"] = successive_ratios(list(df["error"]))
    return df


def run(args:argparse.Namespace) -> int:
    p, dom = prepared(args.file)
    start = args.start if args.start is not None else plan(p, dom)[0].N
    backend = args.backend or SETTINGS.solver['backend']
    if args.queue:
        if exact_oracle(p) is None:
            raise SolverRuntimeError("--queue needs a problem with an exact-solution oracle")
        df = _queued(p, range(start, start + args.levels), backend)
    else:
        df = convergence_table(p, dom, args.levels, start, backend)
    digits = SETTINGS.solver['decimal_digits']
    if args.json:
        records = [{"N": int(r.N), "h": str(r.h), "L": int(r.L), "error": str(r.error), "ratio": None if pd.isna(r.ratio) else float(r.ratio)}
                   for r in df.itertuples()]
        print(json.dumps(records, indent=2))
        return 0
    print(df.to_string(index=False, formatters={
        "h": str,
        "error": lambda e: f"{float(e):.{digits}e}",
        "ratio": lambda r: "" if pd.isna(r) else f"{r:.3f}",
    }))
    return 0


register_command(__name__, configure, run, help="sL2 errors over successive grid levels", order=6)
