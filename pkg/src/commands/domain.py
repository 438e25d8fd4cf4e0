#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import argparse
from typing import Any, Dict

from backend.algebra import to_encoding
from .common import add_json_flag, add_problem_argument, decimal, prepared, print_json
from .registry import register_command


def configure(parser:argparse.ArgumentParser):
    add_problem_argument(parser)
    add_json_flag(parser)


def run(args:argparse.Namespace) -> int:
    _, dom = prepared(args.file)
    doc:Dict[str, Any] = {
        "kind": dom.kind,
        "axes": [
            {"axis": i + 1, "mu_min": to_encoding(lo), "mu_max": to_encoding(hi), "mu_min_decimal": decimal(lo), "mu_max_decimal": decimal(hi)}
            for i, (lo, hi) in enumerate(zip(dom.mu_min, dom.mu_max))
        ],
        "T_apex": None if dom.T_apex is None else to_encoding(dom.T_apex),
        "T": str(dom.T),
    }
    if args.json:
        print_json(doc)
        return 0
    for ax in doc["axes"]:
        print(f"axis {ax['axis']}: mu_min = {ax['mu_min']} ≈ {ax['mu_min_decimal']}, mu_max = {ax['mu_max']} ≈ {ax['mu_max_decimal']}")
    if dom.T_apex is not None:
        print(f"T_apex = {doc['T_apex']} ≈ {decimal(dom.T_apex)}")
    print(f"T = {dom.T} ≈ {decimal(dom.T)}")
    return 0


register_command(__name__, configure, run, help="compute the μ extrema and the time horizon", order=2)
