#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import argparse
import logging
import pathlib as pl
import time
from typing import Any, Dict, List, Optional

from backend.certify import certify, certificate_summary
from backend.engine import CsvLayerWriter, run as run_scheme
from backend.errors import CertificateRefused
from backend.planner import plan
from backend.problem import problem_hash
from backend.settings import SETTINGS
from .common import add_problem_argument, prepared, print_json, write_json
from .registry import register_command


log = logging.getLogger(__name__)


def configure(parser:argparse.ArgumentParser):
    add_problem_argument(parser)
    parser.add_argument('--backend', choices=['exact', 'dyadic'], default=None, help="arithmetic backend (default from config)")
    parser.add_argument('--out', type=pl.Path, default=None, help="output directory (default: the user data directory)")
    parser.add_argument('--blocks', type=int, default=None, help="row blocks per layer")
    parser.add_argument('--workers', type=int, default=None, help="threads working on the blocks")


def run(args:argparse.Namespace) -> int:
    started = time.perf_counter()
    p, dom = prepared(args.file)
    backend = args.backend or SETTINGS.solver['backend']
    out:pl.Path = args.out or SETTINGS.default_output_dir() / problem_hash(p)[:12]
    out.mkdir(parents=True, exist_ok=True)
    grid, budget = plan(p, dom)
    planned = time.perf_counter()

    written:List[str] = []
    layers_path = out / 'layers.csv'
    report:Dict[str, Any] = {
        "command": ["solve", str(args.file), "--backend", backend, "--out", str(out)],
        "backend": backend,
        "files": written,
        "certificate": None,
    }
    certificate:Optional[Dict[str, Any]] = None
    try:
        trace = run_scheme(p, grid, backend, keep='last', observers=[CsvLayerWriter(layers_path)], blocks=args.blocks, workers=args.workers)
        written.append(str(layers_path))
        certificate = certify(trace, grid, budget, p.precision_a, problem_hash(p), p.kind, p.has_source).to_document()
        written.append(str(write_json(certificate, out / 'certificate.json')))
        report["certificate"] = certificate_summary(certificate, SETTINGS.solver['decimal_digits'])
    except CertificateRefused as e:
        report["refused"] = str(e)
        raise
    finally:
        if layers_path.exists() and str(layers_path) not in written:
            written.append(str(layers_path))
        report["timings"] = {"plan_s": round(planned - started, 3), "total_s": round(time.perf_counter() - started, 3)}
        report_path = out / 'report.json'
        written.append(str(report_path))
        write_json(report, report_path)
    print_json(report)
    return 0


register_command(__name__, configure, run, help="run the scheme and emit layers.csv, certificate.json and report.json", order=4)
