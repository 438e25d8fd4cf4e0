#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import functools
import hashlib
import json
import logging
import pathlib as pl
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import hjson
import jsonschema

from backend.algebra import from_encoding, to_encoding
from backend.errors import ProblemParseError
from backend.linalg import ExactMatrix
from .model import BoundaryPair, HyperbolicProblem, PolyData


THIS_DIR = pl.Path(__file__).parent.resolve()

log = logging.getLogger(__name__)


@functools.lru_cache(maxsize=1)
def problem_validator() -> jsonschema.Draft202012Validator:
    with open(THIS_DIR/'problem.schema.json', 'r', encoding='utf8') as f:
        return jsonschema.Draft202012Validator(json.load(f))


def _json_path(parts:Sequence[Any]) -> str:
    return "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in parts)


def _rational(value:Any, path:str) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise ProblemParseError(f"malformed rational {value!r}: {e}", path=path) from e


def _matrix(rows:List[List[Any]], path:str, cols:int=0) -> ExactMatrix:
    try:
        return ExactMatrix.from_rows([[from_encoding(e) for e in row] for row in rows], cols=cols)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise ProblemParseError(f"malformed matrix: {e}", path=path) from e


def _polydata(polys:List[List[Dict[str, Any]]], m:int, time_dependent:bool, path:str) -> PolyData:
    components = []
    for k, poly in enumerate(polys):
        components.append([(_rational(term['coef'], f"{path}[{k}][{i}].coef"), term['exps']) for i, term in enumerate(poly)])
    try:
        return PolyData.from_terms(m, components, time_dependent)
    except ValueError as e:
        raise ProblemParseError(str(e), path=path) from e


def problem_from_document(doc:Dict[str, Any]) -> HyperbolicProblem:
    errors = sorted(problem_validator().iter_errors(doc), key=lambda err: list(err.absolute_path))
    if errors:
        first = errors[0]
        detail = "; ".join(f"{_json_path(err.absolute_path)}: {err.message}" for err in errors)
        raise ProblemParseError(f"problem document does not match the schema: {detail}", path=_json_path(first.absolute_path))

    m, n = doc['m'], doc['n']
    boundary: Optional[tuple] = None
    if doc.get('boundary') is not None:
        boundary = tuple(
            BoundaryPair(_matrix(pair['left'], f"$.boundary[{i}].left", cols=n), _matrix(pair['right'], f"$.boundary[{i}].right", cols=n))
            for i, pair in enumerate(doc['boundary'])
        )
    f = _polydata(doc['f'], m, True, "$.f") if doc.get('f') is not None else None
    T = _rational(doc['T'], "$.T") if doc.get('T') is not None else None
    M = _rational(doc['M'], "$.M") if doc.get('M') is not None else None
    try:
        return HyperbolicProblem(
            kind=doc['kind'],
            m=m,
            n=n,
            A=_matrix(doc['A'], "$.A"),
            B=tuple(_matrix(b, f"$.B[{i}]") for i, b in enumerate(doc['B'])),
            phi=_polydata(doc['phi'], m, False, "$.phi"),
            f=f,
            boundary=boundary,
            precision_a=doc['precision_a'],
            T_override=T,
            M=M,
        )
    except ValueError as e:
        raise ProblemParseError(f"inconsistent problem: {e}") from e


def parse_problem(text:str) -> HyperbolicProblem:
    """Parse an hjson (or plain JSON) problem document."""
    try:
        doc = hjson.loads(text)
    except hjson.HjsonDecodeError as e:
        raise ProblemParseError(e.msg, line=e.lineno, column=e.colno) from e
    if not isinstance(doc, dict):
        raise ProblemParseError("problem document must be an object", path="$")
    return problem_from_document(doc)


def load_problem(path:pl.Path) -> HyperbolicProblem:
    path = pl.Path(path)
    try:
        text = path.read_text(encoding='utf8')
    except OSError as e:
        raise ProblemParseError(f"cannot read {path}: {e}") from e
    log.debug(f"load_problem({path=})")
    return parse_problem(text)


def _matrix_document(X:ExactMatrix) -> List[List[Any]]:
    return [[to_encoding(e) for e in row] for row in X.to_rows()]


def _poly_document(d:PolyData) -> List[List[Dict[str, Any]]]:
    return [[{"coef": str(c), "exps": list(e)} for c, e in comp] for comp in d.components]


def problem_to_document(p:HyperbolicProblem) -> Dict[str, Any]:
    doc:Dict[str, Any] = {
        "kind": p.kind,
        "m": p.m,
        "n": p.n,
        "A": _matrix_document(p.A),
        "B": [_matrix_document(b) for b in p.B],
        "phi": _poly_document(p.phi),
        "precision_a": p.precision_a,
    }
    if p.f is not None:
        doc["f"] = _poly_document(p.f)
    if p.boundary is not None:
        doc["boundary"] = [{"left": _matrix_document(pair.left), "right": _matrix_document(pair.right)} for pair in p.boundary]
    if p.T_override is not None:
        doc["T"] = str(p.T_override)
    if p.M is not None:
        doc["M"] = str(p.M)
    return doc


def canonical_json(doc:Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(',', ':'), ensure_ascii=True)


def problem_hash(p:HyperbolicProblem) -> str:
    return hashlib.sha256(canonical_json(problem_to_document(p)).encode('ascii')).hexdigest()
