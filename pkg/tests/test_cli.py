#pylint: disable=missing-docstring, line-too-long, trailing-whitespace, unused-argument
import json

import pytest

from app import build_parser, main
from backend.certify import verify_certificate
from commands import eval as eval_command, registry
from conftest import ADVECTION, BOUNDARY, document, term


LINEAR = document(ADVECTION, phi=[[term(1, 1, 0)], [term(1, 0, 1)]], precision_a=1)
CONSTANT = document(ADVECTION, phi=[[term(1, 0, 0)], [term(2, 0, 0)]])


def test_commands_register_in_order():
    assert list(registry.compile_registry()['name']) == ["validate", "domain", "plan", "solve", "eval", "convergence"]
    assert registry.get_entry("solve")["module"] == "commands.solve"
    with pytest.raises(KeyError):
        registry.get_entry("draw")


def test_parser_rejects_unknown_commands():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["draw"])


def test_validate(write_problem, capsys):
    assert main(["validate", str(write_problem(ADVECTION))]) == 0
    out = capsys.readouterr().out
    assert "PASS  A positive definite" in out
    assert out.rstrip().endswith("valid")


def test_validate_reports_failures(write_problem, capsys):
    path = write_problem(document(ADVECTION, A=[[1, 0], [0, -1]]))
    assert main(["validate", str(path)]) == 1
    out = capsys.readouterr().out
    assert "FAIL  A positive definite" in out and "invalid:" in out


def test_validate_json(write_problem, capsys):
    assert main(["validate", "--json", str(write_problem(BOUNDARY))]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["strongly_dissipative"] is True
    assert any(c["severity"] == "warning" for c in report["checks"])


def test_parse_errors_exit_2(write_problem, tmp_path, capsys):
    assert main(["validate", str(write_problem(document(ADVECTION, A=[[1, 0], [0, "1/0"]])))]) == 2
    assert "error:" in capsys.readouterr().err
    assert main(["validate", str(tmp_path / "absent.json")]) == 2


def test_domain(write_problem, capsys):
    assert main(["domain", str(write_problem(ADVECTION))]) == 0
    out = capsys.readouterr().out
    assert "axis 2: mu_min = -1/2" in out
    assert "T = 1/2 ≈ 0.500000" in out


def test_domain_json(write_problem, capsys):
    assert main(["domain", "--json", str(write_problem(ADVECTION))]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["T"] == "1/2" and doc["T_apex"] == "1/2"
    assert [(ax["mu_min"], ax["mu_max"]) for ax in doc["axes"]] == [("-1", "1"), ("-1/2", "1/2")]


def test_no_admissible_domain_exits_1(write_problem, capsys):
    path = write_problem(document(ADVECTION, B=[[[1, 0], [0, 2]], [["1/2", 0], [0, "-1/2"]]]))
    assert main(["domain", str(path)]) == 1
    assert "μ_min>0 on axis 1" in capsys.readouterr().err


def test_plan(write_problem, capsys):
    assert main(["plan", "--json", str(write_problem(ADVECTION))]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["plan"]["N"] == 7 and doc["plan"]["L"] == 192 and doc["plan"]["tau"] == "1/384"
    assert set(doc["budget"]) >= {"interpolation_term", "scheme_term", "rounding_term", "total"}
    assert main(["plan", str(write_problem(ADVECTION))]) == 0
    assert "target 1/a = 1/10" in capsys.readouterr().out


@pytest.fixture
def solved(write_problem, tmp_path, capsys):
    path = write_problem(LINEAR)
    out = tmp_path / "run"
    assert main(["solve", str(path), "--backend", "dyadic", "--out", str(out)]) == 0
    report = json.loads(capsys.readouterr().out)
    return path, out, report


def test_solve_writes_certified_outputs(solved):
    _, out, report = solved
    for name in ("layers.csv", "certificate.json", "report.json"):
        assert (out / name).exists()
    certificate = json.loads((out / "certificate.json").read_text(encoding='utf8'))
    assert verify_certificate(certificate)
    assert certificate["backend"] == "dyadic" and certificate["restriction"] == "H"
    assert report["certificate"]["target"] == "1"
    assert json.loads((out / "report.json").read_text(encoding='utf8'))["backend"] == "dyadic"


def test_solve_is_reproducible(solved, tmp_path, capsys):
    path, out, _ = solved
    again = tmp_path / "again"
    assert main(["solve", str(path), "--backend", "dyadic", "--out", str(again), "--blocks", "2", "--workers", "2"]) == 0
    for name in ("layers.csv", "certificate.json"):
        assert (out / name).read_bytes() == (again / name).read_bytes()


def test_eval_at_a_node(solved, capsys):
    path, out, _ = solved
    assert main(["eval", str(path), str(out / "layers.csv"), "0", "1/8", "1/8", "--certificate", str(out / "certificate.json")]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "u1 = 1/8 ≈ 0.125000"
    assert lines[1] == "u2 = 1/8 ≈ 0.125000"
    assert lines[2].startswith("rounding error bar ± ")


def test_eval_reads_the_grid_from_the_certificate(solved, monkeypatch, capsys):
    path, out, _ = solved
    def replanned(*_):
        raise AssertionError("eval planned again although the certificate records the grid")
    monkeypatch.setattr(eval_command, "plan", replanned)
    assert main(["eval", str(path), str(out / "layers.csv"), "0", "1/8", "1/8", "--certificate", str(out / "certificate.json")]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "u1 = 1/8 ≈ 0.125000"

def test_eval_outside_H(solved, capsys):
    path, out, _ = solved
    assert main(["eval", str(path), str(out / "layers.csv"), "1/2", "1/8", "1/2"]) == 3
    assert "outside H" in capsys.readouterr().err


def test_eval_rejects_a_foreign_certificate(solved, write_problem, capsys):
    _, out, _ = solved
    other = write_problem(document(LINEAR, precision_a=2), "other.json")
    assert main(["eval", str(other), str(out / "layers.csv"), "0", "1/8", "1/8", "--certificate", str(out / "certificate.json")]) == 3
    assert main(["eval", str(other), str(out / "layers.csv"), "one", "1/8", "1/8"]) == 2


def test_degenerate_boundary_run(write_problem, tmp_path, capsys):
    path = write_problem(document(BOUNDARY, T=0))
    out = tmp_path / "zero"
    assert main(["solve", str(path), "--backend", "exact", "--out", str(out)]) == 0
    certificate = json.loads((out / "certificate.json").read_text(encoding='utf8'))
    assert certificate["plan"]["L"] == 0 and certificate["restriction"] == "full_cylinder"
    assert verify_certificate(certificate)


def test_convergence(write_problem, capsys):
    path = write_problem(CONSTANT)
    assert main(["convergence", str(path), "--start", "2", "--levels", "2", "--backend", "exact", "--json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [(r["N"], r["error"], r["ratio"]) for r in rows] == [(2, "0", None), (3, "0", None)]
    assert main(["convergence", str(path), "--start", "2", "--levels", "2", "--backend", "exact"]) == 0
    assert "error" in capsys.readouterr().out


def test_convergence_on_the_queue(write_problem, eager_queue, capsys):
    path = write_problem(CONSTANT)
    assert main(["convergence", str(path), "--start", "2", "--levels", "2", "--backend", "exact", "--queue", "--json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["N"] for r in rows] == [2, 3]
    assert all(r["error"] == "0" for r in rows)


def test_queue_needs_an_oracle(write_problem, eager_queue, capsys):
    path = write_problem(BOUNDARY)
    assert main(["convergence", str(path), "--start", "2", "--levels", "2", "--queue"]) == 3
