"""End-to-end driver behaviour, benchmark rows, report files, and the CLI."""

import csv
import os
import shutil

import pytest

import connsat.matrix
from connsat.cli import main
from connsat.driver import ProverConfig, load_problem, prove, run_benchmark
from connsat.proof import Proof, parse_proof
from connsat.report import write_report
from connsat.tptp import parse_text

PROBLEMS = os.path.join(os.path.dirname(__file__), os.pardir, "problems")

PROVABLE = ["units.p", "ex1.p", "ex4.p", "chain3.p", "fan2.p", "eq_demo.p"]
ENCODINGS = ["tableau", "matrix", "core", "hybrid"]


def _path(name):
    return os.path.join(PROBLEMS, name)


@pytest.mark.parametrize("encoding", ENCODINGS)
def test_corpus_statuses(encoding):
    for name in PROVABLE:
        cfg = ProverConfig(encoding=encoding)
        result = prove(load_problem(_path(name), cfg), cfg)
        assert result.status == "Theorem", (name, encoding, result.reason)
        assert result.proof is not None
    cfg = ProverConfig(encoding=encoding)
    result = prove(load_problem(_path("noproof.p"), cfg), cfg)
    if encoding in ("core", "hybrid"):
        assert result.status == "NoProof"
        assert result.reason == "NoProofExists"
    else:
        assert result.status == "GaveUp"
        assert "within" in result.reason
    assert result.proof is None


def test_theorem_results_carry_checked_proof_stats():
    cfg = ProverConfig(encoding="core")
    result = prove(load_problem(_path("ex1.p"), cfg), cfg)
    for key in ("steps", "conflicts", "decisions", "propagations", "wall_ms", "proof_size"):
        assert key in result.stats, key
    assert result.stats["proof_size"] == result.proof.size


def test_corrupted_decode_is_an_internal_error_not_a_theorem(monkeypatch):
    orig = connsat.matrix.MatrixEncoding._extract

    def broken(self, *args, **kwargs):
        good = orig(self, *args, **kwargs)
        return Proof(good.kind, good.copies, [], [])

    monkeypatch.setattr(connsat.matrix.MatrixEncoding, "_extract", broken)
    cfg = ProverConfig(encoding="matrix")
    problem = load_problem(_path("ex1.p"), cfg)
    with pytest.raises(RuntimeError, match="internal error: decoded proof failed checking"):
        prove(problem, cfg)


def test_tautologies_are_dropped_on_load(tmp_path):
    f = tmp_path / "taut.p"
    f.write_text(
        "cnf(junk, axiom, p(X) | q(a) | ~p(X)).\n"
        "cnf(goal, negated_conjecture, ~r(a)).\n"
        "cnf(fact, axiom, r(a)).\n"
    )
    prob = load_problem(str(f), ProverConfig())
    assert [c.name for c in prob.clauses] == ["goal", "fact"]
    assert "junk" not in prob.by_name


def test_equality_axioms_added_only_when_needed(tmp_path):
    prob = load_problem(_path("eq_demo.p"), ProverConfig())
    names = {c.name for c in prob.clauses}
    assert {"eq_reflexive", "eq_symmetric", "eq_transitive", "eq_pred_q"} <= names
    assert not any(n.startswith("eq_fun_") for n in names)  # only constants here

    prob = load_problem(_path("eq_demo.p"), ProverConfig(equality="ignore"))
    assert not any(c.name.startswith("eq_") for c in prob.clauses)

    prob = load_problem(_path("ex1.p"), ProverConfig())
    assert not any(c.name.startswith("eq_") for c in prob.clauses)


def test_equality_axioms_include_function_congruence(tmp_path):
    f = tmp_path / "eqf.p"
    f.write_text(
        "cnf(goal, negated_conjecture, ~p(g(a))).\n"
        "cnf(ab, axiom, a = b).\n"
        "cnf(fact, axiom, p(g(b))).\n"
    )
    cfg = ProverConfig(encoding="tableau")
    prob = load_problem(str(f), cfg)
    assert "eq_fun_g" in prob.by_name
    assert prove(prob, cfg).status == "Theorem"


def test_generated_axiom_names_step_around_collisions(tmp_path):
    f = tmp_path / "clash.p"
    f.write_text(
        "cnf(eq_reflexive, axiom, p(a)).\n"
        "cnf(goal, negated_conjecture, a != a).\n"
    )
    prob = load_problem(str(f), ProverConfig())
    assert "eq_reflexive_0" in prob.by_name


def test_empty_clause_input_is_a_degenerate_theorem():
    prob = parse_text("cnf(c, axiom, $false).")
    result = prove(prob, ProverConfig())
    assert result.status == "Theorem"
    assert result.proof.kind == "degenerate"
    assert result.stats["steps"] == 0


def test_nothing_left_to_refute_gives_up(tmp_path):
    f = tmp_path / "taut_only.p"
    f.write_text("cnf(t, axiom, p(a) | ~p(a)).\n")
    result = prove(load_problem(str(f), ProverConfig()), ProverConfig())
    assert result.status == "GaveUp"
    assert result.reason == "no clauses to refute"


def test_config_rejects_bad_values():
    with pytest.raises(ValueError):
        ProverConfig(encoding="resolution")
    with pytest.raises(ValueError):
        ProverConfig(timeout=0)


def _bench_dir(tmp_path):
    d = tmp_path / "bench"
    d.mkdir()
    shutil.copy(_path("ex1.p"), d / "ex1.p")
    shutil.copy(_path("noproof.p"), d / "noproof.p")
    (d / "broken.p").write_text("cnf(oops, axiom, p(a).\n")
    return d


def test_benchmark_rows(tmp_path):
    d = _bench_dir(tmp_path)
    paths = sorted(str(p) for p in d.glob("*.p"))
    rows = run_benchmark(paths, ProverConfig(encoding="core"))
    assert [r["file"] for r in rows] == ["broken.p", "ex1.p", "noproof.p", "TOTAL"]
    by_file = {r["file"]: r for r in rows}
    assert by_file["broken.p"]["status"] == "ParseError"
    assert by_file["ex1.p"]["status"] == "Theorem"
    assert by_file["ex1.p"]["proof_size"] >= 3
    assert by_file["noproof.p"]["status"] == "GaveUp (NoProofExists)"
    total = by_file["TOTAL"]
    assert total["status"] == "1/3 Theorem (core)"
    assert total["steps"] == by_file["ex1.p"]["steps"] + by_file["noproof.p"]["steps"]
    assert run_benchmark([], ProverConfig()) == []


def test_report_files(tmp_path):
    d = _bench_dir(tmp_path)
    rows = run_benchmark(sorted(str(p) for p in d.glob("*.p")), ProverConfig(encoding="core"))
    out = tmp_path / "report"
    written = write_report(rows, str(out))
    assert sorted(os.path.basename(p) for p in written) == [
        "report.csv",
        "status_counts.png",
        "wall_ms.png",
    ]
    for p in written:
        assert os.path.getsize(p) > 0
    with open(out / "report.csv") as f:
        back = list(csv.DictReader(f))
    assert [r["file"] for r in back] == [r["file"] for r in rows]
    assert back[-1]["status"] == "1/3 Theorem (core)"


def test_report_with_no_rows_writes_header_only(tmp_path):
    out = tmp_path / "empty"
    written = write_report([], str(out))
    assert [os.path.basename(p) for p in written] == ["report.csv"]
    with open(written[0]) as f:
        lines = f.read().splitlines()
    assert lines == ["file,status,wall_ms,steps,proof_size"]


def test_cli_single_file_exit_codes(capsys):
    assert main([_path("ex1.p"), "--encoding", "core"]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "% SZS status Theorem"

    assert main([_path("noproof.p"), "--encoding", "core"]) == 1
    assert capsys.readouterr().out.splitlines()[-1] == "% SZS status GaveUp (NoProofExists)"

    assert main([_path("noproof.p"), "--encoding", "matrix", "--max-size", "2"]) == 1
    assert capsys.readouterr().out.splitlines()[-1] == "% SZS status GaveUp"


def test_cli_input_errors(tmp_path, capsys):
    assert main([str(tmp_path / "missing.p")]) == 2
    assert "connsat:" in capsys.readouterr().err

    bad = tmp_path / "bad.p"
    bad.write_text("cnf(oops, axiom, p(a).\n")
    assert main([str(bad)]) == 2
    assert "connsat:" in capsys.readouterr().err


def test_cli_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main([_path("ex1.p"), "--bench", str(tmp_path)])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main([_path("ex1.p"), "--report-dir", str(tmp_path)])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main([_path("ex1.p"), "--timeout", "-5"])
    assert e.value.code == 2


def test_cli_proof_out_is_parseable(tmp_path, capsys):
    out = tmp_path / "proof.txt"
    assert main([_path("ex4.p"), "--encoding", "core", "--proof-out", str(out)]) == 0
    capsys.readouterr()
    prob = load_problem(_path("ex4.p"), ProverConfig())
    proof = parse_proof(out.read_text(), prob)
    assert proof.kind == "matrix" and proof.copies


def test_cli_stats_output(capsys):
    assert main([_path("ex1.p"), "--encoding", "core", "--stats"]) == 0
    out = capsys.readouterr().out
    assert "% steps = " in out
    assert "% copies = " in out  # per-clause budgets from the growth loop
    assert "% refinements = " in out


def test_cli_bench_writes_report(tmp_path, capsys):
    d = _bench_dir(tmp_path)
    out = tmp_path / "rep"
    assert main(["--bench", str(d), "--report-dir", str(out), "--encoding", "core"]) == 0
    printed = capsys.readouterr().out
    assert printed.count("wrote ") == 3
    assert (out / "report.csv").exists()
    assert (out / "status_counts.png").exists()
    assert (out / "wall_ms.png").exists()


def test_cli_bench_defaults_report_into_bench_dir(tmp_path, capsys):
    d = _bench_dir(tmp_path)
    assert main(["--bench", str(d), "--encoding", "tableau"]) == 0
    capsys.readouterr()
    assert (d / "report.csv").exists()
