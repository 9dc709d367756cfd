"""Command-line behavior: flags, files, exit codes, reproducibility."""

import json

import pytest

from hpfold.cli import main
from hpfold.lattice import parse_sequence
from hpfold.oracle import exhaustive_best


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ----------------------------------------------------------------- enumerate


def test_enumerate_prints_optimum_and_conformation(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "--seq", "HPPH", "--dim", "2")
    assert code == 0
    lines = out.splitlines()
    assert "optimum=1" in lines[1]
    assert lines[2] == "0 H 0 0"
    assert len(lines) == 2 + 4


def test_enumerate_refuses_oversized_input(capsys):
    code, _, err = run_cli(capsys, "enumerate", "--seq", "H" * 20, "--dim", "2")
    assert code == 2
    assert "error" in err and "cap" in err


def test_bad_residue_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["enumerate", "--seq", "HPXH", "--dim", "2"])
    assert exc.value.code == 2


# ----------------------------------------------------------------- run


def test_run_reports_each_run_and_best(capsys):
    code, out, _ = run_cli(
        capsys, "run", "--seq", "HPHHPPHHPH", "--dim", "2", "--algo", "nmcs",
        "--level", "1", "--runs", "3", "--seed", "12", "--max-playouts", "200")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 4
    assert lines[0].startswith("run=0 ")
    assert lines[3].startswith("best score=")


def test_run_same_seed_is_reproducible(capsys):
    argv = ("run", "--seq", "HPHPPHHPHPPHPHHPPHPH", "--dim", "3",
            "--algo", "lnmcs", "--level", "1", "--eval-playouts", "2",
            "--runs", "2", "--seed", "77", "--max-playouts", "500")
    code_a, out_a, _ = run_cli(capsys, *argv)
    code_b, out_b, _ = run_cli(capsys, *argv)
    assert code_a == code_b == 0
    assert out_a == out_b  # no timing fields on stdout


def test_run_writes_report_directory(capsys, tmp_path):
    out_dir = tmp_path / "report"
    code, _, _ = run_cli(
        capsys, "run", "--seq", "HPHHPPHHPH", "--dim", "2", "--algo", "nmcs",
        "--level", "1", "--runs", "2", "--seed", "5", "--max-playouts", "300",
        "--out", str(out_dir))
    assert code == 0
    assert (out_dir / "runs.csv").is_file()
    assert (out_dir / "histogram.csv").is_file()
    assert (out_dir / "histogram.png").is_file()
    header, *rows = (out_dir / "runs.csv").read_text().splitlines()
    assert header == "run,seed,score,playouts,elapsed_secs"
    assert len(rows) == 2


def test_run_json_report_echoes_params(capsys, tmp_path):
    out_dir = tmp_path / "report"
    code, _, _ = run_cli(
        capsys, "run", "--seq", "HPHHPPHHPH", "--dim", "2", "--algo", "lnmcs",
        "--level", "1", "--eval-playouts", "3", "--ratio", "0.8",
        "--threshold", "median", "--runs", "1", "--seed", "9",
        "--max-playouts", "400", "--out", str(out_dir), "--format", "json",
        "--no-plot")
    assert code == 0
    payload = json.loads((out_dir / "runs.json").read_text())
    assert payload["params"]["threshold"] == "median"
    assert payload["params"]["ratio"] == 0.8
    assert payload["params"]["seed"] == 9
    assert len(payload["runs"]) == 1
    assert not (out_dir / "histogram.png").exists()


def test_dump_best_replays_to_reported_score(capsys, tmp_path):
    dump = tmp_path / "best.txt"
    code, out, _ = run_cli(
        capsys, "run", "--seq", "HPPH", "--dim", "2", "--algo", "nmcs",
        "--level", "1", "--seed", "3", "--max-playouts", "50",
        "--dump-best", str(dump))
    assert code == 0
    lines = dump.read_text().splitlines()
    assert len(lines) == 4  # one line per residue
    assert lines[0].split() == ["0", "H", "0", "0"]


def test_sequence_from_file(capsys, tmp_path):
    seq_file = tmp_path / "molecule.txt"
    seq_file.write_text("# comment line\nHPHHPPHH\n")
    code, out, _ = run_cli(
        capsys, "run", "--seq", f"@{seq_file}", "--dim", "2",
        "--algo", "playout", "--seed", "1")
    assert code == 0
    assert "best score=" in out


def test_uct_without_budget_is_config_error(capsys):
    code, _, err = run_cli(
        capsys, "run", "--seq", "HPHHPPHH", "--dim", "2", "--algo", "uct",
        "--seed", "1")
    assert code == 2
    assert "error" in err


def test_faithful_eval_flag_takes_on_off(capsys):
    code, _, _ = run_cli(
        capsys, "run", "--seq", "HPHHPPHH", "--dim", "2", "--algo", "lnmcs",
        "--level", "1", "--eval-playouts", "2", "--faithful-eval", "on",
        "--seed", "2", "--max-playouts", "200")
    assert code == 0
    with pytest.raises(SystemExit):
        main(["run", "--seq", "HH", "--faithful-eval", "yes"])


# ----------------------------------------------------------------- bench


def test_bench_single_molecule_quick(capsys, tmp_path):
    out_dir = tmp_path / "bench"
    code, out, _ = run_cli(
        capsys, "bench", "--molecule", "1", "--algo", "playout", "--runs", "2",
        "--max-restarts", "2", "--max-playouts", "3", "--timeout-secs", "5",
        "--seed", "4", "--out", str(out_dir))
    assert code == 0
    row = out.splitlines()[0].split(",")
    assert row[0] == "1" and row[1] == "playout"
    assert row[2] == "2"  # runs
    assert (out_dir / "bench.csv").is_file()
    assert (out_dir / "molecule1_playout_histogram.csv").is_file()
    assert (out_dir / "molecule1_playout_histogram.png").is_file()
    header, *rows = (out_dir / "bench.csv").read_text().splitlines()
    assert header == "molecule,algo,runs,successes,mean_time_min,iqr_min"
    assert len(rows) == 1


def test_bench_rejects_bad_molecule(capsys):
    code, _, err = run_cli(capsys, "bench", "--molecule", "12",
                           "--max-playouts", "1", "--runs", "1")
    assert code == 2
    assert "error" in err
