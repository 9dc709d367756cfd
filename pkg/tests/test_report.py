"""Report writers: delimited layouts, JSON round trips, figure files."""

import json

from hpfold.bench import AlgoConfig, fixed_budget_runs, summarize_fixed_runs
from hpfold.lattice import parse_sequence
from hpfold.report import (
    RUN_CSV_HEADER,
    SUMMARY_CSV_HEADER,
    render_histogram,
    run_record,
    write_histogram_csv,
    write_run_csv,
    write_run_json,
    write_summary_csv,
    write_summary_json,
)

SEQ = parse_sequence("HPHHPPHH")
CONFIG = AlgoConfig(algo="playout")


def sample_results(n=4):
    return fixed_budget_runs(SEQ, 2, CONFIG, run_seed=5, n_runs=n,
                             max_playouts=1)


def test_run_csv_layout(tmp_path):
    results = sample_results()
    path = write_run_csv(tmp_path / "runs.csv", results)
    lines = path.read_text().splitlines()
    assert lines[0] == RUN_CSV_HEADER
    assert len(lines) == 1 + len(results)
    first = lines[1].split(",")
    assert first[0] == "0"
    assert int(first[1]) == results[0].seed
    assert float(first[2]) == results[0].score


def test_histogram_csv_sorted_and_header_only_when_empty(tmp_path):
    path = write_histogram_csv(tmp_path / "h.csv", {3: 2, 1: 5})
    assert path.read_text() == "score,count\n1,5\n3,2\n"
    empty = write_histogram_csv(tmp_path / "e.csv", {})
    assert empty.read_text() == "score,count\n"


def test_run_json_round_trip(tmp_path):
    results = sample_results()
    params = {"algo": "playout", "seed": 5}
    path = write_run_json(tmp_path / "runs.json", params=params, results=results)
    payload = json.loads(path.read_text())
    assert payload["params"] == params
    assert len(payload["runs"]) == len(results)
    assert payload["runs"][0] == run_record(results[0])
    assert payload["runs"][0]["seed"] == results[0].seed
    assert payload["runs"][0]["moves"] == list(results[0].moves)


def test_summary_csv_and_json(tmp_path):
    results = sample_results(6)
    summary = summarize_fixed_runs("tiny", CONFIG, results, 5, target=1.0)
    csv_path = write_summary_csv(tmp_path / "bench.csv", [summary])
    lines = csv_path.read_text().splitlines()
    assert lines[0] == SUMMARY_CSV_HEADER
    assert lines[1] == summary.csv_row()

    json_path = write_summary_json(tmp_path / "bench.json", [summary])
    payload = json.loads(json_path.read_text())
    assert payload[0]["molecule"] == "tiny"
    assert payload[0]["runs"] == 6
    assert sum(payload[0]["histogram"].values()) == 6
    assert payload[0]["seeds"] == [r.seed for r in results]


def test_histogram_image_written(tmp_path):
    path = render_histogram(tmp_path / "h.png", {29: 3, 30: 9, 31: 6, 32: 2},
                            title="scores", target=32)
    data = path.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(data) > 1000


def test_histogram_image_handles_empty_histogram(tmp_path):
    path = render_histogram(tmp_path / "empty.png", {})
    assert path.exists()
