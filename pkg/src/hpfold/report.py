"""Result serialization: delimited tables, JSON records, score histograms.

Every writer takes already-aggregated data; nothing in here runs a search.
Figures are rendered with the Agg backend so reports work headless.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

SUMMARY_CSV_HEADER = "molecule,algo,runs,successes,mean_time_min,iqr_min"
RUN_CSV_HEADER = "run,seed,score,playouts,elapsed_secs"


def write_summary_csv(path, summaries) -> Path:
    """Benchmark table, one aggregated row per (molecule, algorithm)."""
    path = Path(path)
    lines = [SUMMARY_CSV_HEADER]
    lines.extend(s.csv_row() for s in summaries)
    path.write_text("\n".join(lines) + "\n")
    return path


def write_run_csv(path, results) -> Path:
    """Per-run table for a batch of RunResult records."""
    path = Path(path)
    lines = [RUN_CSV_HEADER]
    for i, r in enumerate(results):
        lines.append(f"{i},{r.seed},{r.score:.0f},{r.playouts},{r.elapsed:.3f}")
    path.write_text("\n".join(lines) + "\n")
    return path


def write_histogram_csv(path, histogram: dict) -> Path:
    """`score,count` rows, ascending score."""
    path = Path(path)
    lines = ["score,count"]
    for score in sorted(histogram):
        lines.append(f"{score},{histogram[score]}")
    path.write_text("\n".join(lines) + "\n")
    return path


def run_record(result) -> dict:
    return {
        "seed": result.seed,
        "score": result.score,
        "playouts": result.playouts,
        "elapsed_secs": round(result.elapsed, 3),
        "cancelled": result.cancelled,
        "engine": result.engine,
        "moves": list(result.moves),
    }


def write_run_json(path, *, params: dict, results) -> Path:
    """Full machine-readable record: parameter echo plus every run."""
    path = Path(path)
    payload = {"params": params, "runs": [run_record(r) for r in results]}
    path.write_text(json.dumps(payload, indent=2) + "\n")
    return path


def write_summary_json(path, summaries) -> Path:
    path = Path(path)
    payload = [
        {
            "molecule": s.molecule,
            "algo": s.algo,
            "runs": s.runs,
            "successes": s.successes,
            "mean_time_min": None if s.mean_time_min != s.mean_time_min else s.mean_time_min,
            "mean_time_all_min": None if s.mean_time_all_min != s.mean_time_all_min else s.mean_time_all_min,
            "iqr_min": None if s.iqr_min != s.iqr_min else s.iqr_min,
            "histogram": {str(k): v for k, v in s.histogram.items()},
            "run_seed": s.run_seed,
            "seeds": list(s.seeds),
            "params": s.params,
        }
        for s in summaries
    ]
    path.write_text(json.dumps(payload, indent=2) + "\n")
    return path


def render_histogram(path, histogram: dict, *, title: str = "",
                     target: Optional[float] = None) -> Path:
    """Bar chart of score frequencies, saved as an image next to the CSVs."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    scores = sorted(histogram)
    counts = [histogram[s] for s in scores]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(scores, counts, width=0.8, color="#4878cf", edgecolor="black")
    if target is not None:
        ax.axvline(target, color="#d65f5f", linestyle="--", linewidth=1.2,
                   label=f"target {target:.0f}")
        ax.legend()
    ax.set_xlabel("H-H contacts")
    ax.set_ylabel("runs")
    if title:
        ax.set_title(title)
    if scores:
        ax.set_xticks(range(min(scores), max(scores) + 1))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
