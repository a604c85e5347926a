"""Report assembly, self-consistency checking and CSV emission.

Every aggregate in a report is recomputable from its per-pair records;
``verify_report`` does exactly that and names the fields that disagree, so
a tampered or truncated report is rejected before it is re-serialized.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict
from pathlib import Path
from typing import Optional

from . import __version__
from .clonedet import ClonePair
from .cochange import (
    PATTERN_1,
    PATTERN_NONE,
    AnalysisConfig,
    aggregate_counts,
    classify_pair,
    cochange_counts,
    match_cochanges,
    pattern_ratios,
)
from .githist import SnippetHistory
from .patchsim import commit_similarity
from .stats import describe, histogram

COMMIT_LENGTH_BIN = 1.0
SIMILARITY_BIN = 0.05


def pair_to_json(pair: ClonePair) -> dict:
    return {
        "file_a": pair.a.file, "start_a": pair.a.start_line, "end_a": pair.a.end_line,
        "file_b": pair.b.file, "start_b": pair.b.start_line, "end_b": pair.b.end_line,
        "clone_type": pair.clone_type, "rnr": pair.rnr, "tks": pair.tks,
        "token_len": pair.token_len,
    }


def build_pair_record(pair: ClonePair, hist_a: SnippetHistory,
                      hist_b: SnippetHistory, config: AnalysisConfig) -> dict:
    matches = match_cochanges(hist_a, hist_b, config)
    counts = cochange_counts(matches, hist_a, hist_b)
    classification = classify_pair(hist_a, hist_b, config, pair)

    not_cochanged_sim = None
    if classification.pattern == PATTERN_1:
        # similarity of the two independent last patches; reported for
        # exploration, never used for classification
        score = commit_similarity(hist_a.commits[0], hist_b.commits[0])
        not_cochanged_sim = {"value": score.value, "degenerate": score.degenerate}

    last_sim = None
    if classification.last_similarity is not None:
        last_sim = {
            "value": classification.last_similarity.value,
            "degenerate": classification.last_similarity.degenerate,
        }

    return {
        "pair": pair_to_json(pair),
        "history_len_a": hist_a.length,
        "history_len_b": hist_b.length,
        "matches": [
            {
                "hash": m.hash,
                "similarity": m.similarity.value,
                "degenerate": m.similarity.degenerate,
                "concerning": m.concerning,
                "timestamp_a": m.record_a.timestamp,
                "timestamp_b": m.record_b.timestamp,
            }
            for m in matches
        ],
        "counts": counts,
        "classification": {
            "pattern": classification.pattern,
            "last_hash_a": classification.last_hash_a,
            "last_hash_b": classification.last_hash_b,
            "last_similarity": last_sim,
            "not_cochanged_last_similarity": not_cochanged_sim,
        },
    }


def _series_block(values: list[float], bin_width: float) -> dict:
    if not values:
        return {"describe": None, "histogram": []}
    d = describe(values)
    return {
        "describe": asdict(d),
        "histogram": [[lower, count] for lower, count in histogram(values, bin_width)],
    }


def compute_aggregates(pair_records: list[dict]) -> dict:
    counts = aggregate_counts(rec["counts"] for rec in pair_records)

    patterns = {"p1_count": 0, "p2_count": 0, "none_count": 0}
    for rec in pair_records:
        pattern = rec["classification"]["pattern"]
        key = {"pattern1": "p1_count", "pattern2": "p2_count", "none": "none_count"}[pattern]
        patterns[key] += 1
    total_pairs = len(pair_records)
    concerning = patterns["p1_count"] + patterns["p2_count"]
    patterns["total_pairs"] = total_pairs
    patterns["concerning_pair_ratio"] = concerning / total_pairs if total_pairs else 0.0
    patterns["p2_over_concerning"] = patterns["p2_count"] / concerning if concerning else 0.0

    lengths = []
    cochanged_sims = []
    not_cochanged_sims = []
    for rec in pair_records:
        lengths.extend([rec["history_len_a"], rec["history_len_b"]])
        cochanged_sims.extend(m["similarity"] for m in rec["matches"])
        ncs = rec["classification"]["not_cochanged_last_similarity"]
        if ncs is not None:
            not_cochanged_sims.append(ncs["value"])

    return {
        "counts": counts,
        "patterns": patterns,
        "commit_length": _series_block(lengths, COMMIT_LENGTH_BIN),
        "cochanged_similarity": _series_block(cochanged_sims, SIMILARITY_BIN),
        "not_cochanged_last_similarity": _series_block(not_cochanged_sims, SIMILARITY_BIN),
    }


def build_report(config_echo: dict, repo_stats: dict, clone_summary: dict,
                 pair_records: list[dict], exclusions: list[dict],
                 warnings: list[str], baseline: Optional[dict] = None) -> dict:
    return {
        "tool": {"name": "ccl", "version": __version__},
        "config": config_echo,
        "repo_stats": repo_stats,
        "clone_summary": clone_summary,
        "pairs": pair_records,
        "exclusions": exclusions,
        "aggregates": compute_aggregates(pair_records),
        "baseline": baseline,
        "warnings": warnings,
    }


def _values_equal(a, b) -> bool:
    if isinstance(a, float) or isinstance(b, float):
        return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)
    return a == b


def _diff_fields(prefix: str, expected, found, out: list[str]) -> None:
    if isinstance(expected, dict) and isinstance(found, dict):
        for key in sorted(set(expected) | set(found)):
            _diff_fields(f"{prefix}.{key}", expected.get(key), found.get(key), out)
    elif isinstance(expected, list) and isinstance(found, list):
        if len(expected) != len(found):
            out.append(f"{prefix} (length)")
            return
        for i, (e, f) in enumerate(zip(expected, found)):
            _diff_fields(f"{prefix}[{i}]", e, f, out)
    elif expected is None or found is None:
        if expected is not found:
            out.append(prefix)
    elif not _values_equal(expected, found):
        out.append(prefix)


def verify_report(report: dict) -> list[str]:
    """Names of aggregate fields that cannot be recomputed from the per-pair
    records; empty when the report is self-consistent."""
    problems: list[str] = []
    for key in ("pairs", "aggregates"):
        if key not in report:
            return [key]
    recomputed = compute_aggregates(report["pairs"])
    _diff_fields("aggregates", recomputed, report["aggregates"], problems)
    for i, rec in enumerate(report["pairs"]):
        counts = rec.get("counts", {})
        matches = rec.get("matches", [])
        expected = {
            "total_commits": rec.get("history_len_a", 0) + rec.get("history_len_b", 0),
            "cochanged_commits": 2 * len(matches),
            "concerning_commits": 2 * sum(1 for m in matches if m.get("concerning")),
        }
        for key, value in expected.items():
            if counts.get(key) != value:
                problems.append(f"pairs[{i}].counts.{key}")
    return problems


def write_json(path: str, document: dict) -> None:
    text = json.dumps(document, indent=2, sort_keys=True)
    Path(path).write_text(text + "\n", encoding="utf-8")


def load_json(path: str) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_csv_series(report: dict, out_dir: str) -> list[str]:
    """One CSV per aggregate series; returns the files written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    aggregates = report["aggregates"]
    written = []

    histograms = [
        ("commit_length_histogram.csv", "commit_length"),
        ("cochanged_similarity_histogram.csv", "cochanged_similarity"),
        ("not_cochanged_similarity_histogram.csv", "not_cochanged_last_similarity"),
    ]
    for filename, key in histograms:
        path = out / filename
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["bin_lower", "count"])
            for lower, count in aggregates[key]["histogram"]:
                writer.writerow([lower, count])
        written.append(str(path))

    path = out / "pattern_ratios.csv"
    patterns = aggregates["patterns"]
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        header = ["total_pairs", "p1_count", "p2_count", "none_count",
                  "concerning_pair_ratio", "p2_over_concerning"]
        writer.writerow(header)
        writer.writerow([patterns[k] for k in header])
    written.append(str(path))
    return written
