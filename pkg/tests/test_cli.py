"""CLI behavior: subcommands, config precedence, exit codes, CSV output."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from ccl.cli import main
from ccl.report import load_json

from conftest import BLOCK_END_LINE, BLOCK_START_LINE, commit_all, init_repo


def run_detect(repo: Path, out: Path, *extra: str) -> int:
    return main(["detect", "--repo", str(repo), "-o", str(out), *extra])


@pytest.fixture(scope="module")
def twin_clones(twin_repo, tmp_path_factory) -> dict:
    out = tmp_path_factory.mktemp("cli") / "clones.json"
    code = run_detect(twin_repo["path"], out)
    assert code == 0
    return {"path": out, "doc": load_json(str(out))}


class TestDetect:
    def test_finds_the_twin_pair(self, twin_clones):
        doc = twin_clones["doc"]
        assert doc["summary"]["n_files"] == 2
        assert doc["summary"]["n_clone_sets_kept"] == 1
        assert doc["summary"]["n_clone_sets_dropped"] == 0
        (pair,) = doc["pairs"]
        assert pair["file_a"] == "TwinA.java" and pair["file_b"] == "TwinB.java"
        assert pair["start_a"] == BLOCK_START_LINE and pair["end_a"] == BLOCK_END_LINE
        assert pair["start_b"] == BLOCK_START_LINE and pair["end_b"] == BLOCK_END_LINE
        assert pair["clone_type"] == "type1"
        assert pair["rnr"] >= 0.8 and pair["tks"] >= 12 and pair["token_len"] >= 60

    def test_median_clone_length(self, twin_clones):
        assert twin_clones["doc"]["summary"]["median_clone_length_loc"] == (
            BLOCK_END_LINE - BLOCK_START_LINE + 1)

    def test_bad_repo_exit_1(self, tmp_path):
        assert run_detect(tmp_path / "missing", tmp_path / "c.json") == 1

    def test_empty_corpus_exit_0(self, tmp_path):
        repo = init_repo(tmp_path / "empty")
        (repo / "README.md").write_text("no java here\n")
        commit_all(repo, "docs", "2021-01-01T00:00:00 +0000")
        out = tmp_path / "clones.json"
        assert run_detect(repo, out) == 0
        doc = load_json(str(out))
        assert doc["pairs"] == [] and doc["summary"]["n_files"] == 0

    def test_exclude_pattern_drops_test_files(self, tmp_path, twin_repo):
        repo = init_repo(tmp_path / "tested")
        body = "".join(f"v{i} = w{i} + {i};\n" for i in range(12))
        (repo / "Impl.java").write_text(body)
        (repo / "ImplTest.java").write_text(body)
        (repo / "contest").mkdir()
        (repo / "contest" / "Entry.java").write_text(body)
        commit_all(repo, "mixed", "2021-01-01T00:00:00 +0000")
        out = tmp_path / "clones.json"
        assert run_detect(repo, out, "--min-tokens", "20", "--tks", "3") == 0
        doc = load_json(str(out))
        assert doc["summary"]["n_files"] == 1  # only Impl.java survives
        assert doc["pairs"] == []

    def test_flag_overrides_config_file(self, tmp_path, twin_repo):
        config = tmp_path / "ccl.ini"
        config.write_text("min_tokens = 500\nrnr = 0.8\n")
        out = tmp_path / "clones.json"
        # config alone: threshold too high, nothing found
        assert main(["detect", "--repo", str(twin_repo["path"]),
                     "--config", str(config), "-o", str(out)]) == 0
        assert load_json(str(out))["pairs"] == []
        # flag wins over config
        assert main(["detect", "--repo", str(twin_repo["path"]),
                     "--config", str(config), "--min-tokens", "50",
                     "-o", str(out)]) == 0
        assert len(load_json(str(out))["pairs"]) == 1

    def test_config_file_supplies_repo(self, tmp_path, twin_repo):
        config = tmp_path / "ccl.ini"
        config.write_text(f"[ccl]\nrepo = {twin_repo['path']}\n")
        out = tmp_path / "clones.json"
        assert main(["detect", "--config", str(config), "-o", str(out)]) == 0
        assert len(load_json(str(out))["pairs"]) == 1

    def test_usage_error_exit_1(self):
        assert main(["detect", "--min-tokens", "nope"]) == 1


class TestAnalyze:
    def test_report_written(self, twin_repo, twin_clones, tmp_path):
        out = tmp_path / "report.json"
        code = main(["analyze", "--repo", str(twin_repo["path"]),
                     "--clones", str(twin_clones["path"]), "-o", str(out)])
        assert code == 0
        report = load_json(str(out))
        assert report["tool"]["name"] == "ccl"
        assert len(report["pairs"]) == 1
        assert report["exclusions"] == []
        assert report["repo_stats"]["total_commit_count"] == 6
        assert report["repo_stats"]["repo_age_days"] == 5

    def test_zero_pairs_is_ok(self, twin_repo, tmp_path):
        clones = tmp_path / "clones.json"
        clones.write_text(json.dumps({
            "summary": {"n_files": 2, "total_loc": 37,
                        "median_clone_length_loc": None, "params": {}},
            "pairs": [],
        }))
        out = tmp_path / "report.json"
        assert main(["analyze", "--repo", str(twin_repo["path"]),
                     "--clones", str(clones), "-o", str(out)]) == 0
        report = load_json(str(out))
        assert report["pairs"] == []
        assert report["aggregates"]["counts"]["total_commits"] == 0

    def test_missing_clones_exit_1(self, twin_repo, tmp_path):
        assert main(["analyze", "--repo", str(twin_repo["path"]),
                     "--clones", str(tmp_path / "nope.json")]) == 1

    def test_malformed_clones_exit_2(self, twin_repo, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["analyze", "--repo", str(twin_repo["path"]),
                     "--clones", str(bad)]) == 2

    def test_unknown_fragment_becomes_exclusion(self, twin_repo, twin_clones, tmp_path):
        doc = json.loads(json.dumps(twin_clones["doc"]))  # deep copy
        ghost = dict(doc["pairs"][0])
        ghost["file_a"] = "Ghost.java"
        doc["pairs"].append(ghost)
        clones = tmp_path / "clones.json"
        clones.write_text(json.dumps(doc))
        out = tmp_path / "report.json"
        assert main(["analyze", "--repo", str(twin_repo["path"]),
                     "--clones", str(clones), "-o", str(out)]) == 0
        report = load_json(str(out))
        assert len(report["pairs"]) == 1
        assert len(report["exclusions"]) == 1
        assert "Ghost.java" in report["exclusions"][0]["reason"]

    def test_all_fragments_failing_exit_2(self, twin_repo, twin_clones, tmp_path):
        doc = json.loads(json.dumps(twin_clones["doc"]))
        doc["pairs"][0]["file_a"] = "GhostA.java"
        doc["pairs"][0]["file_b"] = "GhostB.java"
        clones = tmp_path / "clones.json"
        clones.write_text(json.dumps(doc))
        assert main(["analyze", "--repo", str(twin_repo["path"]),
                     "--clones", str(clones), "-o", str(tmp_path / "r.json")]) == 2

    def test_threshold_one_boundary(self, twin_repo, twin_clones, tmp_path):
        # concerning <=> similarity strictly below the threshold, so at 1.0
        # exactly-identical patches (similarity 1.0) stay unconcerning
        out = tmp_path / "report.json"
        assert main(["analyze", "--repo", str(twin_repo["path"]),
                     "--clones", str(twin_clones["path"]),
                     "--threshold", "1.0", "-o", str(out)]) == 0
        report = load_json(str(out))
        matches = report["pairs"][0]["matches"]
        below = sum(1 for m in matches if m["similarity"] < 1.0)
        assert 0 < below < len(matches)
        counts = report["aggregates"]["counts"]
        assert counts["concerning_commits"] == 2 * below


class TestBaseline:
    def test_baseline_runs_and_is_deterministic(self, twin_repo, twin_clones, tmp_path):
        out1, out2 = tmp_path / "b1.json", tmp_path / "b2.json"
        for out in (out1, out2):
            code = main(["baseline", "--repo", str(twin_repo["path"]),
                         "--clones", str(twin_clones["path"]),
                         "--samples", "25", "--seed", "11", "-o", str(out)])
            assert code == 0
        assert out1.read_bytes() == out2.read_bytes()
        doc = load_json(str(out1))
        assert doc["describe_clones"]["n"] == 2
        assert set(doc["welch"]) == {"t", "df", "p", "alpha", "significant"}
        # clone and random snippets share the same change dynamics here
        assert doc["welch"]["significant"] is False

    def test_samples_zero_exit_1(self, twin_repo, twin_clones, tmp_path):
        assert main(["baseline", "--repo", str(twin_repo["path"]),
                     "--clones", str(twin_clones["path"]),
                     "--samples", "0", "-o", str(tmp_path / "b.json")]) == 1

    def test_snippet_longer_than_any_file_exit_2(self, twin_repo, tmp_path):
        clones = tmp_path / "clones.json"
        clones.write_text(json.dumps({
            "summary": {"n_files": 2, "total_loc": 37,
                        "median_clone_length_loc": 1000.0, "params": {}},
            "pairs": [],
        }))
        assert main(["baseline", "--repo", str(twin_repo["path"]),
                     "--clones", str(clones), "--samples", "5",
                     "-o", str(tmp_path / "b.json")]) == 2

    def test_no_pairs_exit_2(self, twin_repo, tmp_path):
        clones = tmp_path / "clones.json"
        clones.write_text(json.dumps({
            "summary": {"n_files": 2, "total_loc": 37,
                        "median_clone_length_loc": None, "params": {}},
            "pairs": [],
        }))
        assert main(["baseline", "--repo", str(twin_repo["path"]),
                     "--clones", str(clones),
                     "-o", str(tmp_path / "b.json")]) == 2


class TestReport:
    @pytest.fixture()
    def report_path(self, twin_repo, twin_clones, tmp_path) -> Path:
        out = tmp_path / "report.json"
        assert main(["analyze", "--repo", str(twin_repo["path"]),
                     "--clones", str(twin_clones["path"]), "-o", str(out)]) == 0
        return out

    def test_csv_series_written(self, report_path, tmp_path):
        out_dir = tmp_path / "csv"
        assert main(["report", "--input", str(report_path),
                     "--format", "csv", "-o", str(out_dir)]) == 0
        names = sorted(p.name for p in out_dir.iterdir())
        assert names == [
            "cochanged_similarity_histogram.csv",
            "commit_length_histogram.csv",
            "not_cochanged_similarity_histogram.csv",
            "pattern_ratios.csv",
        ]
        header, row = (out_dir / "pattern_ratios.csv").read_text().strip().splitlines()
        assert header.startswith("total_pairs,")
        assert row.split(",")[0] == "1"
        commit_csv = (out_dir / "commit_length_histogram.csv").read_text().strip()
        assert commit_csv.splitlines()[0] == "bin_lower,count"
        assert len(commit_csv.splitlines()) >= 2

    def test_json_passthrough(self, report_path, tmp_path):
        out_dir = tmp_path / "json"
        assert main(["report", "--input", str(report_path),
                     "--format", "json", "-o", str(out_dir)]) == 0
        assert load_json(str(out_dir / "report.json"))["tool"]["name"] == "ccl"

    def test_corrupt_aggregate_exit_1(self, report_path, tmp_path, capsys):
        report = load_json(str(report_path))
        report["aggregates"]["counts"]["cochanged_commits"] += 2
        bad = tmp_path / "bad_report.json"
        bad.write_text(json.dumps(report))
        assert main(["report", "--input", str(bad),
                     "-o", str(tmp_path / "out")]) == 1
        err = capsys.readouterr().err
        assert "aggregates.counts.cochanged_commits" in err

    def test_malformed_json_exit_1(self, tmp_path):
        bad = tmp_path / "nonsense.json"
        bad.write_text("][")
        assert main(["report", "--input", str(bad),
                     "-o", str(tmp_path / "out")]) == 1


def test_missing_git_binary_is_environment_error(
        twin_repo, twin_clones, tmp_path, monkeypatch):
    monkeypatch.setenv("CCL_GIT_BIN", str(tmp_path / "no-such-git"))
    code = main(["analyze", "--repo", str(twin_repo["path"]),
                 "--clones", str(twin_clones["path"]),
                 "-o", str(tmp_path / "r.json")])
    assert code == 1
