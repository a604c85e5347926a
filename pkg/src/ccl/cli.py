"""Command line interface: detect, analyze, baseline, report.

Configuration can come from a flat INI-style file (--config); explicit
command line flags always win over file values, which win over defaults.
Exit codes: 0 success, 1 usage or environment problem, 2 data problem.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Optional

from . import __version__, corpus
from .clonedet import (
    KERNEL_BACKEND,
    CloneFragment,
    ClonePair,
    DetectorParams,
    build_clone_sets,
    detect_clone_pairs,
)
from .cochange import AnalysisConfig
from .githist import (
    GitError,
    SnippetLogError,
    repo_stats,
    sample_random_snippets,
    snippet_histories,
)
from .report import (
    build_pair_record,
    build_report,
    load_json,
    pair_to_json,
    verify_report,
    write_csv_series,
    write_json,
)
from .stats import describe, welch_t_test

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    """Bad invocation or unusable environment (exit 1)."""


class DataError(Exception):
    """Unprocessable input data (exit 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract is 1
        raise UsageError(message)


_DEFAULTS = {
    "min_tokens": 50,
    "rnr": 0.8,
    "tks": 12,
    "exclude": "test",
    "threshold": 0.4,
    "jobs": 0,          # 0 = logical CPU count
    "include_merges": True,
    "samples": 500,
    "seed": 0,
}

_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def _load_config_file(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError:
        parser.read_string("[ccl]\n" + text)
    merged: dict[str, str] = {}
    for section in parser.sections():
        merged.update(parser[section])
    return merged


def _resolve(args: argparse.Namespace, key: str, cast) -> None:
    """defaults < config file < explicit flag."""
    if getattr(args, key, None) is not None:
        return
    value: Optional[str] = args._config.get(key)
    if value is None:
        setattr(args, key, _DEFAULTS.get(key))
        return
    try:
        if cast is bool:
            lowered = value.strip().lower()
            if lowered in _BOOL_TRUE:
                setattr(args, key, True)
            elif lowered in _BOOL_FALSE:
                setattr(args, key, False)
            else:
                raise ValueError(value)
        else:
            setattr(args, key, cast(value))
    except ValueError as exc:
        raise UsageError(f"bad config value for {key}: {value!r}") from exc


def _require_repo(args) -> str:
    if not args.repo:
        raise UsageError("--repo is required (flag or config file)")
    repo = args.repo
    if not Path(repo).is_dir():
        raise UsageError(f"not a directory: {repo}")
    return repo


def _median_loc(pairs: list[ClonePair]) -> Optional[float]:
    locs = [frag.loc for pair in pairs for frag in (pair.a, pair.b)]
    if not locs:
        return None
    return describe(locs).median


def cmd_detect(args: argparse.Namespace) -> int:
    repo = _require_repo(args)
    try:
        params = DetectorParams(
            min_token=args.min_tokens,
            min_rnr=args.rnr,
            min_tks=args.tks,
            exclude_pattern=args.exclude,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    warnings: list[str] = []
    try:
        files = corpus.build_corpus(repo, params.exclude_pattern, warnings)
    except OSError as exc:
        raise DataError(f"cannot read corpus: {exc}") from exc

    pairs = detect_clone_pairs(files, params)
    kept, dropped = build_clone_sets(pairs)
    median_loc = _median_loc(kept)
    document = {
        "summary": {
            "n_files": len(files),
            "total_loc": sum(f.loc for f in files.values()),
            "n_clone_sets_kept": len(kept),
            "n_clone_sets_dropped": dropped,
            "median_clone_length_loc": median_loc,
            "params": {
                "min_token": params.min_token,
                "min_rnr": params.min_rnr,
                "min_tks": params.min_tks,
                "exclude_pattern": params.exclude_pattern,
            },
        },
        "pairs": [pair_to_json(p) for p in kept],
        "warnings": warnings,
    }
    write_json(args.output, document)
    print(f"ccl detect: {len(kept)} clone pair(s) "
          f"({dropped} larger set(s) dropped) -> {args.output}")
    return EXIT_OK


def _load_clones(path: str) -> dict:
    if not Path(path).is_file():
        raise UsageError(f"clones file not found: {path}")
    try:
        document = load_json(path)
        document["summary"]
        document["pairs"]
    except (ValueError, KeyError) as exc:
        raise DataError(f"malformed clones file {path}: {exc}") from exc
    return document


def _pairs_from_json(records: list[dict]) -> list[ClonePair]:
    pairs = []
    for rec in records:
        pairs.append(ClonePair(
            a=CloneFragment(rec["file_a"], rec["start_a"], rec["end_a"]),
            b=CloneFragment(rec["file_b"], rec["start_b"], rec["end_b"]),
            clone_type=rec["clone_type"],
            rnr=rec["rnr"],
            tks=rec["tks"],
            token_len=rec["token_len"],
        ))
    return pairs


def cmd_analyze(args: argparse.Namespace) -> int:
    repo = _require_repo(args)
    clones = _load_clones(args.clones)
    try:
        config = AnalysisConfig(threshold=args.threshold)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    pairs = _pairs_from_json(clones["pairs"])

    fragments: list[CloneFragment] = []
    index: dict[CloneFragment, int] = {}
    for pair in pairs:
        for frag in (pair.a, pair.b):
            if frag not in index:
                index[frag] = len(fragments)
                fragments.append(frag)

    warnings: list[str] = []
    outcomes = snippet_histories(repo, fragments, jobs=args.jobs,
                                 include_merges=args.include_merges,
                                 warnings=warnings)

    pair_records = []
    exclusions = []
    for pair in pairs:
        hist_a = outcomes[index[pair.a]]
        hist_b = outcomes[index[pair.b]]
        reasons = [str(h) for h in (hist_a, hist_b) if isinstance(h, SnippetLogError)]
        if not reasons:
            for hist, frag in ((hist_a, pair.a), (hist_b, pair.b)):
                if hist.length == 0:
                    reasons.append(f"empty history for {frag.file}:"
                                   f"{frag.start_line},{frag.end_line}")
        if reasons:
            exclusions.append({"pair": pair_to_json(pair), "reason": "; ".join(reasons)})
            continue
        pair_records.append(build_pair_record(pair, hist_a, hist_b, config))

    if pairs and not pair_records:
        raise DataError("every clone pair failed history extraction")

    summary = clones["summary"]
    stats = repo_stats(repo, summary["n_files"], summary["total_loc"])
    config_echo = {
        "repo": str(repo),
        "clones": str(args.clones),
        "threshold": config.threshold,
        "jobs": args.jobs,
        "include_merges": args.include_merges,
        "detector_params": summary.get("params"),
        "kernel_backend": KERNEL_BACKEND,
    }
    document = build_report(
        config_echo=config_echo,
        repo_stats={
            "n_files": stats.n_files,
            "total_loc": stats.total_loc,
            "repo_age_days": stats.repo_age_days,
            "total_commit_count": stats.total_commit_count,
        },
        clone_summary=summary,
        pair_records=pair_records,
        exclusions=exclusions,
        warnings=warnings,
    )
    write_json(args.output, document)
    aggregates = document["aggregates"]
    print(f"ccl analyze: {len(pair_records)} pair(s), "
          f"{len(exclusions)} excluded, "
          f"cochange_ratio={aggregates['counts']['cochange_ratio']:.3f} "
          f"-> {args.output}")
    return EXIT_OK


def cmd_baseline(args: argparse.Namespace) -> int:
    repo = _require_repo(args)
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    clones = _load_clones(args.clones)
    summary = clones["summary"]
    median_loc = summary.get("median_clone_length_loc")
    if median_loc is None:
        raise DataError("clones file has no pairs; median clone length undefined")
    snippet_loc = max(1, int(round(median_loc)))
    exclude = args.exclude
    if exclude is None:
        exclude = (summary.get("params") or {}).get("exclude_pattern", "test")

    warnings: list[str] = []
    clone_fragments = []
    for pair in _pairs_from_json(clones["pairs"]):
        clone_fragments.extend([pair.a, pair.b])
    clone_lengths = []
    for outcome in snippet_histories(repo, clone_fragments, jobs=args.jobs,
                                     warnings=warnings):
        if isinstance(outcome, SnippetLogError):
            warnings.append(str(outcome))
        else:
            clone_lengths.append(outcome.length)

    try:
        samples = sample_random_snippets(repo, snippet_loc, args.samples,
                                         args.seed, exclude)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    sample_lengths = []
    for outcome in snippet_histories(repo, samples, jobs=args.jobs,
                                     warnings=warnings):
        if isinstance(outcome, SnippetLogError):
            warnings.append(str(outcome))
        else:
            sample_lengths.append(outcome.length)

    if not clone_lengths or not sample_lengths:
        raise DataError("no histories available for the baseline comparison")
    try:
        welch = welch_t_test(clone_lengths, sample_lengths)
    except ValueError as exc:
        raise DataError(f"Welch's t-test not computable: {exc}") from exc

    document = {
        "config": {
            "repo": str(repo),
            "clones": str(args.clones),
            "samples": args.samples,
            "seed": args.seed,
            "snippet_loc": snippet_loc,
            "exclude_pattern": exclude,
        },
        "samples": [
            {"file": s.file, "start_line": s.start_line, "end_line": s.end_line}
            for s in samples
        ],
        "sample_lengths": sample_lengths,
        "clone_lengths": clone_lengths,
        "describe_samples": asdict(describe(sample_lengths)),
        "describe_clones": asdict(describe(clone_lengths)),
        "welch": asdict(welch),
        "warnings": warnings,
    }
    write_json(args.output, document)
    print(f"ccl baseline: clones mean={document['describe_clones']['mean']:.2f} "
          f"samples mean={document['describe_samples']['mean']:.2f} "
          f"p={welch.p:.4f} -> {args.output}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    try:
        report = load_json(args.input)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot load report {args.input}: {exc}") from exc
    problems = verify_report(report)
    if problems:
        for field in problems:
            print(f"ccl report: self-consistency violation at {field}", file=sys.stderr)
        return EXIT_USAGE
    out_dir = Path(args.output)
    if args.format == "csv":
        written = write_csv_series(report, str(out_dir))
    else:
        out_dir.mkdir(parents=True, exist_ok=True)
        target = out_dir / "report.json"
        write_json(str(target), report)
        written = [str(target)]
    print("ccl report: wrote " + ", ".join(written))
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="ccl", description=__doc__)
    parser.add_argument("--version", action="version",
                        version=f"ccl {__version__} (kernels: {KERNEL_BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: _Parser) -> None:
        p.add_argument("--config", help="flat INI-style config file")

    p = sub.add_parser("detect", help="detect clone pairs and write clones.json")
    common(p)
    p.add_argument("--repo", help="path to the git work tree")
    p.add_argument("--min-tokens", type=int, dest="min_tokens")
    p.add_argument("--rnr", type=float)
    p.add_argument("--tks", type=int)
    p.add_argument("--exclude", help="exclusion substring (default: test)")
    p.add_argument("-o", "--output", default="clones.json")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("analyze", help="mine histories and write report.json")
    common(p)
    p.add_argument("--repo")
    p.add_argument("--clones", default="clones.json")
    p.add_argument("--threshold", type=float)
    p.add_argument("--jobs", type=int)
    p.add_argument("--include-merges", action=argparse.BooleanOptionalAction,
                   dest="include_merges")
    p.add_argument("-o", "--output", default="report.json")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("baseline", help="random-snippet baseline and Welch's t-test")
    common(p)
    p.add_argument("--repo")
    p.add_argument("--clones", default="clones.json")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--exclude")
    p.add_argument("-o", "--output", default="baseline.json")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("report", help="emit CSV series (or validated JSON) from a report")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", default="report-out")
    p.set_defaults(func=cmd_report)
    return parser


_CAST = {
    "repo": str, "clones": str, "output": str, "exclude": str,
    "min_tokens": int, "tks": int, "jobs": int, "samples": int, "seed": int,
    "rnr": float, "threshold": float,
    "include_merges": bool,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        args._config = _load_config_file(args.config) if args.config else {}
        for key, cast in _CAST.items():
            if hasattr(args, key):
                _resolve(args, key, cast)
        return args.func(args)
    except UsageError as exc:
        print(f"ccl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"ccl: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except GitError as exc:
        print(f"ccl: git error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
