"""Drive the external git executable and parse line-range commit logs.

History extraction shells out to ``git log -L start,end:file`` and inherits
git's own range tracking (renames, splits).  The parser understands the
default pretty format with diffs, as printed under a C locale.
"""

from __future__ import annotations

import os
import random
import re
import subprocess
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime
from typing import Optional, Sequence

from .clonedet import CloneFragment
from .corpus import file_locs

CONTEXT = "context"
ADDED = "added"
REMOVED = "removed"

_HASH_RE = re.compile(r"^[0-9a-f]{40}$")
_HUNK_RE = re.compile(r"^@@ -(\d+)(?:,(\d+))? \+(\d+)(?:,(\d+))? @@")
_DATE_FORMAT = "%a %b %d %H:%M:%S %Y %z"

_DIFF_HEADER_PREFIXES = (
    "diff --git", "index ", "--- ", "+++ ", "old mode", "new mode",
    "deleted file", "new file", "similarity index", "dissimilarity index",
    "rename from", "rename to", "copy from", "copy to", "Binary files",
)


class GitError(RuntimeError):
    """Fatal environment problem (git missing, repository unusable)."""


class SnippetLogError(RuntimeError):
    """git could not produce a log for one fragment; analysis continues."""

    def __init__(self, fragment: CloneFragment, message: str) -> None:
        super().__init__(message)
        self.fragment = fragment


class GitLogParseError(ValueError):
    """Non-empty git log output yielded no parseable commit blocks."""


@dataclass(frozen=True, slots=True)
class Hunk:
    old_start: int
    old_count: int
    new_start: int
    new_count: int
    lines: tuple[tuple[str, str], ...]  # (marker, text), marker stripped


@dataclass(frozen=True, slots=True)
class CommitRecord:
    hash: str
    author: str
    timestamp: int          # epoch seconds of the author date
    tz_offset: str          # original offset, e.g. "+0000"
    message: str
    patch: tuple[Hunk, ...]
    diff_headers: tuple[str, ...]


@dataclass(frozen=True)
class SnippetHistory:
    fragment: CloneFragment
    commits: tuple[CommitRecord, ...]  # newest first, hash-deduplicated

    @property
    def length(self) -> int:
        return len(self.commits)


@dataclass(frozen=True)
class RepoStats:
    n_files: int
    total_loc: int
    repo_age_days: int
    total_commit_count: int


def _git_bin() -> str:
    return os.environ.get("CCL_GIT_BIN", "git")


def run_git(repo_path: str, args: Sequence[str]) -> subprocess.CompletedProcess:
    env = dict(os.environ)
    env.update({"GIT_PAGER": "cat", "LC_ALL": "C", "LANG": "C"})
    cmd = [_git_bin(), "-C", str(repo_path), *args]
    try:
        return subprocess.run(cmd, capture_output=True, text=True,
                              errors="replace", env=env)
    except FileNotFoundError as exc:
        raise GitError(f"git executable not found: {_git_bin()!r}") from exc


def parse_git_log(raw_text: str, warnings: Optional[list[str]] = None) -> list[CommitRecord]:
    """Parse default-format ``git log`` output (with diffs) into records.

    Blocks without a Date line are skipped with a warning; diff and hunk
    header lines are kept out of the patch, whose hunks carry the body
    lines with their leading marker stripped.
    """

    def warn(message: str) -> None:
        if warnings is not None:
            warnings.append(message)

    lines = raw_text.split("\n")
    blocks: list[list[str]] = []
    current: Optional[list[str]] = None
    for line in lines:
        if line.startswith("commit "):
            current = [line]
            blocks.append(current)
        elif current is not None:
            current.append(line)

    records: list[CommitRecord] = []
    for block in blocks:
        record = _parse_block(block, warn)
        if record is not None:
            records.append(record)

    if not records and raw_text.strip():
        raise GitLogParseError("no commit blocks found in non-empty git log output")
    return records


def _parse_block(block: list[str], warn) -> Optional[CommitRecord]:
    first = block[0].split()
    commit_hash = first[1] if len(first) > 1 else ""
    if not _HASH_RE.match(commit_hash):
        warn(f"skipped block with malformed commit line: {block[0]!r}")
        return None

    author = ""
    date_line = None
    i = 1
    while i < len(block):
        line = block[i]
        if line.startswith("Author:"):
            author = line[len("Author:"):].strip()
        elif line.startswith("Date:"):
            date_line = line[len("Date:"):].strip()
        elif line.startswith("diff --git") or line == "" and date_line is not None:
            break
        i += 1
    if date_line is None:
        warn(f"skipped commit {commit_hash[:12]}: no Date line")
        return None
    try:
        moment = datetime.strptime(date_line, _DATE_FORMAT)
    except ValueError:
        warn(f"skipped commit {commit_hash[:12]}: unparseable date {date_line!r}")
        return None
    timestamp = int(moment.timestamp())
    tz_offset = date_line.rsplit(" ", 1)[-1]

    # message: the indented lines before the first diff header
    message_lines: list[str] = []
    j = i
    while j < len(block) and not block[j].startswith("diff --git"):
        line = block[j]
        if line.startswith("    "):
            message_lines.append(line[4:])
        elif line.strip() == "":
            message_lines.append("")
        j += 1
    while message_lines and message_lines[0] == "":
        message_lines.pop(0)
    while message_lines and message_lines[-1] == "":
        message_lines.pop()
    message = "\n".join(message_lines)

    hunks: list[Hunk] = []
    diff_headers: list[str] = []
    rest = block[j:]
    idx = 0
    while idx < len(rest):
        line = rest[idx]
        m = _HUNK_RE.match(line)
        if m:
            old_start, old_count = int(m.group(1)), int(m.group(2) or "1")
            new_start, new_count = int(m.group(3)), int(m.group(4) or "1")
            # consume exactly the advertised number of body lines; this
            # disambiguates body lines that look like diff headers
            remaining_old, remaining_new = old_count, new_count
            body: list[tuple[str, str]] = []
            idx += 1
            while idx < len(rest) and (remaining_old > 0 or remaining_new > 0):
                bl = rest[idx]
                if bl.startswith("\\"):
                    pass  # "\ No newline at end of file"
                elif bl.startswith("+"):
                    body.append((ADDED, bl[1:]))
                    remaining_new -= 1
                elif bl.startswith("-"):
                    body.append((REMOVED, bl[1:]))
                    remaining_old -= 1
                elif bl.startswith(" "):
                    body.append((CONTEXT, bl[1:]))
                    remaining_old -= 1
                    remaining_new -= 1
                elif bl == "":
                    body.append((CONTEXT, ""))
                    remaining_old -= 1
                    remaining_new -= 1
                else:
                    break
                idx += 1
            if remaining_old > 0 or remaining_new > 0:
                warn(f"commit {commit_hash[:12]}: hunk body shorter than its "
                     f"header @@ -{old_start},{old_count} "
                     f"+{new_start},{new_count} @@ advertises")
            hunks.append(Hunk(old_start, old_count, new_start, new_count, tuple(body)))
            continue
        if line.startswith(_DIFF_HEADER_PREFIXES):
            diff_headers.append(line)
        elif line.startswith("\\"):
            pass
        elif line.strip():
            warn(f"commit {commit_hash[:12]}: unexpected diff line {line!r}")
        idx += 1

    if not hunks:
        warn(f"commit {commit_hash[:12]}: no hunks in patch")
    return CommitRecord(
        hash=commit_hash,
        author=author,
        timestamp=timestamp,
        tz_offset=tz_offset,
        message=message,
        patch=tuple(hunks),
        diff_headers=tuple(diff_headers),
    )


def snippet_history(repo_path: str, fragment: CloneFragment,
                    include_merges: bool = True,
                    warnings: Optional[list[str]] = None) -> SnippetHistory:
    """Run ``git log -L`` for one fragment and parse the result.

    Raises SnippetLogError when git rejects the range (file unknown, range
    past end of file); GitError when git itself is unusable.
    """
    args = ["log"]
    if not include_merges:
        args.append("--no-merges")
    args += ["-L", f"{fragment.start_line},{fragment.end_line}:{fragment.file}"]
    proc = run_git(repo_path, args)
    if proc.returncode != 0:
        reason = proc.stderr.strip().splitlines()[-1] if proc.stderr.strip() else "unknown git error"
        raise SnippetLogError(
            fragment,
            f"git log -L failed for {fragment.file}:"
            f"{fragment.start_line},{fragment.end_line}: {reason}",
        )
    records = parse_git_log(proc.stdout, warnings)
    seen: set[str] = set()
    deduped = []
    for record in records:
        if record.hash not in seen:  # -L may repeat a commit per range split
            seen.add(record.hash)
            deduped.append(record)
    return SnippetHistory(fragment, tuple(deduped))


def snippet_histories(repo_path: str, fragments: Sequence[CloneFragment],
                      jobs: int = 0, include_merges: bool = True,
                      warnings: Optional[list[str]] = None,
                      ) -> list[SnippetHistory | SnippetLogError]:
    """Histories for many fragments, merged in fragment order.

    Failed fragments yield their SnippetLogError in place so the caller can
    record exclusions.  ``jobs`` git subprocesses run concurrently
    (default: logical CPU count).
    """
    jobs = jobs or os.cpu_count() or 1

    def one(fragment: CloneFragment) -> tuple[SnippetHistory | SnippetLogError, list[str]]:
        local: list[str] = []
        try:
            return snippet_history(repo_path, fragment, include_merges, local), local
        except SnippetLogError as exc:
            return exc, local

    if jobs == 1 or len(fragments) <= 1:
        outcomes = [one(f) for f in fragments]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(one, fragments))
    # merge warnings in fragment order, not completion order
    results = []
    for result, local in outcomes:
        if warnings is not None:
            warnings.extend(local)
        results.append(result)
    return results


def sample_random_snippets(repo_path: str, snippet_loc: int, count: int,
                           seed: int, exclude_pattern: str = "test",
                           ) -> list[CloneFragment]:
    """Sample fragments of snippet_loc lines uniformly over all valid start
    positions of the non-excluded corpus, with replacement, reproducibly."""
    if snippet_loc < 1:
        raise ValueError("snippet_loc must be >= 1")
    if count < 0:
        raise ValueError("count must be >= 0")
    locs = file_locs(repo_path, exclude_pattern)
    weighted = [(path, loc - snippet_loc + 1)
                for path, loc in sorted(locs.items())
                if loc - snippet_loc + 1 > 0]
    if not weighted:
        raise ValueError(f"no file has at least {snippet_loc} lines")
    total = sum(w for _, w in weighted)
    rng = random.Random(seed)
    samples = []
    for _ in range(count):
        r = rng.randrange(total)
        for path, weight in weighted:
            if r < weight:
                start = 1 + rng.randrange(weight)
                samples.append(CloneFragment(path, start, start + snippet_loc - 1))
                break
            r -= weight
    return samples


def repo_stats(repo_path: str, n_files: int, total_loc: int) -> RepoStats:
    """Repository-level statistics; corpus size figures are passed in from
    the already-built (test-excluded) corpus."""
    counted = run_git(repo_path, ["rev-list", "--count", "HEAD"])
    if counted.returncode != 0:
        raise GitError(f"git rev-list failed: {counted.stderr.strip()}")
    total_commits = int(counted.stdout.strip())

    root = run_git(repo_path, ["log", "--reverse", "--first-parent", "--format=%H %at"])
    head = run_git(repo_path, ["log", "-1", "--format=%at"])
    if root.returncode != 0 or head.returncode != 0 or not root.stdout.strip():
        raise GitError(f"git log failed: {(root.stderr or head.stderr).strip()}")
    root_ts = int(root.stdout.strip().splitlines()[0].split()[1])
    head_ts = int(head.stdout.strip())

    return RepoStats(
        n_files=n_files,
        total_loc=total_loc,
        repo_age_days=(head_ts - root_ts) // 86400,
        total_commit_count=total_commits,
    )
