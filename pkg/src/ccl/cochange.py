"""Co-change matching and concerning-pair classification.

A commit co-changes a clone pair when its hash appears in both snippets'
histories.  A co-changed commit is concerning when its two patches have
similarity below the threshold.  A pair is Pattern 1 when the two last
commits differ, Pattern 2 when they coincide but are concerning.

Commit counting is snippet-level: each co-changed commit counts once per
snippet, so a pair with histories of 4 and 6 commits and 4 matches has 10
total and 8 co-changed commits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .clonedet import ClonePair
from .githist import CommitRecord, SnippetHistory
from .patchsim import SimilarityScore, commit_similarity

PATTERN_NONE = "none"
PATTERN_1 = "pattern1"
PATTERN_2 = "pattern2"


@dataclass(frozen=True)
class AnalysisConfig:
    threshold: float = 0.4

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must be in [0, 1]")


@dataclass(frozen=True)
class CoChangeMatch:
    hash: str
    record_a: CommitRecord
    record_b: CommitRecord
    similarity: SimilarityScore
    concerning: bool


@dataclass(frozen=True)
class PairClassification:
    pattern: str
    last_hash_a: str
    last_hash_b: str
    last_similarity: Optional[SimilarityScore]  # only when last hashes match
    pair: Optional[ClonePair] = None


def match_cochanges(hist_a: SnippetHistory, hist_b: SnippetHistory,
                    config: AnalysisConfig) -> list[CoChangeMatch]:
    """One match per hash present in both histories, newest first."""
    by_hash_b = {record.hash: record for record in hist_b.commits}
    matches = []
    for record_a in hist_a.commits:
        record_b = by_hash_b.get(record_a.hash)
        if record_b is None:
            continue
        similarity = commit_similarity(record_a, record_b)
        matches.append(CoChangeMatch(
            hash=record_a.hash,
            record_a=record_a,
            record_b=record_b,
            similarity=similarity,
            concerning=similarity.value < config.threshold,
        ))
    return matches


def cochange_counts(matches: list[CoChangeMatch],
                    hist_a: SnippetHistory, hist_b: SnippetHistory) -> dict:
    """Snippet-level counts and ratios for one pair (see module docstring)."""
    total = hist_a.length + hist_b.length
    cochanged = 2 * len(matches)
    concerning = 2 * sum(1 for m in matches if m.concerning)
    return {
        "total_commits": total,
        "cochanged_commits": cochanged,
        "concerning_commits": concerning,
        "cochange_ratio": cochanged / total if total else 0.0,
        "concerning_over_cochanged": concerning / cochanged if cochanged else 0.0,
        "concerning_over_total": concerning / total if total else 0.0,
    }


def aggregate_counts(per_pair: Iterable[dict]) -> dict:
    """Sum per-pair counts, then form the ratios from the sums."""
    total = cochanged = concerning = 0
    for counts in per_pair:
        total += counts["total_commits"]
        cochanged += counts["cochanged_commits"]
        concerning += counts["concerning_commits"]
    return {
        "total_commits": total,
        "cochanged_commits": cochanged,
        "concerning_commits": concerning,
        "cochange_ratio": cochanged / total if total else 0.0,
        "concerning_over_cochanged": concerning / cochanged if cochanged else 0.0,
        "concerning_over_total": concerning / total if total else 0.0,
    }


def classify_pair(hist_a: SnippetHistory, hist_b: SnippetHistory,
                  config: AnalysisConfig,
                  pair: Optional[ClonePair] = None) -> PairClassification:
    """Classify by the newest commit of each history."""
    if not hist_a.commits or not hist_b.commits:
        raise ValueError("classify_pair requires two nonempty histories")
    last_a, last_b = hist_a.commits[0], hist_b.commits[0]
    if last_a.hash != last_b.hash:
        return PairClassification(PATTERN_1, last_a.hash, last_b.hash, None, pair)
    similarity = commit_similarity(last_a, last_b)
    pattern = PATTERN_2 if similarity.value < config.threshold else PATTERN_NONE
    return PairClassification(pattern, last_a.hash, last_b.hash, similarity, pair)


def pattern_ratios(classifications: Iterable[PairClassification]) -> dict:
    classifications = list(classifications)
    p1 = sum(1 for c in classifications if c.pattern == PATTERN_1)
    p2 = sum(1 for c in classifications if c.pattern == PATTERN_2)
    total = len(classifications)
    concerning = p1 + p2
    return {
        "p1_count": p1,
        "p2_count": p2,
        "concerning_pair_ratio": concerning / total if total else 0.0,
        "p2_over_concerning": p2 / concerning if concerning else 0.0,
    }
