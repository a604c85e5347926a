"""Patch similarity: bag-of-words cosine over tf-idf weighted patch text.

The two patches of a co-changed commit form a two-document corpus.  Terms
are lowercased runs of two or more word characters; weights use raw term
frequency and the smoothed idf ln((1+n)/(1+df)) + 1 with n = 2, vectors
are L2-normalized.  Identical non-empty patches score 1.0, token-disjoint
patches score 0.0.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field

from .githist import CommitRecord

_TERM_RE = re.compile(r"\w\w+")


@dataclass(frozen=True)
class PatchDocument:
    terms: Counter = field(default_factory=Counter)

    def __bool__(self) -> bool:
        return bool(self.terms)


@dataclass(frozen=True, slots=True)
class SimilarityScore:
    value: float
    degenerate: bool = False  # both documents were empty


def extract_patch_body(record: CommitRecord) -> str:
    """All hunk body lines (context, added, removed) with the leading
    marker character stripped, joined by newlines.  Diff headers and hunk
    header lines never reach the text."""
    return "\n".join(text for hunk in record.patch for _, text in hunk.lines)


def tokenize_patch(text: str) -> PatchDocument:
    """Multiset of lowercased word-character runs of length >= 2."""
    return PatchDocument(Counter(_TERM_RE.findall(text.lower())))


def patch_similarity(doc_a: PatchDocument, doc_b: PatchDocument) -> SimilarityScore:
    """Cosine similarity of the tf-idf vectors of the two documents."""
    if not doc_a and not doc_b:
        return SimilarityScore(0.0, degenerate=True)
    if not doc_a or not doc_b:
        return SimilarityScore(0.0)

    def weights(doc: PatchDocument) -> dict[str, float]:
        out = {}
        for term, tf in doc.terms.items():
            df = (term in doc_a.terms) + (term in doc_b.terms)
            out[term] = tf * (math.log(3.0 / (1.0 + df)) + 1.0)
        return out

    wa = weights(doc_a)
    wb = weights(doc_b)
    # single square root keeps identical documents at exactly 1.0
    norm_sq_a = sum(w * w for w in wa.values())
    norm_sq_b = sum(w * w for w in wb.values())
    dot = sum(w * wb[t] for t, w in wa.items() if t in wb)
    value = dot / math.sqrt(norm_sq_a * norm_sq_b)
    return SimilarityScore(min(1.0, max(0.0, value)))


def commit_similarity(record_a: CommitRecord, record_b: CommitRecord) -> SimilarityScore:
    """Similarity of the patches of two commit records."""
    return patch_similarity(
        tokenize_patch(extract_patch_body(record_a)),
        tokenize_patch(extract_patch_body(record_b)),
    )
