"""Type-1/type-2 clone pair detection over normalized token corpora.

All files' symbol sequences are joined into one integer sequence separated
by unique sentinel values; maximal repeated windows come from a suffix
array + LCP interval walk.  A window pair is reported when it cannot be
extended left or right while staying equal, both fragments clear the
length/rnr/tks thresholds, the fragments do not overlap, and the pair is
not contained in another reported pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from . import backend
from ..corpus import TokenizedFile
from ..lexer import Token

TYPE1 = "type1"
TYPE2 = "type2"


@dataclass(frozen=True, slots=True)
class CloneFragment:
    """A file snippet addressed both by lines (1-based, inclusive) and by
    token indices (0-based, inclusive).  Token indices are None for
    fragments that were not produced by the detector (random baseline
    snippets)."""

    file: str
    start_line: int
    end_line: int
    token_start: Optional[int] = None
    token_end: Optional[int] = None

    @property
    def loc(self) -> int:
        return self.end_line - self.start_line + 1


@dataclass(frozen=True, slots=True)
class ClonePair:
    a: CloneFragment
    b: CloneFragment
    clone_type: str
    rnr: float
    tks: int
    token_len: int


@dataclass(frozen=True)
class DetectorParams:
    min_token: int = 50
    min_rnr: float = 0.8
    min_tks: int = 12
    exclude_pattern: str = "test"

    def __post_init__(self) -> None:
        if self.min_token < 1:
            raise ValueError("min_token must be >= 1")
        if not 0.0 <= self.min_rnr <= 1.0:
            raise ValueError("min_rnr must be in [0, 1]")
        if self.min_tks < 1:
            raise ValueError("min_tks must be >= 1")


def compute_rnr(fragment_symbols: Sequence) -> float:
    """Fraction of positions not covered by immediate window repetitions."""
    if not fragment_symbols:
        raise ValueError("rnr is undefined for an empty fragment")
    ids: dict = {}
    seq = [ids.setdefault(s, len(ids)) for s in fragment_symbols]
    return backend.nonrepeat_count(seq) / len(seq)


def compute_tks(fragment_tokens: Sequence[Token]) -> int:
    """Number of distinct raw token texts in the fragment."""
    if not fragment_tokens:
        raise ValueError("tks is undefined for an empty fragment")
    return len({t.text for t in fragment_tokens})


def _maximal_window_pairs(seq: list[int], min_len: int) -> list[tuple[int, int, int]]:
    """Every (pos_a, pos_b, length) with equal windows of length >= min_len
    that cannot be extended left or right while remaining equal.

    The caller must make seq[0] unique and separate logical documents with
    unique values, so matches never span document bounds and every token
    position has a left context symbol.
    """
    n = len(seq)
    if n < 2:
        return []
    sa = backend.suffix_array(seq)
    lcp = backend.lcp_array(seq, sa)
    out: list[tuple[int, int, int]] = []
    leaf_depth = n + 1

    def join(node: list, child: list, depth: int) -> list:
        # node/child: [position_count, {left_symbol: [positions]}].  Cross
        # pairs between them have an exact common prefix of `depth`; equal
        # left symbols mean the pair extends left, so it is skipped.
        if depth < min_len:
            return [0, {}]
        count_a, groups_a = node
        count_b, groups_b = child
        if count_a and count_b:
            for cb, qs in groups_b.items():
                for ca, ps in groups_a.items():
                    if ca == cb:
                        continue
                    for p in ps:
                        for q in qs:
                            out.append((p, q, depth) if p < q else (q, p, depth))
        if count_a < count_b:
            groups_a, groups_b = groups_b, groups_a
        for c, qs in groups_b.items():
            lst = groups_a.get(c)
            if lst is None:
                groups_a[c] = qs
            else:
                lst.extend(qs)
        return [count_a + count_b, groups_a]

    stack: list[list] = []  # [depth, [count, groups]] with increasing depth
    for idx in range(n):
        boundary = lcp[idx] if idx else 0
        carried = None
        while stack and stack[-1][0] > boundary:
            depth, groups = stack.pop()
            if carried is not None:
                groups = join(groups, carried, depth)
            carried = groups
        if carried is not None:
            if boundary < min_len:
                carried = [0, {}]
            if stack and stack[-1][0] == boundary:
                stack[-1][1] = join(stack[-1][1], carried, boundary)
            else:
                stack.append([boundary, carried])
        pos = sa[idx]
        left = seq[pos - 1] if pos > 0 else -1
        stack.append([leaf_depth, [1, {left: [pos]}]])
    carried = None
    while stack:
        depth, groups = stack.pop()
        if carried is not None:
            groups = join(groups, carried, depth)
        carried = groups
    return out


def _strictly_inside(inner: CloneFragment, outer: CloneFragment) -> bool:
    return (
        inner.file == outer.file
        and outer.token_start <= inner.token_start
        and inner.token_end <= outer.token_end
        and (inner.token_end - inner.token_start) < (outer.token_end - outer.token_start)
    )


def _suppress_contained(candidates: list[ClonePair]) -> list[ClonePair]:
    """Drop pairs whose fragments both lie strictly inside the fragments of
    another candidate (either orientation)."""
    by_files: dict[frozenset, list[ClonePair]] = {}
    for pair in candidates:
        by_files.setdefault(frozenset((pair.a.file, pair.b.file)), []).append(pair)
    kept = []
    for pair in candidates:
        group = by_files[frozenset((pair.a.file, pair.b.file))]
        contained = any(
            other is not pair
            and (
                (_strictly_inside(pair.a, other.a) and _strictly_inside(pair.b, other.b))
                or (_strictly_inside(pair.a, other.b) and _strictly_inside(pair.b, other.a))
            )
            for other in group
        )
        if not contained:
            kept.append(pair)
    return kept


def detect_clone_pairs(
    corpus: Mapping[str, TokenizedFile], params: DetectorParams
) -> list[ClonePair]:
    """All maximal clone pairs of the corpus passing the detector thresholds,
    in deterministic order.  The corpus must already be exclusion-filtered.
    """
    files = sorted(corpus)
    if not files:
        return []

    sym_id: dict[str, int] = {}
    for f in files:
        for s in corpus[f].symbols:
            if s not in sym_id:
                sym_id[s] = len(sym_id)

    seq: list[int] = []
    origin: list[tuple[int, int]] = []  # aligned with seq; (-1, -1) for sentinels
    sentinel = len(sym_id)
    seq.append(sentinel)
    origin.append((-1, -1))
    sentinel += 1
    for fi, f in enumerate(files):
        for local, s in enumerate(corpus[f].symbols):
            seq.append(sym_id[s])
            origin.append((fi, local))
        seq.append(sentinel)
        origin.append((-1, -1))
        sentinel += 1

    raw = _maximal_window_pairs(seq, params.min_token)

    rnr_cache: dict[tuple[int, int], float] = {}
    tks_cache: dict[tuple[int, int], int] = {}
    candidates: list[ClonePair] = []
    seen: set[tuple] = set()
    for p, q, length in raw:
        fa, la = origin[p]
        fb, lb = origin[q]
        if (files[fa], la) > (files[fb], lb):
            fa, la, fb, lb = fb, lb, fa, la
            p, q = q, p
        key = (fa, la, fb, lb, length)
        if key in seen:
            continue
        seen.add(key)

        file_a, file_b = files[fa], files[fb]
        toks_a = corpus[file_a].tokens[la : la + length]
        toks_b = corpus[file_b].tokens[lb : lb + length]
        frag_a = CloneFragment(file_a, toks_a[0].line, toks_a[-1].line, la, la + length - 1)
        frag_b = CloneFragment(file_b, toks_b[0].line, toks_b[-1].line, lb, lb + length - 1)

        if file_a == file_b and not (
            frag_a.end_line < frag_b.start_line or frag_b.end_line < frag_a.start_line
        ):
            continue

        rnr = rnr_cache.get((fa, la, length))
        if rnr is None:
            rnr = rnr_cache.get((fb, lb, length))
        if rnr is None:
            rnr = backend.nonrepeat_count(seq[p : p + length]) / length
            rnr_cache[(fa, la, length)] = rnr
            rnr_cache[(fb, lb, length)] = rnr
        if rnr < params.min_rnr:
            continue

        tks_a = tks_cache.get((fa, la, length))
        if tks_a is None:
            tks_a = len({t.text for t in toks_a})
            tks_cache[(fa, la, length)] = tks_a
        tks_b = tks_cache.get((fb, lb, length))
        if tks_b is None:
            tks_b = len({t.text for t in toks_b})
            tks_cache[(fb, lb, length)] = tks_b
        tks = min(tks_a, tks_b)
        if tks < params.min_tks:
            continue

        clone_type = (
            TYPE1
            if all(x.text == y.text for x, y in zip(toks_a, toks_b))
            else TYPE2
        )
        candidates.append(ClonePair(frag_a, frag_b, clone_type, rnr, tks, length))

    kept = _suppress_contained(candidates)
    kept.sort(
        key=lambda pr: (
            pr.a.file, pr.a.token_start, pr.a.token_end,
            pr.b.file, pr.b.token_start, pr.b.token_end,
        )
    )
    return kept


def _fragment_key(frag: CloneFragment) -> tuple:
    return (frag.file, frag.token_start, frag.token_end)


def build_clone_sets(pairs: Iterable[ClonePair]) -> tuple[list[ClonePair], int]:
    """Group fragments into clone sets by transitive pairing; keep only the
    pairs whose set has exactly two fragments, count the dropped sets."""
    pairs = list(pairs)
    parent: dict[tuple, tuple] = {}

    def find(x: tuple) -> tuple:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for pair in pairs:
        for frag in (pair.a, pair.b):
            parent.setdefault(_fragment_key(frag), _fragment_key(frag))
        ra, rb = find(_fragment_key(pair.a)), find(_fragment_key(pair.b))
        if ra != rb:
            parent[ra] = rb

    sizes: dict[tuple, int] = {}
    for key in parent:
        root = find(key)
        sizes[root] = sizes.get(root, 0) + 1

    kept = [pair for pair in pairs if sizes[find(_fragment_key(pair.a))] == 2]
    dropped = sum(1 for root, size in sizes.items() if size > 2)
    return kept, dropped
