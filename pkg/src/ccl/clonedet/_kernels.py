"""Pure-Python kernels for the clone detector.

Same contract as the compiled module ``_ckernels``: integer sequences in,
plain lists/ints out.  Used as the fallback when the extension is not
built; also the reference the extension is tested against.
"""

from __future__ import annotations

BACKEND = "python"


def suffix_array(seq: list[int]) -> list[int]:
    """Suffix array by prefix doubling, O(n log^2 n)."""
    n = len(seq)
    if n == 0:
        return []
    rank = list(seq)
    sa = list(range(n))
    tmp = [0] * n
    k = 1
    while True:
        def key(i: int, rank=rank, k=k, n=n) -> tuple[int, int]:
            return (rank[i], rank[i + k] if i + k < n else -1)

        sa.sort(key=key)
        tmp[sa[0]] = 0
        for idx in range(1, n):
            tmp[sa[idx]] = tmp[sa[idx - 1]] + (key(sa[idx]) != key(sa[idx - 1]))
        rank, tmp = tmp, rank
        if rank[sa[-1]] == n - 1:
            return sa
        k *= 2


def lcp_array(seq: list[int], sa: list[int]) -> list[int]:
    """Kasai: lcp[i] = longest common prefix of suffixes sa[i-1], sa[i]."""
    n = len(seq)
    lcp = [0] * n
    rank = [0] * n
    for i, s in enumerate(sa):
        rank[s] = i
    h = 0
    for i in range(n):
        r = rank[i]
        if r > 0:
            j = sa[r - 1]
            while i + h < n and j + h < n and seq[i + h] == seq[j + h]:
                h += 1
            lcp[r] = h
            if h:
                h -= 1
        else:
            h = 0
    return lcp


def nonrepeat_count(seq: list[int]) -> int:
    """Number of positions not covered by an immediate window repetition.

    Position i (1-based) is repeated when for some period p <= i//2 the
    window ending at i equals the window immediately before it; all p
    positions of the trailing window are then marked.  Marks accumulate
    over every i and every valid p.
    """
    n = len(seq)
    if n == 0:
        raise ValueError("empty sequence")
    diff = [0] * (n + 1)
    for p in range(1, n // 2 + 1):
        run = 0
        for j in range(p, n):
            if seq[j] == seq[j - p]:
                run += 1
                if run >= p:
                    diff[j - p + 1] += 1
                    diff[j + 1] -= 1
            else:
                run = 0
    count = 0
    cover = 0
    for j in range(n):
        cover += diff[j]
        if cover == 0:
            count += 1
    return count
