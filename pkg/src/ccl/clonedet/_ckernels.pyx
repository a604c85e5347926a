# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the clone detector.

Same contract as the pure-Python module ``_kernels``: integer sequences in,
plain lists/ints out.  The suffix array uses prefix doubling with counting
sort, O(n log n).
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memset

BACKEND = "c"


cdef void* _xmalloc(size_t nbytes) except NULL:
    cdef void* p = malloc(nbytes)
    if p == NULL:
        raise MemoryError()
    return p


def suffix_array(seq):
    cdef Py_ssize_t n = len(seq)
    if n == 0:
        return []

    # compress values to 0..m-1 so counting sort buckets stay bounded by n
    comp = {v: r for r, v in enumerate(sorted(set(seq)))}

    cdef long* rank = <long*> _xmalloc(n * sizeof(long))
    cdef long* newrank = <long*> _xmalloc(n * sizeof(long))
    cdef long* sa = <long*> _xmalloc(n * sizeof(long))
    cdef long* tmp = <long*> _xmalloc(n * sizeof(long))
    cdef long* cnt = <long*> _xmalloc((n + 1) * sizeof(long))

    cdef Py_ssize_t i, j, p, k
    cdef long ra, rb, r2a, r2b, total, c
    try:
        for i in range(n):
            rank[i] = comp[seq[i]]

        # initial order: counting sort by first symbol
        memset(cnt, 0, (n + 1) * sizeof(long))
        for i in range(n):
            cnt[rank[i]] += 1
        total = 0
        for i in range(n + 1):
            c = cnt[i]
            cnt[i] = total
            total += c
        for i in range(n):
            sa[cnt[rank[i]]] = i
            cnt[rank[i]] += 1

        k = 1
        while rank[sa[n - 1]] != n - 1:
            # order by second key: suffixes with i+k past the end first,
            # then previous sa order shifted by k (both already sorted by
            # the value of rank[i+k])
            p = 0
            for i in range(n - k, n):
                tmp[p] = i
                p += 1
            for j in range(n):
                if sa[j] >= k:
                    tmp[p] = sa[j] - k
                    p += 1
            # stable counting sort by first key
            memset(cnt, 0, (n + 1) * sizeof(long))
            for i in range(n):
                cnt[rank[i]] += 1
            total = 0
            for i in range(n + 1):
                c = cnt[i]
                cnt[i] = total
                total += c
            for j in range(n):
                i = tmp[j]
                sa[cnt[rank[i]]] = i
                cnt[rank[i]] += 1
            # re-rank
            newrank[sa[0]] = 0
            for j in range(1, n):
                ra = rank[sa[j - 1]]
                rb = rank[sa[j]]
                r2a = rank[sa[j - 1] + k] if sa[j - 1] + k < n else -1
                r2b = rank[sa[j] + k] if sa[j] + k < n else -1
                newrank[sa[j]] = newrank[sa[j - 1]] + (ra != rb or r2a != r2b)
            for i in range(n):
                rank[i] = newrank[i]
            k <<= 1

        return [sa[i] for i in range(n)]
    finally:
        free(rank)
        free(newrank)
        free(sa)
        free(tmp)
        free(cnt)


def lcp_array(seq, sa):
    cdef Py_ssize_t n = len(seq)
    result = [0] * n
    if n == 0:
        return result

    cdef long* s = <long*> _xmalloc(n * sizeof(long))
    cdef long* sar = <long*> _xmalloc(n * sizeof(long))
    cdef long* rank = <long*> _xmalloc(n * sizeof(long))
    cdef Py_ssize_t i, j, h, r
    try:
        comp = {v: r for r, v in enumerate(sorted(set(seq)))}
        for i in range(n):
            s[i] = comp[seq[i]]
            sar[i] = sa[i]
        for i in range(n):
            rank[sar[i]] = i
        h = 0
        for i in range(n):
            r = rank[i]
            if r > 0:
                j = sar[r - 1]
                while i + h < n and j + h < n and s[i + h] == s[j + h]:
                    h += 1
                result[r] = h
                if h:
                    h -= 1
            else:
                h = 0
        return result
    finally:
        free(s)
        free(sar)
        free(rank)


def nonrepeat_count(seq):
    cdef Py_ssize_t n = len(seq)
    if n == 0:
        raise ValueError("empty sequence")

    cdef long* s = <long*> _xmalloc(n * sizeof(long))
    cdef long* diff = <long*> _xmalloc((n + 1) * sizeof(long))
    cdef Py_ssize_t p, j, run
    cdef long cover, count
    try:
        comp = {v: r for r, v in enumerate(sorted(set(seq)))}
        for j in range(n):
            s[j] = comp[seq[j]]
        memset(diff, 0, (n + 1) * sizeof(long))
        for p in range(1, n // 2 + 1):
            run = 0
            for j in range(p, n):
                if s[j] == s[j - p]:
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
    finally:
        free(s)
        free(diff)
