# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(2) rank kernels.

Drop-in replacements for the hot functions in ``_purekernels``: dense rank
on bitmask rows and sparse rank with min-degree pivoting.  The grid-state
enumeration stays in numpy (``_kernels`` falls back per function), since it
is already vectorized and far from the bottleneck.
"""

from libc.stdint cimport int64_t, uint64_t
from libcpp.pair cimport pair
from libcpp.queue cimport priority_queue
from libcpp.vector cimport vector
from libcpp.algorithm cimport sort as cpp_sort

import numpy as np

cdef extern from *:
    """
    static inline int khd_ctzll(unsigned long long x) { return __builtin_ctzll(x); }
    """
    int khd_ctzll(unsigned long long x) nogil

BACKEND = "compiled"


def f2_rank_ints(rows):
    """Rank over GF(2) of rows given as int bitmasks (width inferred)."""
    return f2_rank(rows, 0)


def f2_rank(rows, ncols):
    """Rank over GF(2); rows are Python int bitmasks, bit i = column i."""
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t maxbits = int(ncols)
    cdef Py_ssize_t i, b
    for i in range(nrows):
        b = int(rows[i]).bit_length()
        if b > maxbits:
            maxbits = b
    if nrows == 0 or maxbits == 0:
        return 0

    cdef Py_ssize_t nwords = (maxbits + 63) >> 6
    cdef vector[uint64_t] data
    data.resize(nrows * nwords)
    mask = (1 << 64) - 1
    cdef Py_ssize_t w
    for i in range(nrows):
        v = int(rows[i])
        w = 0
        while v:
            data[i * nwords + w] = <uint64_t> (v & mask)
            v >>= 64
            w += 1

    cdef vector[Py_ssize_t] pivot_of_bit
    pivot_of_bit.assign(maxbits, -1)
    cdef Py_ssize_t rank = 0, r, p, bit, ww
    cdef uint64_t word
    with nogil:
        for r in range(nrows):
            while True:
                bit = -1
                for w in range(nwords):
                    word = data[r * nwords + w]
                    if word:
                        bit = (w << 6) + khd_ctzll(word)
                        break
                if bit < 0:
                    break
                p = pivot_of_bit[bit]
                if p < 0:
                    pivot_of_bit[bit] = r
                    rank += 1
                    break
                for ww in range(w, nwords):
                    data[r * nwords + ww] ^= data[p * nwords + ww]
    return rank


cdef inline bint _row_contains(vector[int64_t]& row, int64_t val) nogil:
    cdef Py_ssize_t lo = 0, hi = row.size(), mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if row[mid] < val:
            lo = mid + 1
        else:
            hi = mid
    return lo < <Py_ssize_t> row.size() and row[lo] == val


def f2_sparse_rank(nrows, ncols, rows, cols):
    """Rank over GF(2) of a sparse matrix given by entry coordinates.

    Repeated coordinates cancel mod 2.  Pivot column of least current
    degree (lazy heap), pivot row the shortest in that column; rows are
    kept as sorted column lists and combined by merge.
    """
    cdef Py_ssize_t nr = int(nrows), nc = int(ncols)
    cdef int64_t[::1] rv = np.ascontiguousarray(rows, dtype=np.int64)
    cdef int64_t[::1] cv = np.ascontiguousarray(cols, dtype=np.int64)
    cdef Py_ssize_t m = rv.shape[0]
    if cv.shape[0] != m:
        raise ValueError("rows and cols must have equal length")

    cdef vector[vector[int64_t]] row_data
    row_data.resize(nr)
    cdef Py_ssize_t t
    cdef int64_t r, c
    for t in range(m):
        r = rv[t]
        c = cv[t]
        if r < 0 or r >= nr or c < 0 or c >= nc:
            raise IndexError("entry out of range")
        row_data[r].push_back(c)

    cdef vector[int64_t] col_deg
    col_deg.assign(nc, 0)
    cdef vector[vector[int64_t]] col_rows
    col_rows.resize(nc)
    cdef vector[int64_t] tmp
    cdef vector[char] row_alive
    row_alive.assign(nr, 1)
    cdef Py_ssize_t i, j, k
    for i in range(nr):
        if row_data[i].size() == 0:
            continue
        cpp_sort(row_data[i].begin(), row_data[i].end())
        tmp.clear()
        j = 0
        while j < <Py_ssize_t> row_data[i].size():
            k = j
            while (k < <Py_ssize_t> row_data[i].size()
                   and row_data[i][k] == row_data[i][j]):
                k += 1
            if (k - j) & 1:
                tmp.push_back(row_data[i][j])
            j = k
        row_data[i] = tmp
        for j in range(<Py_ssize_t> row_data[i].size()):
            c = row_data[i][j]
            col_rows[c].push_back(i)
            col_deg[c] += 1

    # Min-heap via negated keys: (-degree, column).
    cdef priority_queue[pair[int64_t, int64_t]] heap
    for c in range(nc):
        if col_deg[c] > 0:
            heap.push(pair[int64_t, int64_t](-col_deg[c], c))

    cdef vector[int64_t] live, merged
    cdef pair[int64_t, int64_t] top
    cdef Py_ssize_t rank = 0, idx, pr, a, bb, na, nb
    cdef int64_t d, cc, rr, prev
    with nogil:
        while heap.size() > 0:
            top = heap.top()
            heap.pop()
            d = -top.first
            c = top.second
            if col_deg[c] == 0:
                continue
            if d != col_deg[c]:
                heap.push(pair[int64_t, int64_t](-col_deg[c], c))
                continue
            # True occupants of the column: alive rows still holding c,
            # deduplicated (a row may sit in col_rows[c] more than once
            # after losing and regaining the entry).
            live.clear()
            for idx in range(<Py_ssize_t> col_rows[c].size()):
                rr = col_rows[c][idx]
                if row_alive[rr] and _row_contains(row_data[rr], c):
                    live.push_back(rr)
            cpp_sort(live.begin(), live.end())
            j = 0
            for idx in range(<Py_ssize_t> live.size()):
                if idx == 0 or live[idx] != live[idx - 1]:
                    live[j] = live[idx]
                    j += 1
            live.resize(j)
            col_rows[c] = live

            pr = live[0]
            for idx in range(1, <Py_ssize_t> live.size()):
                if row_data[live[idx]].size() < row_data[pr].size():
                    pr = live[idx]
            rank += 1
            row_alive[pr] = 0
            for idx in range(<Py_ssize_t> row_data[pr].size()):
                col_deg[row_data[pr][idx]] -= 1

            for idx in range(<Py_ssize_t> live.size()):
                rr = live[idx]
                if rr == pr:
                    continue
                # row rr ^= pivot row, as a sorted merge
                merged.clear()
                a = 0
                bb = 0
                na = row_data[rr].size()
                nb = row_data[pr].size()
                while a < na or bb < nb:
                    if bb >= nb or (a < na and row_data[rr][a] < row_data[pr][bb]):
                        merged.push_back(row_data[rr][a])
                        a += 1
                    elif a >= na or row_data[pr][bb] < row_data[rr][a]:
                        cc = row_data[pr][bb]
                        merged.push_back(cc)
                        col_deg[cc] += 1
                        col_rows[cc].push_back(rr)
                        heap.push(pair[int64_t, int64_t](-col_deg[cc], cc))
                        bb += 1
                    else:
                        cc = row_data[rr][a]
                        col_deg[cc] -= 1
                        a += 1
                        bb += 1
                row_data[rr] = merged
    return rank
