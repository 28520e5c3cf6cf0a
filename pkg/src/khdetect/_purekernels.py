"""Pure-Python/numpy fallbacks for the compiled kernels.

Same call signatures as the Cython module ``_core``; selection happens in
``_kernels``.  GF(2) rows live in Python ints (bit i = column i), which keeps
row elimination inside C-speed bigint XOR.  The grid-state kernels enumerate
all n! permutations through itertools and batch the grading and rectangle
arithmetic through numpy.
"""

from __future__ import annotations

from itertools import permutations
from math import factorial
from typing import List, Sequence, Tuple

import numpy as np

BACKEND = "pure"


def f2_rank_ints(rows: Sequence[int]) -> int:
    """Rank over GF(2) of rows given as int bitmasks."""
    pivots: List[int] = []
    rank = 0
    for word in rows:
        for p in pivots:
            word = min(word, word ^ p)
        if word:
            pivots.append(word)
            pivots.sort(reverse=True)
            rank += 1
    return rank


def f2_rank(rows: Sequence[int], ncols: int) -> int:
    return f2_rank_ints(rows)


def f2_sparse_rank(
    nrows: int, ncols: int, rows: Sequence[int], cols: Sequence[int]
) -> int:
    """Rank over GF(2) of a sparse matrix given by entry coordinates.

    Repeated coordinates cancel mod 2.  Elimination picks the pivot column
    of least current degree (lazy heap) and within it the shortest row,
    which keeps fill-in small on the block-differential matrices this is
    used for.
    """
    import heapq

    row_of: dict = {}
    col_of: dict = {}
    for r, c in zip(rows, cols):
        r, c = int(r), int(c)
        if not (0 <= r < nrows and 0 <= c < ncols):
            raise IndexError("entry out of range")
        rset = row_of.setdefault(r, set())
        if c in rset:
            rset.discard(c)
            col_of[c].discard(r)
        else:
            rset.add(c)
            col_of.setdefault(c, set()).add(r)
    heap = [(len(rs), c) for c, rs in col_of.items() if rs]
    heapq.heapify(heap)
    rank = 0
    while heap:
        d, c = heapq.heappop(heap)
        rs = col_of.get(c)
        if not rs:
            continue
        if len(rs) != d:
            heapq.heappush(heap, (len(rs), c))
            continue
        pr = min(rs, key=lambda r: len(row_of[r]))
        prow = row_of.pop(pr)
        for cc in prow:
            col_of[cc].discard(pr)
        rank += 1
        for r in list(col_of.get(c, ())):
            vrow = row_of[r]
            for cc in prow:
                if cc in vrow:
                    vrow.discard(cc)
                    col_of[cc].discard(r)
                else:
                    vrow.add(cc)
                    dest = col_of.setdefault(cc, set())
                    dest.add(r)
                    heapq.heappush(heap, (len(dest), cc))
    return rank


def _perm_matrix(n: int) -> np.ndarray:
    """All permutations of 0..n-1 in lexicographic order, one per row."""
    return np.array(list(permutations(range(n))), dtype=np.int8)


def grid_state_sums(n: int, tables: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Per-state inversion complement and table sums.

    tables has shape (K, n, n); entry (k, c, r) is added to state sum k when
    the state places its point in column c at row r.  Returns
    (ixx, sums) where ixx[s] counts pairs c < c' with row(c) < row(c') and
    sums[s, k] = sum_c tables[k, c, row(c)].
    """
    P = _perm_matrix(n)
    N = P.shape[0]
    ixx = np.zeros(N, dtype=np.int32)
    for c in range(n):
        for c2 in range(c + 1, n):
            ixx += P[:, c] < P[:, c2]
    K = tables.shape[0]
    sums = np.zeros((N, K), dtype=np.int32)
    for k in range(K):
        for c in range(n):
            sums[:, k] += tables[k, c][P[:, c]]
    return ixx, sums


def _lex_ranks(Y: np.ndarray) -> np.ndarray:
    """Lexicographic rank of each permutation row of Y."""
    m, n = Y.shape
    ranks = np.zeros(m, dtype=np.int64)
    for c in range(n):
        smaller = np.zeros(m, dtype=np.int64)
        for c2 in range(c + 1, n):
            smaller += Y[:, c2] < Y[:, c]
        ranks += smaller * factorial(n - 1 - c)
    return ranks


def grid_diff_pairs(
    n: int, Xcols: Sequence[int], Ocols: Sequence[int]
) -> Tuple[np.ndarray, np.ndarray]:
    """Arrows of the tilde differential as (source, target) lex-rank pairs.

    For states x, y differing by a transposition there are two rectangles on
    the torus from x to y.  An arrow is emitted when exactly one of them has
    empty interior (no X or O marking, no other state point); two empty
    rectangles cancel mod 2.
    """
    P = _perm_matrix(n)
    N = P.shape[0]
    Xcols = list(Xcols)
    Ocols = list(Ocols)
    marks = [(Xcols[r], r) for r in range(n)] + [(Ocols[r], r) for r in range(n)]
    src_parts: List[np.ndarray] = []
    dst_parts: List[np.ndarray] = []
    for i in range(n):
        for j in range(i + 1, n):
            a = P[:, i].astype(np.int16)
            b = P[:, j].astype(np.int16)
            empties = []
            for (c0, w, r0vec) in (((i), (j - i) % n, a), ((j), (i - j) % n, b)):
                h = (b - a) % n if r0vec is a else (a - b) % n
                blocked = np.zeros(N, dtype=bool)
                for (mc, mr) in marks:
                    if (mc - c0) % n < w:
                        blocked |= ((mr - r0vec) % n) < h
                for c in range(n):
                    if c in (i, j) or not 0 < (c - c0) % n < w:
                        continue
                    blocked |= ((P[:, c] - r0vec) % n) < h
                empties.append(~blocked)
            emit = empties[0] ^ empties[1]
            sel = np.nonzero(emit)[0]
            if sel.size == 0:
                continue
            Y = P[sel].copy()
            Y[:, [i, j]] = Y[:, [j, i]]
            src_parts.append(sel.astype(np.int64))
            dst_parts.append(_lex_ranks(Y))
    if not src_parts:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy()
    return np.concatenate(src_parts), np.concatenate(dst_parts)
