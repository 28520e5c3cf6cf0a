"""Exact linear algebra over GF(2) and over the rationals.

GF(2) matrices keep each row as a Python int bitmask and delegate rank
computation to the selected kernel backend.  Integer matrices represent maps
with rational rank computed by fraction-free Bareiss elimination, so no
floating point is involved anywhere.

Matrices act on column vectors: a matrix with shape (nrows, ncols) is a map
from a ncols-dimensional space to a nrows-dimensional one.
"""

from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple

from . import _kernels

__all__ = [
    "F2Matrix",
    "IntMatrix",
    "rank_f2",
    "rank_q",
    "homology_ranks",
    "CompositionNotZero",
]


class CompositionNotZero(ValueError):
    """d_out composed with d_in is nonzero, so the input is not a complex."""


class F2Matrix:
    """Matrix over GF(2); row i is an int whose bit j is the (i, j) entry."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[int]):
        if len(rows) != nrows:
            raise ValueError("row count mismatch")
        mask = (1 << ncols) - 1
        self.nrows = nrows
        self.ncols = ncols
        self.rows: List[int] = [int(r) & mask for r in rows]

    @staticmethod
    def zeros(nrows: int, ncols: int) -> "F2Matrix":
        return F2Matrix(nrows, ncols, [0] * nrows)

    @staticmethod
    def from_entries(
        nrows: int, ncols: int, entries: Iterable[Tuple[int, int]]
    ) -> "F2Matrix":
        """Build from (row, col) positions; repeated positions cancel mod 2."""
        rows = [0] * nrows
        for r, c in entries:
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise IndexError("entry out of range")
            rows[r] ^= 1 << c
        return F2Matrix(nrows, ncols, rows)

    @staticmethod
    def from_dense(dense: Sequence[Sequence[int]]) -> "F2Matrix":
        nrows = len(dense)
        ncols = len(dense[0]) if nrows else 0
        rows = []
        for dr in dense:
            word = 0
            for j, v in enumerate(dr):
                if v % 2:
                    word |= 1 << j
            rows.append(word)
        return F2Matrix(nrows, ncols, rows)

    def entry(self, r: int, c: int) -> int:
        return (self.rows[r] >> c) & 1

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.rows)

    def mul(self, other: "F2Matrix") -> "F2Matrix":
        """Matrix product over GF(2) (self composed after other)."""
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in product")
        out = []
        for row in self.rows:
            acc = 0
            rem = row
            while rem:
                j = (rem & -rem).bit_length() - 1
                acc ^= other.rows[j]
                rem &= rem - 1
            out.append(acc)
        return F2Matrix(self.nrows, other.ncols, out)

    def rank(self) -> int:
        return _kernels.f2_rank(self.rows, self.ncols)


class IntMatrix:
    """Dense integer matrix with exact rational rank."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[Sequence[int]]):
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise ValueError("shape mismatch")
        self.nrows = nrows
        self.ncols = ncols
        self.rows: List[List[int]] = [[int(v) for v in r] for r in rows]

    @staticmethod
    def zeros(nrows: int, ncols: int) -> "IntMatrix":
        return IntMatrix(nrows, ncols, [[0] * ncols for _ in range(nrows)])

    @staticmethod
    def from_entries(
        nrows: int, ncols: int, entries: Iterable[Tuple[int, int, int]]
    ) -> "IntMatrix":
        m = IntMatrix.zeros(nrows, ncols)
        for r, c, v in entries:
            m.rows[r][c] += v
        return m

    def entry(self, r: int, c: int) -> int:
        return self.rows[r][c]

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.rows for v in row)

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in product")
        out = IntMatrix.zeros(self.nrows, other.ncols)
        for i, row in enumerate(self.rows):
            orow = out.rows[i]
            for k, v in enumerate(row):
                if v:
                    brow = other.rows[k]
                    for j, w in enumerate(brow):
                        if w:
                            orow[j] += v * w
        return out

    def mod2(self) -> F2Matrix:
        words = []
        for row in self.rows:
            word = 0
            for j, v in enumerate(row):
                if v % 2:
                    word |= 1 << j
            words.append(word)
        return F2Matrix(self.nrows, self.ncols, words)

    def rank(self) -> int:
        return _bareiss_rank(self.rows)


def _bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination; all divisions below are exact."""
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    rank = 0
    prev = 1
    for c in range(nc):
        piv = None
        for i in range(rank, nr):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pval = m[rank][c]
        for i in range(rank + 1, nr):
            mic = m[i][c]
            row_i = m[i]
            row_r = m[rank]
            for j in range(c + 1, nc):
                row_i[j] = (row_i[j] * pval - mic * row_r[j]) // prev
            row_i[c] = 0
        prev = pval
        rank += 1
        if rank == nr:
            break
    return rank


def rank_f2(matrix: F2Matrix) -> int:
    """Rank of a GF(2) matrix (kernel-backed)."""
    return matrix.rank()


def rank_q(matrix: IntMatrix) -> int:
    """Rank of an integer matrix over the rationals."""
    return matrix.rank()


def homology_ranks(d_in, d_out, field: str = "f2") -> int:
    """Dimension of ker(d_out)/im(d_in) at the middle group.

    d_in maps into the middle space and d_out maps out of it, so the middle
    dimension is d_in's row count, which must equal d_out's column count.
    The composite d_out * d_in is checked to vanish first.
    """
    if field not in ("f2", "q"):
        raise ValueError("field must be 'f2' or 'q'")
    if d_in.nrows != d_out.ncols:
        raise ValueError("middle dimension mismatch between d_in and d_out")
    if d_in.ncols and d_out.nrows and not d_out.mul(d_in).is_zero():
        raise CompositionNotZero("d_out o d_in != 0")
    dim_mid = d_in.nrows
    return dim_mid - d_in.rank() - d_out.rank()
