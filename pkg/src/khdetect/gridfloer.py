"""Grid diagrams and combinatorial link Floer homology over F2.

Conventions, fixed once for the whole package:

* Rows are indexed 0..n-1 bottom to top, columns 0..n-1 left to right.
  Markings live at cell centers (c + 1/2, r + 1/2); grid states occupy
  lattice points (c, r).
* Each row carries one horizontal segment oriented from its O to its X;
  each column carries one vertical segment oriented from its X to its O.
  At a crossing the vertical segment is in front.
* Maslov grading M(s) = J(s,s) - 2 J(s,O) + J(O,O) + 1 with J the planar
  point-count pairing on the fundamental domain [0, n)^2.
* Alexander gradings are stored DOUBLED (true grading = stored / 2), one
  per component, computed from winding numbers of that component's own
  projection and symmetrized so the hat-level top and bottom gradings of
  every component are negatives of each other.

The tilde complex counts empty rectangles mod 2.  Its homology determines
the hat groups through the stabilization factor with generators at
(maslov, doubled alex) = (0, 0) and (-1, -2): one factor per extra pair of
markings on a component.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .laurent import LaurentPoly, NotDivisible
from .linkdiag import BraidSpec

DEFAULT_MAX_GRID = 10

CONVENTION = "rows O->X, columns X->O, vertical strand in front"


class NotPermutation(ValueError):
    pass


class MarkingCollision(ValueError):
    pass


class ComponentLabelMismatch(ValueError):
    pass


class GridTooLarge(ValueError):
    pass


class DifferentialNotSquareZero(RuntimeError):
    pass


class DeconvolutionFailed(ArithmeticError):
    pass


class StabilizationDivisionFailed(ArithmeticError):
    pass


def _max_grid() -> int:
    raw = os.environ.get("KHDETECT_MAX_GRID")
    if raw is None:
        return DEFAULT_MAX_GRID
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_MAX_GRID


@dataclass(frozen=True)
class MultiGrading:
    """Maslov grading plus one doubled Alexander grading per component."""

    maslov: int
    alex2: Tuple[int, ...]

    def astuple(self) -> Tuple[int, ...]:
        return (self.maslov,) + self.alex2


@dataclass(frozen=True)
class GridDiagram:
    """Planar grid diagram: X and O columns per row plus component labels.

    ``x_cols[r]`` / ``o_cols[r]`` give the marking columns in row r, and
    ``comp_of_o[r]`` the component index of the strand through row r's
    markings.  ``convention`` records the fixed orientation convention and
    admits no other value.
    """

    n: int
    x_cols: Tuple[int, ...]
    o_cols: Tuple[int, ...]
    comp_of_o: Tuple[int, ...]
    convention: str = CONVENTION

    def __post_init__(self) -> None:
        n = self.n
        object.__setattr__(self, "x_cols", tuple(int(c) for c in self.x_cols))
        object.__setattr__(self, "o_cols", tuple(int(c) for c in self.o_cols))
        object.__setattr__(self, "comp_of_o", tuple(int(c) for c in self.comp_of_o))
        if self.convention != CONVENTION:
            raise ValueError(f"unsupported orientation convention {self.convention!r}")
        if n < 2:
            raise NotPermutation("grid needs size at least 2")
        for name, cols in (("X", self.x_cols), ("O", self.o_cols)):
            if len(cols) != n or sorted(cols) != list(range(n)):
                raise NotPermutation(f"{name} columns are not a permutation of 0..{n - 1}")
        for r in range(n):
            if self.x_cols[r] == self.o_cols[r]:
                raise MarkingCollision(f"row {r} has X and O in the same cell")
        if len(self.comp_of_o) != n:
            raise ComponentLabelMismatch("need one component label per row")
        cycles = self._row_cycles()
        label_of_cycle: Dict[int, int] = {}
        for ci, rows in enumerate(cycles):
            labels = {self.comp_of_o[r] for r in rows}
            if len(labels) != 1:
                raise ComponentLabelMismatch(f"rows {sorted(rows)} lie on one strand but carry labels {sorted(labels)}")
            label_of_cycle[ci] = labels.pop()
        used = sorted(label_of_cycle.values())
        if used != list(range(len(cycles))):
            raise ComponentLabelMismatch(f"component labels {used} are not 0..{len(cycles) - 1} with one strand each")

    def _row_cycles(self) -> List[List[int]]:
        """Rows grouped by strand: row r connects onward to the row holding
        the O in the column of row r's X."""
        o_row = [0] * self.n
        for r, c in enumerate(self.o_cols):
            o_row[c] = r
        seen = [False] * self.n
        cycles: List[List[int]] = []
        for r0 in range(self.n):
            if seen[r0]:
                continue
            cyc = []
            r = r0
            while not seen[r]:
                seen[r] = True
                cyc.append(r)
                r = o_row[self.x_cols[r]]
            cycles.append(cyc)
        return cycles

    @property
    def num_components(self) -> int:
        return max(self.comp_of_o) + 1

    def rows_of(self, comp: int) -> Tuple[int, ...]:
        return tuple(r for r in range(self.n) if self.comp_of_o[r] == comp)

    def n_markings(self, comp: int) -> int:
        """Number of O markings (equivalently rows) on the component."""
        return len(self.rows_of(comp))

    def comp_of_col(self, c: int) -> int:
        o_row = self.o_cols.index(c)
        return self.comp_of_o[o_row]

    def _segments(self):
        """Vertical segments (col, row_lo, row_hi, upward) and horizontal
        segments (row, col_lo, col_hi, rightward), with component labels."""
        x_row = [0] * self.n
        o_row = [0] * self.n
        for r in range(self.n):
            x_row[self.x_cols[r]] = r
            o_row[self.o_cols[r]] = r
        vert = []
        for c in range(self.n):
            xr, orr = x_row[c], o_row[c]
            vert.append((c, min(xr, orr), max(xr, orr), xr < orr, self.comp_of_o[orr]))
        horiz = []
        for r in range(self.n):
            co, cx = self.o_cols[r], self.x_cols[r]
            horiz.append((r, min(co, cx), max(co, cx), co < cx, self.comp_of_o[r]))
        return vert, horiz

    def linking_matrix(self) -> List[List[int]]:
        """Pairwise linking numbers from signed segment crossings.

        A vertical (in front) meeting a horizontal contributes the sign of
        det(vertical direction, horizontal direction); linking is half the
        signed count between two components.  Diagonal entries are 0.
        """
        m = self.num_components
        out = [[0] * m for _ in range(m)]
        vert, horiz = self._segments()
        for c, rlo, rhi, up, ci in vert:
            for r, clo, chi, rightward, cj in horiz:
                if ci == cj or not (rlo < r < rhi and clo < c < chi):
                    continue
                sign = -1 if up == rightward else 1
                out[ci][cj] += sign
                out[cj][ci] += sign
        for i in range(m):
            for j in range(m):
                out[i][j] //= 2
        return out

    def linking_number(self, i: int, j: int) -> int:
        return self.linking_matrix()[i][j]


def parse_grid(text: str) -> GridDiagram:
    """Parse ``n / X: c0 c1 ... / O: c0 c1 ... / comp: l0 l1 ...``.

    Sections may be separated by slashes or newlines; the comp section is
    optional, in which case strands are labeled in order of their lowest
    row.
    """
    parts = [p.strip() for p in text.replace("\n", "/").split("/") if p.strip()]
    if not parts:
        raise NotPermutation("empty grid spec")
    try:
        n = int(parts[0])
    except ValueError:
        raise NotPermutation(f"grid spec must start with the size, got {parts[0]!r}")
    fields: Dict[str, List[int]] = {}
    for part in parts[1:]:
        if ":" not in part:
            raise NotPermutation(f"malformed grid section {part!r}")
        key, _, rest = part.partition(":")
        key = key.strip().lower()
        if key not in ("x", "o", "comp"):
            raise NotPermutation(f"unknown grid section {key!r}")
        try:
            fields[key] = [int(tok) for tok in rest.split()]
        except ValueError:
            raise NotPermutation(f"non-integer entry in section {key!r}")
    if "x" not in fields or "o" not in fields:
        raise NotPermutation("grid spec needs X and O sections")
    x_cols, o_cols = fields["x"], fields["o"]
    if len(x_cols) != n or len(o_cols) != n:
        raise NotPermutation(f"expected {n} columns per section")
    comp = fields.get("comp")
    if comp is None:
        comp = _default_labels(n, x_cols, o_cols)
    return GridDiagram(n, tuple(x_cols), tuple(o_cols), tuple(comp))


def emit_grid(G: GridDiagram) -> str:
    return " / ".join(
        [
            str(G.n),
            "X: " + " ".join(str(c) for c in G.x_cols),
            "O: " + " ".join(str(c) for c in G.o_cols),
            "comp: " + " ".join(str(c) for c in G.comp_of_o),
        ]
    )


def _default_labels(n: int, x_cols: Sequence[int], o_cols: Sequence[int]) -> List[int]:
    """Label strands 0,1,... in order of each strand's lowest row."""
    if sorted(x_cols) != list(range(n)) or sorted(o_cols) != list(range(n)):
        raise NotPermutation("X and O columns must be permutations")
    o_row = [0] * n
    for r, c in enumerate(o_cols):
        o_row[c] = r
    labels = [-1] * n
    nxt = 0
    for r0 in range(n):
        if labels[r0] >= 0:
            continue
        r = r0
        while labels[r] < 0:
            labels[r] = nxt
            r = o_row[x_cols[r]]
        nxt += 1
    return labels


# ---------------------------------------------------------------------------
# Gradings


def _windings(G: GridDiagram) -> List[np.ndarray]:
    """Winding number of each component's projection around every lattice
    point, as (n+1) x (n+1) arrays indexed [col][row]."""
    n = G.n
    out = [np.zeros((n + 1, n + 1), dtype=np.int64) for _ in range(G.num_components)]
    vert, _ = G._segments()
    for c, rlo, rhi, up, ci in vert:
        # A strand in column c sits at x = c + 1/2, left of lattice columns
        # c+1 and beyond; it spans lattice rows rlo+1..rhi.  Downward strands
        # wind positively around points to their right.
        out[ci][c + 1 :, rlo + 1 : rhi + 1] += -1 if up else 1
    return out


@lru_cache(maxsize=64)
def _grading_tables(G: GridDiagram):
    """Per-point lookup tables for the kernel plus additive constants.

    Returns (tables, ioo, consts): tables[0]/[1] count O markings weakly
    northeast / strictly southwest of a lattice point, tables[2+i] holds
    -8 x (winding of component i); consts[i] completes the doubled
    Alexander grading as (sum + consts[i]) / 4.
    """
    n = G.n
    m = G.num_components
    tables = np.zeros((2 + m, n, n), dtype=np.int64)
    o_pts = [(G.o_cols[r], r) for r in range(n)]
    for c in range(n):
        for r in range(n):
            tables[0, c, r] = sum(1 for oc, orr in o_pts if oc >= c and orr >= r)
            tables[1, c, r] = sum(1 for oc, orr in o_pts if oc < c and orr < r)
    ioo = sum(
        1
        for a in range(n)
        for b in range(n)
        if o_pts[a][0] < o_pts[b][0] and o_pts[a][1] < o_pts[b][1]
    )
    winds = _windings(G)
    consts = []
    for i in range(m):
        w = winds[i]
        tables[2 + i] = -8 * w[:n, :n]
        # Corner sum over the cells of ALL 2n markings, not only this
        # component's own; that is what makes the hat-level gradings of each
        # component symmetric about 0.
        corner = 0
        for r in range(n):
            for mc in (G.x_cols[r], G.o_cols[r]):
                corner += int(w[mc, r] + w[mc + 1, r] + w[mc, r + 1] + w[mc + 1, r + 1])
        consts.append(corner - 4 * (G.n_markings(i) - 1))
    return tables, ioo, tuple(consts)


def gradings(G: GridDiagram, state: Sequence[int]) -> MultiGrading:
    """Maslov and doubled Alexander gradings of one grid state.

    The state lists the row of its lattice point in each column.
    """
    n = G.n
    s = [int(r) for r in state]
    if sorted(s) != list(range(n)):
        raise NotPermutation("state is not a permutation")
    tables, ioo, consts = _grading_tables(G)
    ixx = sum(1 for a in range(n) for b in range(a + 1, n) if s[a] < s[b])
    maslov = ixx - sum(int(tables[0, c, s[c]]) for c in range(n)) - sum(
        int(tables[1, c, s[c]]) for c in range(n)
    ) + ioo + 1
    alex2 = []
    for i in range(G.num_components):
        a8 = sum(int(tables[2 + i, c, s[c]]) for c in range(n)) + consts[i]
        if a8 % 4:
            raise AssertionError("doubled Alexander grading is not an integer")
        alex2.append(a8 // 4)
    return MultiGrading(maslov, tuple(alex2))


def _all_gradings(G: GridDiagram) -> Tuple[np.ndarray, np.ndarray]:
    """(maslov, alex2) arrays over all n! states in lex order."""
    if G.n > _max_grid():
        raise GridTooLarge(f"grid size {G.n} exceeds the configured bound {_max_grid()}")
    tables, ioo, consts = _grading_tables(G)
    ixx, sums = _kernels.grid_state_sums(G.n, tables)
    maslov = ixx - sums[:, 0] - sums[:, 1] + ioo + 1
    a8 = sums[:, 2:] + np.asarray(consts, dtype=np.int64)
    if np.any(a8 % 4):
        raise AssertionError("doubled Alexander grading is not an integer")
    return maslov.astype(np.int64), (a8 // 4).astype(np.int64)


# ---------------------------------------------------------------------------
# Tilde homology


def _check_square_zero(nstates: int, src: np.ndarray, dst: np.ndarray) -> None:
    """Verify mod 2 that every two-step path count is even."""
    if not len(src):
        return
    order = np.argsort(src, kind="stable")
    s_sorted = src[order]
    d_sorted = dst[order]
    lo = np.searchsorted(s_sorted, dst, "left")
    hi = np.searchsorted(s_sorted, dst, "right")
    reps = hi - lo
    total = int(reps.sum())
    if total == 0:
        return
    xs = np.repeat(src, reps)
    offsets = np.arange(total) - np.repeat(np.cumsum(reps) - reps, reps)
    zs = d_sorted[np.repeat(lo, reps) + offsets]
    pair_keys = xs * np.int64(nstates) + zs
    _, path_counts = np.unique(pair_keys, return_counts=True)
    if np.any(path_counts % 2):
        raise DifferentialNotSquareZero("some pair of states is joined by an odd number of two-step paths")


def tilde_homology(G: GridDiagram) -> Dict[MultiGrading, int]:
    """Homology of the fully blocked grid complex over F2, by grading.

    The differential counts rectangles empty of X markings, O markings, and
    state points.  Every counted rectangle drops Maslov by exactly 1 and
    preserves all Alexander gradings, so the complex splits into finite
    blocks whose ranks are computed independently by sparse elimination.
    """
    maslov, alex2 = _all_gradings(G)
    nstates = len(maslov)
    src, dst = _kernels.grid_diff_pairs(G.n, list(G.x_cols), list(G.o_cols))

    if len(src):
        assert np.all(maslov[src] - maslov[dst] == 1), "rectangle does not drop Maslov by 1"
        assert np.array_equal(alex2[src], alex2[dst]), "rectangle changes an Alexander grading"
    _check_square_zero(nstates, src, dst)

    keys = np.column_stack([maslov, alex2])
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    counts = np.bincount(inv, minlength=len(uniq))
    starts = np.zeros(len(uniq) + 1, dtype=np.int64)
    starts[1:] = np.cumsum(counts)
    order = np.argsort(inv, kind="stable")
    loc = np.empty(nstates, dtype=np.int64)
    loc[order] = np.arange(nstates) - starts[inv[order]]
    block_of = {tuple(int(x) for x in k): b for b, k in enumerate(uniq)}

    ranks: Dict[int, int] = {}
    if len(src):
        bsrc = inv[src]
        arrow_order = np.argsort(bsrc, kind="stable")
        bsorted = bsrc[arrow_order]
        cut = np.flatnonzero(np.diff(bsorted)) + 1
        for grp in np.split(arrow_order, cut):
            b = int(bsrc[grp[0]])
            tgt = int(inv[dst[grp[0]]])
            assert np.all(inv[dst[grp]] == tgt)
            ranks[b] = _kernels.f2_sparse_rank(
                int(counts[tgt]), int(counts[b]), loc[dst[grp]], loc[src[grp]]
            )

    result: Dict[MultiGrading, int] = {}
    for b, key in enumerate(uniq):
        key = tuple(int(x) for x in key)
        up = block_of.get((key[0] + 1,) + key[1:])
        dim = int(counts[b]) - ranks.get(b, 0) - (ranks.get(up, 0) if up is not None else 0)
        if dim:
            result[MultiGrading(key[0], key[1:])] = dim
    return result


# ---------------------------------------------------------------------------
# Hat extraction and Euler characteristics


def hat_extract(tilde: Dict[MultiGrading, int], G: GridDiagram) -> Dict[MultiGrading, int]:
    """Divide the stabilization factors out of tilde dimensions.

    Solves PoincarePoly(tilde) = PoincarePoly(hat) * prod_i (1 + u_i)^(n_i - 1)
    where u_i shifts (maslov, alex2_i) by (-1, -2); the quotient must be
    exact and nonnegative.
    """
    cur: Dict[Tuple[int, Tuple[int, ...]], int] = {
        (mg.maslov, mg.alex2): d for mg, d in tilde.items() if d
    }
    for comp in range(G.num_components):
        for _ in range(G.n_markings(comp) - 1):
            cur = _deconvolve_once(cur, comp)
    return {MultiGrading(m, a): d for (m, a), d in sorted(cur.items())}


def _deconvolve_once(
    poincare: Dict[Tuple[int, Tuple[int, ...]], int], comp: int
) -> Dict[Tuple[int, Tuple[int, ...]], int]:
    rem = dict(poincare)
    quo: Dict[Tuple[int, Tuple[int, ...]], int] = {}
    while rem:
        g = max(rem, key=lambda k: k[0])
        v = rem.pop(g)
        if v == 0:
            continue
        if v < 0:
            raise DeconvolutionFailed(f"negative multiplicity at grading {g}")
        quo[g] = v
        m, a = g
        aa = list(a)
        aa[comp] -= 2
        down = (m - 1, tuple(aa))
        nv = rem.get(down, 0) - v
        if nv:
            rem[down] = nv
        else:
            rem.pop(down, None)
    return quo


def euler_char(G: GridDiagram) -> LaurentPoly:
    """Hat-level Euler characteristic in doubled Alexander exponents.

    Sums (-1)^maslov over all states (no homology needed), then divides out
    the stabilization factor (1 - T_i^-1)^(n_i - 1) per component, written
    here with doubled exponents.  For a knot this is the Alexander
    polynomial with doubled exponents; for an n-component link it carries
    the extra factor prod_i (T_i^(1/2) - T_i^(-1/2)).
    """
    m = G.num_components
    if m > 2:
        raise ValueError("Euler characteristics implemented for at most 2 components")
    maslov, alex2 = _all_gradings(G)
    signs = np.where(maslov % 2 == 0, 1, -1).astype(np.int64)
    uniq, inv = np.unique(alex2, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    acc = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(acc, inv, signs)
    coeffs = {
        tuple(int(e) for e in uniq[i]): int(acc[i]) for i in range(len(uniq)) if acc[i]
    }
    poly = LaurentPoly(m, coeffs)
    for i in range(m):
        v = [0] * m
        v[i] = -2
        for _ in range(G.n_markings(i) - 1):
            try:
                poly = poly.div_exact_one_minus_mono(tuple(v), 1)
            except NotDivisible:
                raise StabilizationDivisionFailed(
                    f"stabilization factor of component {i} does not divide the state sum"
                )
    return poly


def alexander_poly(G: GridDiagram) -> LaurentPoly:
    """Multivariable Alexander polynomial, canonical representative.

    Extracted from euler_char: for links the factor T_i^(1/2) - T_i^(-1/2)
    per component is divided off first; exponents are halved back from the
    doubled convention at the end.
    """
    chi = euler_char(G)
    m = chi.nvars
    if m > 1:
        for i in range(m):
            plus = tuple(1 if j == i else 0 for j in range(m))
            minus = tuple(-1 if j == i else 0 for j in range(m))
            divisor = LaurentPoly(m, {plus: 1, minus: -1})
            try:
                chi = chi.div_exact(divisor)
            except NotDivisible:
                raise StabilizationDivisionFailed(
                    f"chi is not divisible by T^(1/2) - T^(-1/2) in variable {i}"
                )
    rep, _ = chi.canonical()
    for i in range(m):
        rep = rep.halve_exponents(i)
    return rep.canonical()[0]


def top_slice(hat: Dict[MultiGrading, int], component: int) -> Tuple[int, int]:
    """Top doubled Alexander grading of one component and that slice's dim."""
    support = [(mg, d) for mg, d in hat.items() if d]
    if not support:
        raise ValueError("empty homology has no top slice")
    top = max(mg.alex2[component] for mg, _ in support)
    dim = sum(d for mg, d in support if mg.alex2[component] == top)
    return top, dim


# ---------------------------------------------------------------------------
# Grid construction


def grid_from_braid(spec: BraidSpec) -> GridDiagram:
    """Grid diagram of a braid closure, optionally with the axis circle.

    Strands run upward through one fresh row per letter; the under-strand
    jogs sideways into a fresh column while the over-strand's vertical
    segment crosses in front, reproducing the left-handed convention of
    linkdiag.closure.  Closure arcs nest around the right-hand side without
    meeting each other.  The axis, when present, is a rectangle whose right
    edge crosses in front of the k bottom closure arcs and whose top edge
    passes behind the k initial verticals, so all 2k axis crossings are
    negative and the axis links the closure by -k.
    """
    return _braid_grid(spec, meridian=False)


def meridian_union_grid(spec: BraidSpec) -> GridDiagram:
    """Grid of a braid closure together with a meridian of its first strand.

    The meridian is a small rectangle around the bottom corner of strand 0's
    closure arc: its right edge crosses in front of that arc once and its
    top edge passes behind the strand's initial vertical once, so it links
    the strand's component by -1, mirroring linkdiag.meridian_union.
    """
    if spec.axis:
        raise ValueError("meridian and axis together are not supported")
    return _braid_grid(spec, meridian=True)


def _braid_grid(spec: BraidSpec, meridian: bool) -> GridDiagram:
    k = spec.strands
    word = spec.word
    m = len(word)

    rows: List[Tuple] = [("B", p) for p in range(k)]
    rows += [("W", j) for j in range(m)]
    rows += [("T", p) for p in range(k - 1, -1, -1)]
    if spec.axis:
        rows = [("A", "bot")] + rows[:k] + [("A", "top")] + rows[k:]
    elif meridian:
        rows = [("M", "bot"), ("B", 0), ("M", "top")] + rows[1:]

    cols: List[Tuple] = [("S", p) for p in range(k)]

    horiz: List[Tuple[Tuple, Tuple, Tuple]] = []  # (row, O column, X column)
    vert: List[Tuple[Tuple, Tuple, Tuple]] = []  # (column, X row, O row)

    cur_col: List[Tuple] = [("S", p) for p in range(k)]
    xrow: List[Tuple] = [("B", p) for p in range(k)]
    strand: List[int] = list(range(k))  # starting position of each strand
    row_strand: Dict[Tuple, int] = {}

    for p in range(k):
        horiz.append((("B", p), ("F", p), ("S", p)))
        row_strand[("B", p)] = p

    for j, letter in enumerate(word):
        i = abs(letter) - 1
        h = ("W", j)
        if letter > 0:
            under, over = i, i + 1
            fresh = ("L", j)
            cols.insert(cols.index(cur_col[over]) + 1, fresh)
        else:
            under, over = i + 1, i
            fresh = ("L", j)
            cols.insert(cols.index(cur_col[over]), fresh)
        vert.append((cur_col[under], xrow[under], h))
        horiz.append((h, cur_col[under], fresh))
        row_strand[h] = strand[under]
        cur_col[under], xrow[under] = fresh, h
        cur_col[i], cur_col[i + 1] = cur_col[i + 1], cur_col[i]
        xrow[i], xrow[i + 1] = xrow[i + 1], xrow[i]
        strand[i], strand[i + 1] = strand[i + 1], strand[i]

    for p in range(k):
        vert.append((cur_col[p], xrow[p], ("T", p)))
        horiz.append((("T", p), cur_col[p], ("F", p)))
        vert.append((("F", p), ("T", p), ("B", p)))
        row_strand[("T", p)] = strand[p]

    if spec.axis:
        cols = [("A", "left")] + cols + [("A", "right")]
        horiz.append((("A", "top"), ("A", "left"), ("A", "right")))
        vert.append((("A", "right"), ("A", "top"), ("A", "bot")))
        horiz.append((("A", "bot"), ("A", "right"), ("A", "left")))
        vert.append((("A", "left"), ("A", "bot"), ("A", "top")))
    elif meridian:
        s0 = cols.index(("S", 0))
        cols[s0:s0 + 1] = [("M", "left"), ("S", 0), ("M", "right")]
        horiz.append((("M", "top"), ("M", "left"), ("M", "right")))
        vert.append((("M", "right"), ("M", "top"), ("M", "bot")))
        horiz.append((("M", "bot"), ("M", "right"), ("M", "left")))
        vert.append((("M", "left"), ("M", "bot"), ("M", "top")))
    cols += [("F", p) for p in range(k - 1, -1, -1)]

    n = len(rows)
    assert len(cols) == n
    row_idx = {t: i for i, t in enumerate(rows)}
    col_idx = {t: i for i, t in enumerate(cols)}

    x_cols = [-1] * n
    o_cols = [-1] * n
    for r, oc, xc in horiz:
        x_cols[row_idx[r]] = col_idx[xc]
        o_cols[row_idx[r]] = col_idx[oc]
    for c, xr, orr in vert:
        assert x_cols[row_idx[xr]] == col_idx[c]
        assert o_cols[row_idx[orr]] == col_idx[c]

    # Component labels: strand cycles of the braid permutation ordered by
    # their lowest starting position, axis last, matching linkdiag.closure.
    perm = list(range(k))
    for letter in word:
        i = abs(letter) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    comp_of_start = [-1] * k
    ncomp = 0
    for p0 in range(k):
        if comp_of_start[p0] >= 0:
            continue
        p = p0
        while comp_of_start[p] < 0:
            comp_of_start[p] = ncomp
            p = perm.index(p)
        ncomp += 1
    comp = [0] * n
    for t, s in row_strand.items():
        comp[row_idx[t]] = comp_of_start[s]
    if spec.axis:
        for t in (("A", "top"), ("A", "bot")):
            comp[row_idx[t]] = ncomp
    elif meridian:
        for t in (("M", "top"), ("M", "bot")):
            comp[row_idx[t]] = ncomp
    return GridDiagram(n, tuple(x_cols), tuple(o_cols), tuple(comp))


def stabilized(G: GridDiagram, row: int) -> GridDiagram:
    """One stabilization move: split row ``row``'s X corner into a kink.

    Inserts one fresh row and column next to the X marking, preserving the
    underlying oriented link while adding a marking pair to its component.
    """
    n = G.n
    co, cx = G.o_cols[row], G.x_cols[row]
    o_row = [0] * n
    for r, c in enumerate(G.o_cols):
        o_row[c] = r
    r2 = o_row[cx]

    new_col = cx if co < cx else cx + 1
    new_row = row + 1 if r2 > row else row

    def col_map(c: int) -> int:
        return c + (1 if c >= new_col else 0)

    def row_map(r: int) -> int:
        return r + (1 if r >= new_row else 0)

    x_cols = [-1] * (n + 1)
    o_cols = [-1] * (n + 1)
    comp = [-1] * (n + 1)
    for r in range(n):
        x_cols[row_map(r)] = col_map(G.x_cols[r])
        o_cols[row_map(r)] = col_map(G.o_cols[r])
        comp[row_map(r)] = G.comp_of_o[r]
    x_cols[row_map(row)] = new_col
    x_cols[new_row] = col_map(cx)
    o_cols[new_row] = new_col
    comp[new_row] = G.comp_of_o[row]
    return GridDiagram(n + 1, tuple(x_cols), tuple(o_cols), tuple(comp))
