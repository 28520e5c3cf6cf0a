"""Integer Laurent polynomials in one or two variables.

Polynomials are stored as a dict mapping exponent tuples to nonzero integer
coefficients.  Variable 0 prints as ``x`` and variable 1 as ``y``.  Alexander
polynomials of links are only defined up to a unit ``+-x^a*y^b``, so equality
tests between invariants go through :meth:`LaurentPoly.doteq`, which compares
canonical representatives and returns the witnessing unit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

__all__ = [
    "LaurentPoly",
    "Unit",
    "YSlices",
    "NotDivisible",
    "TorresViolated",
    "NormalizationImpossible",
    "y_slices",
    "torres_conditions",
    "supp2_criterion",
    "supp4_criterion",
    "expected_delta_x1",
    "Supp2Report",
    "Supp4Report",
    "TorresReport",
]

Exp = Tuple[int, ...]


class NotDivisible(ArithmeticError):
    """Exact Laurent division failed (nonzero remainder)."""


class TorresViolated(ValueError):
    """A multivariable Alexander polynomial fails the Torres specialization."""


class NormalizationImpossible(ValueError):
    """No unit brings (1-y)*Delta into the normalized slice form."""


@dataclass(frozen=True)
class Unit:
    """A monomial unit ``sign * x^shift[0] * y^shift[1] * ...``."""

    sign: int
    shift: Exp

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("unit sign must be +1 or -1")


class LaurentPoly:
    """Immutable integer Laurent polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "coeffs")

    def __init__(self, nvars: int, coeffs: Optional[Dict[Exp, int]] = None):
        if nvars not in (1, 2):
            raise ValueError("only 1 or 2 variables are supported")
        object.__setattr__(self, "nvars", nvars)
        clean: Dict[Exp, int] = {}
        for exps, c in (coeffs or {}).items():
            if len(exps) != nvars:
                raise ValueError("exponent tuple arity mismatch")
            if c:
                clean[tuple(int(e) for e in exps)] = int(c)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("LaurentPoly is immutable")

    # ---------------------------------------------------------------- basics

    @staticmethod
    def zero(nvars: int = 1) -> "LaurentPoly":
        return LaurentPoly(nvars, {})

    @staticmethod
    def one(nvars: int = 1) -> "LaurentPoly":
        return LaurentPoly(nvars, {(0,) * nvars: 1})

    @staticmethod
    def monomial(coeff: int, exps: Iterable[int]) -> "LaurentPoly":
        exps = tuple(exps)
        return LaurentPoly(len(exps), {exps: coeff})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.nvars == other.nvars
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.coeffs.items())))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._samevars(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.nvars, out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.nvars, {e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._samevars(other)
        out: Dict[Exp, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(self.nvars, out)

    def scale(self, k: int) -> "LaurentPoly":
        return LaurentPoly(self.nvars, {e: k * c for e, c in self.coeffs.items()})

    def shift(self, exps: Iterable[int]) -> "LaurentPoly":
        """Multiply by the monomial with the given exponent vector."""
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError("shift arity mismatch")
        return LaurentPoly(
            self.nvars,
            {tuple(a + b for a, b in zip(e, exps)): c for e, c in self.coeffs.items()},
        )

    def _samevars(self, other: "LaurentPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    # ------------------------------------------------------------- structure

    def support(self) -> Tuple[Exp, ...]:
        return tuple(sorted(self.coeffs))

    def norm(self) -> int:
        """Sum of absolute values of the coefficients."""
        return sum(abs(c) for c in self.coeffs.values())

    def exp_range(self, var: int) -> Tuple[int, int]:
        """(min, max) exponent of ``var`` over the support; (0, 0) if zero."""
        if not self.coeffs:
            return (0, 0)
        vals = [e[var] for e in self.coeffs]
        return (min(vals), max(vals))

    def coeff_of(self, var: int, k: int) -> "LaurentPoly":
        """The coefficient of ``var^k`` as a polynomial in the other variables."""
        if self.nvars == 1:
            c = sum(c for e, c in self.coeffs.items() if e[var] == k)
            return LaurentPoly(1, {(0,): c})
        keep = 1 - var
        out: Dict[Exp, int] = {}
        for e, c in self.coeffs.items():
            if e[var] == k:
                out[(e[keep],)] = out.get((e[keep],), 0) + c
        return LaurentPoly(1, out)

    def substitute_one(self, var: int) -> "LaurentPoly":
        """Set the chosen variable to 1 (arity drops by one for 2-variable input)."""
        if self.nvars == 1:
            total = sum(self.coeffs.values())
            return LaurentPoly(1, {(0,): total})
        keep = 1 - var
        out: Dict[Exp, int] = {}
        for e, c in self.coeffs.items():
            key = (e[keep],)
            out[key] = out.get(key, 0) + c
        return LaurentPoly(1, out)

    def invert_vars(self) -> "LaurentPoly":
        """Substitute every variable by its inverse."""
        return LaurentPoly(
            self.nvars, {tuple(-x for x in e): c for e, c in self.coeffs.items()}
        )

    def stretch(self, var: int, k: int) -> "LaurentPoly":
        """Replace ``var`` by ``var^k`` (used for doubled-exponent bookkeeping)."""
        out = {}
        for e, c in self.coeffs.items():
            ee = list(e)
            ee[var] *= k
            out[tuple(ee)] = c
        return LaurentPoly(self.nvars, out)

    def halve_exponents(self, var: int) -> "LaurentPoly":
        """Inverse of ``stretch(var, 2)``; all exponents of ``var`` must be even."""
        out = {}
        for e, c in self.coeffs.items():
            if e[var] % 2:
                raise ValueError("odd exponent, cannot halve")
            ee = list(e)
            ee[var] //= 2
            out[tuple(ee)] = c
        return LaurentPoly(self.nvars, out)

    # ------------------------------------------------------ units and doteq

    def canonical(self) -> Tuple["LaurentPoly", Unit]:
        """Canonical representative of the unit-equivalence class.

        Returns (rep, unit) with ``self == unit * rep``, where rep has minimum
        exponent 0 in every variable and positive coefficient on its
        lexicographically least exponent.
        """
        if not self.coeffs:
            return self, Unit(1, (0,) * self.nvars)
        mins = tuple(min(e[v] for e in self.coeffs) for v in range(self.nvars))
        shifted = self.shift(tuple(-m for m in mins))
        lead = min(shifted.coeffs)
        sign = 1 if shifted.coeffs[lead] > 0 else -1
        rep = shifted if sign == 1 else -shifted
        return rep, Unit(sign, mins)

    def doteq(self, other: "LaurentPoly") -> Optional[Unit]:
        """Equality up to a unit.

        Returns the unit u with ``self == u * other`` when the two polynomials
        agree up to sign and monomial shift, and None otherwise.
        """
        self._samevars(other)
        rep_s, unit_s = self.canonical()
        rep_o, unit_o = other.canonical()
        if rep_s != rep_o:
            return None
        return Unit(
            unit_s.sign * unit_o.sign,
            tuple(a - b for a, b in zip(unit_s.shift, unit_o.shift)),
        )

    def apply_unit(self, unit: Unit) -> "LaurentPoly":
        out = self.shift(unit.shift)
        return out if unit.sign == 1 else -out

    # -------------------------------------------------------- exact division

    def div_exact_one_minus_mono(self, exps: Iterable[int], sign: int = 1) -> "LaurentPoly":
        """Exact division by ``1 - sign * X^exps`` for a nonzero monomial X^exps.

        Works fiberwise along the lattice direction of the monomial; raises
        NotDivisible when a nonzero remainder would be left over.
        """
        v = tuple(exps)
        if len(v) != self.nvars or all(x == 0 for x in v):
            raise ValueError("divisor exponent vector must be nonzero")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.is_zero():
            return LaurentPoly.zero(self.nvars)
        p = next(i for i, x in enumerate(v) if x != 0)
        step = v[p]
        fibers: Dict[Tuple, Dict[int, int]] = {}
        for e, c in self.coeffs.items():
            # Two exponents lie in the same fiber when their difference is an
            # integer multiple of v.
            cls = tuple(e[i] * step - v[i] * e[p] for i in range(self.nvars))
            cls = cls + (e[p] % abs(step),)
            fibers.setdefault(cls, {})[e[p]] = c
        quotient: Dict[Exp, int] = {}
        for cls, line in fibers.items():
            ks = sorted(line, reverse=step < 0)
            lo, hi = ks[0], ks[-1]
            running = 0
            k = lo
            while True:
                running = line.get(k, 0) + sign * running
                if k == hi:
                    break
                if running:
                    e = self._fiber_exp(cls, k, v, p, step)
                    quotient[e] = running
                k += step
            if running != 0:
                raise NotDivisible("remainder after dividing by 1 - s*monomial")
        return LaurentPoly(self.nvars, quotient)

    def _fiber_exp(self, cls: Tuple, k: int, v: Exp, p: int, step: int) -> Exp:
        # Reconstruct the full exponent tuple from the fiber class and the
        # pivot coordinate value k: e[i] = (cls[i] + v[i]*k) / step.
        out = []
        for i in range(self.nvars):
            num = cls[i] + v[i] * k
            if num % step:
                raise AssertionError("fiber reconstruction broke")
            out.append(num // step)
        return tuple(out)

    def div_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact division by a 1 or 2 term divisor, via unit factoring."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        terms = sorted(other.coeffs.items())
        if len(terms) == 1:
            (e, c) = terms[0]
            if c not in (1, -1):
                raise NotDivisible("only unit monomial divisors are supported")
            return self.shift(tuple(-x for x in e)).scale(c)
        if len(terms) == 2:
            # c0*X^e0 + c1*X^e1 = c0*X^e0 * (1 - (-c1/c0) X^(e1-e0))
            (e0, c0), (e1, c1) = terms
            if abs(c0) != 1 or abs(c1) != 1:
                raise NotDivisible("binomial divisor must have unit coefficients")
            s = -c0 * c1
            rel = tuple(b - a for a, b in zip(e0, e1))
            q = self.div_exact_one_minus_mono(rel, s)
            return q.shift(tuple(-x for x in e0)).scale(c0)
        raise NotDivisible("divisor has more than two terms")

    # ------------------------------------------------------------ text forms

    _VARS = ("x", "y")

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            mono = []
            for v, k in enumerate(e):
                if k == 0:
                    continue
                name = self._VARS[v]
                mono.append(name if k == 1 else f"{name}^{k}")
            body = "*".join(mono)
            if not body:
                term = str(abs(c))
            elif abs(c) == 1:
                term = body
            else:
                term = f"{abs(c)}*{body}"
            parts.append(("- " if c < 0 else "+ ") + term)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"LaurentPoly({self.nvars}, {self})"

    _TERM_RE = re.compile(
        r"\s*(?P<sign>[+-])?\s*(?P<coef>\d+)?\s*"
        r"(?P<m1>\*?\s*(?P<v1>[a-zA-Z])(\^(?P<e1>-?\d+))?)?\s*"
        r"(?P<m2>\*?\s*(?P<v2>[a-zA-Z])(\^(?P<e2>-?\d+))?)?\s*"
    )

    @staticmethod
    def parse(text: str, nvars: Optional[int] = None) -> "LaurentPoly":
        """Parse forms like ``1 - x + x^2`` or ``x^2*y^-1 + 3``.

        The first variable letter seen maps to x, the second to y.  The
        optional ``nvars`` forces the arity (so ``1 + x`` can live in two
        variables when compared against 2-variable invariants).
        """
        text = text.strip()
        if not text:
            raise ValueError("empty polynomial text")
        if text == "0":
            return LaurentPoly.zero(nvars or 1)
        names: list[str] = []
        terms: list[tuple[int, Dict[str, int]]] = []
        pos = 0
        while pos < len(text):
            m = LaurentPoly._TERM_RE.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
            sign = -1 if m.group("sign") == "-" else 1
            coef = int(m.group("coef")) if m.group("coef") else 1
            exps: Dict[str, int] = {}
            for vi, ei in (("v1", "e1"), ("v2", "e2")):
                var = m.group(vi)
                if var:
                    k = int(m.group(ei)) if m.group(ei) else 1
                    exps[var] = exps.get(var, 0) + k
                    if var not in names:
                        names.append(var)
            if m.group("coef") is None and not exps:
                raise ValueError(f"empty term near {text[pos:]!r}")
            terms.append((sign * coef, exps))
            pos = m.end()
        if set(names) <= {"x", "y"} and names:
            # Fixed slots for the conventional names, so "y - x" parses the
            # same as "-x + y".
            order = {"x": 0, "y": 1}
            needed = 2 if "y" in names else 1
        else:
            order = {name: i for i, name in enumerate(names)}
            needed = max(1, len(names))
        if nvars is None:
            nvars = needed
        if needed > nvars:
            raise ValueError("more variables than requested arity")
        out: Dict[Exp, int] = {}
        for c, exps in terms:
            key = [0] * nvars
            for name, k in exps.items():
                key[order[name]] = k
            key = tuple(key)
            out[key] = out.get(key, 0) + c
        return LaurentPoly(nvars, out)


# ------------------------------------------------------------------ y slices


@dataclass
class YSlices:
    """Coefficients of powers of y in the normalized product (1-y)*Delta.

    ``slices[m]`` is the 1-variable x-polynomial in front of ``y^m`` after
    multiplying Delta by the unique unit that makes slice 0 evaluate to 1 and
    slice ``lk`` evaluate to -1 at x = 1 (all other slices evaluating to 0).
    """

    lk: int
    slices: Dict[int, LaurentPoly]
    unit: Unit

    def slice(self, m: int) -> LaurentPoly:
        return self.slices.get(m, LaurentPoly.zero(1))

    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(m for m, g in self.slices.items() if not g.is_zero()))


def _ladder(lk: int, nvars: int = 1) -> LaurentPoly:
    """1 + x + ... + x^(lk-1), the Torres specialization of an unknot axis."""
    if lk < 1:
        raise ValueError("linking number must be positive")
    return LaurentPoly(nvars, {(k,) + (0,) * (nvars - 1): 1 for k in range(lk)})


def y_slices(delta: LaurentPoly, lk: int) -> YSlices:
    """Decompose (1-y)*Delta into normalized y-degree slices.

    Preconditions: Delta is a 2-variable polynomial whose y = 1 specialization
    is doteq to 1 + x + ... + x^(lk-1) (raises TorresViolated otherwise); the
    normalizing unit must exist and be unique (NormalizationImpossible).
    """
    if delta.nvars != 2:
        raise ValueError("y_slices expects a 2-variable polynomial")
    if lk < 1:
        raise ValueError("linking number must be >= 1")
    if delta.substitute_one(0).doteq(_ladder(lk)) is None:
        raise TorresViolated(
            f"Delta(1, y) is not a unit times 1 + y + ... + y^{lk - 1}"
        )
    one_minus_y = LaurentPoly(2, {(0, 0): 1, (0, 1): -1})
    h = one_minus_y * delta
    # Find every unit +-y^a that normalizes the x = 1 profile to 1 - y^lk.
    profile = h.substitute_one(0)  # polynomial in y, written in variable slot x
    lo, hi = profile.exp_range(0)
    candidates = []
    target = {(0,): 1, (lk,): -1}
    for a in range(-hi - 1, -lo + 2):
        for sign in (1, -1):
            moved = profile.shift((a,)).scale(sign)
            if moved.coeffs == target:
                candidates.append(Unit(sign, (0, a)))
    if len(candidates) != 1:
        raise NormalizationImpossible(
            f"{len(candidates)} candidate units normalize the x = 1 profile"
        )
    unit = candidates[0]
    normalized = h.apply_unit(unit)
    ylo, yhi = normalized.exp_range(1)
    slices: Dict[int, LaurentPoly] = {}
    for m in range(ylo, yhi + 1):
        g = normalized.coeff_of(1, m)
        if not g.is_zero():
            slices[m] = g
    ys = YSlices(lk=lk, slices=slices, unit=unit)
    # Sanity: reconstruction and the defining evaluations.
    recon = LaurentPoly.zero(2)
    for m, g in slices.items():
        recon = recon + LaurentPoly(
            2, {(e[0], m): c for e, c in g.coeffs.items()}
        )
    if recon != normalized:
        raise AssertionError("slice reconstruction failed")
    for m, g in slices.items():
        val = sum(g.coeffs.values())
        want = 1 if m == 0 else (-1 if m == lk else 0)
        if val != want:
            raise NormalizationImpossible(
                f"slice {m} evaluates to {val} at x = 1, expected {want}"
            )
    return ys


# ------------------------------------------------------------------- reports


@dataclass
class TorresReport:
    ok_x: bool
    ok_y: bool
    unit_x: Optional[Unit]
    unit_y: Optional[Unit]

    @property
    def ok(self) -> bool:
        return self.ok_x and self.ok_y


def torres_conditions(
    delta: LaurentPoly, delta_knot: LaurentPoly, lk: int
) -> TorresReport:
    """Check both Torres specializations of a 2-component Delta.

    Setting y = 1 must give (1 + x + ... + x^(lk-1)) * Delta_knot(x) up to a
    unit, and setting x = 1 must give 1 + y + ... + y^(lk-1) up to a unit.
    """
    if delta.nvars != 2 or delta_knot.nvars != 1:
        raise ValueError("expected a 2-variable Delta and a 1-variable knot Delta")
    want_x = _ladder(lk) * delta_knot
    unit_x = delta.substitute_one(1).doteq(want_x)
    unit_y = delta.substitute_one(0).doteq(_ladder(lk))
    return TorresReport(unit_x is not None, unit_y is not None, unit_x, unit_y)


@dataclass
class Supp2Report:
    """Outcome of the two-column support criterion.

    If every slice other than 0 and lk vanishes, the linking number is forced
    to be 1; ``contradiction`` is set when the input claims lk > 1 anyway.
    """

    hypothesis_holds: bool
    forces_lk_one: bool
    contradiction: bool


def supp2_criterion(ys: YSlices) -> Supp2Report:
    supp = set(ys.support())
    if not supp <= {0, ys.lk}:
        return Supp2Report(False, False, False)
    # The slices of (1-y)*Delta sum to zero, so only two of them means
    # slice lk = -slice 0.  Then Delta = g0 * (1 + y + ... + y^(lk-1)), whose
    # y = 1 value lk*g0 has content lk, while the Torres target is a product
    # of content-1 polynomials.  That forces lk = 1.
    g0, gl = ys.slice(0), ys.slice(ys.lk)
    if gl != -g0:
        raise AssertionError("two-column slices must be opposite")
    return Supp2Report(True, True, ys.lk != 1)


@dataclass
class Supp4Report:
    """Outcome of the four-column support criterion.

    hypothesis_holds requires a positive k with support inside
    {-k, 0, lk, lk+k} and extreme slices of norm 2 after multiplying by
    (1 - x).  When it holds, the conclusion forces lk = 1 with an unknotted
    complementary component; ``contradiction`` flags inputs claiming lk > 1.
    """

    hypothesis_holds: bool
    k: Optional[int]
    forces_lk_one: bool
    forces_unknot: bool
    contradiction: bool


def supp4_criterion(ys: YSlices) -> Supp4Report:
    supp = set(ys.support())
    inner = {m for m in supp if 0 < m < ys.lk}
    if inner:
        return Supp4Report(False, None, False, False, False)
    neg = {m for m in supp if m < 0}
    high = {m for m in supp if m > ys.lk}
    if len(neg) > 1 or len(high) > 1:
        return Supp4Report(False, None, False, False, False)
    k: Optional[int] = None
    if neg:
        k = -next(iter(neg))
    if high:
        k2 = next(iter(high)) - ys.lk
        if k is not None and k != k2:
            return Supp4Report(False, None, False, False, False)
        k = k2
    if k is None:
        k = 1  # degenerate case: support already inside {0, lk}
    one_minus_x = LaurentPoly(1, {(0,): 1, (1,): -1})
    norm0 = (one_minus_x * ys.slice(0)).norm()
    norml = (one_minus_x * ys.slice(ys.lk)).norm()
    hyp = norm0 == 2 and norml == 2
    if not hyp:
        return Supp4Report(False, k, False, False, False)
    # Norm 2 after multiplying by (1 - x) pins both extreme slices to single
    # signed monomials, matching their forced x = 1 values.
    g0, _ = ys.slice(0).canonical()
    gl, _ = ys.slice(ys.lk).canonical()
    if g0 != LaurentPoly.one(1) or gl != LaurentPoly.one(1):
        raise AssertionError("norm-2 slices should be monomials")
    return Supp4Report(True, k, True, True, ys.lk != 1)


_TREFOIL_DELTA = {(0,): 1, (1,): -1, (2,): 1}


def expected_delta_x1(component: str, lk: int) -> LaurentPoly:
    """Reference Delta(x, 1) profiles for an unknot or trefoil component.

    ``component`` is "unknot" or "trefoil".  For an unknot the profile is the
    bare ladder 1 + ... + x^(lk-1).  For a trefoil with lk = 1 it is the
    trefoil polynomial itself; for lk >= 2 the ladder times 1 - x + x^2,
    expanded, telescopes to 1 + x^2 + ... + x^(lk-1) + x^(lk+1).
    """
    if lk < 1:
        raise ValueError("linking number must be positive")
    if component == "unknot":
        return _ladder(lk)
    if component != "trefoil":
        raise ValueError("component must be 'unknot' or 'trefoil'")
    if lk == 1:
        return LaurentPoly(1, dict(_TREFOIL_DELTA))
    out = {(0,): 1, (lk + 1,): 1}
    for k in range(2, lk):
        out[(k,)] = 1
    return LaurentPoly(1, out)
