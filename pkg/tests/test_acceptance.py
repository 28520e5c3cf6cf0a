"""Acceptance suite: one test per release criterion.

Under ``pytest -v`` each ``test_criterion_*`` line is the pass/fail verdict
for that criterion; on success each test also prints a one-line summary.
The fixture tables are restated literally here instead of being imported
from the library, so a regression cannot silently rewrite its own
expectations.
"""

from __future__ import annotations

import math
import random
import time

import pytest

from khdetect import _kernels
from khdetect.cli import corpus_load
from khdetect.detect import (
    AsymmetricDims,
    Case,
    Certificate,
    DimTooLarge,
    OddDim,
    TopBelowHalfL,
    batson_seed_check,
    classify,
    hfl_case,
    lemma_4deg,
    lemma_supp2,
    replay,
)
from khdetect.gridfloer import (
    _check_square_zero,
    alexander_poly,
    hat_extract,
    tilde_homology,
    top_slice,
)
from khdetect.khovanov import kh_ranks
from khdetect.laurent import (
    LaurentPoly,
    Unit,
    YSlices,
    supp4_criterion,
    torres_conditions,
)
from khdetect.linkdiag import BraidSpec, closure, meridian_union

P = LaurentPoly.parse

UNKNOT = {-1: 1, 1: 1}
TREFOIL_L = {1: 1, 3: 2, 4: 1, 5: 1, 6: 1}
TREFOIL_R = {-l: r for l, r in TREFOIL_L.items()}
U2_TABLE = {-2: 1, 0: 2, 2: 1}
TU_TABLE = {0: 1, 2: 3, 3: 1, 4: 3, 5: 2, 6: 1, 7: 1}
TU_MIRROR = {-l: r for l, r in TU_TABLE.items()}
L1_TABLE = {4: 1, 6: 3, 7: 1, 8: 3, 9: 2, 10: 1, 11: 1}
L2_TABLE = {2: 1, 4: 3, 5: 1, 6: 3, 7: 2, 8: 1, 9: 1}
L6A3_TABLE = {4: 1, 6: 2, 7: 1, 8: 2, 9: 2, 10: 2, 11: 1, 12: 1}
TREFOIL_DELTA = P("1 - x + x^2")


@pytest.fixture(scope="module")
def entries():
    return {e.name: e for e in corpus_load()}


@pytest.fixture(scope="module")
def l1_link():
    return closure(BraidSpec(2, (1, 1, 1), axis=True))


@pytest.fixture(scope="module")
def l2_link():
    trefoil = closure(BraidSpec(2, (1, 1, 1)))
    return meridian_union(trefoil, min(trefoil.edges()))


@pytest.fixture(scope="module")
def l1_cert(l1_link):
    return classify(l1_link)


@pytest.fixture(scope="module")
def l2_cert(l2_link):
    return classify(l2_link)


@pytest.fixture(scope="module")
def grids(entries):
    return {
        name: entry.grid_diagram()
        for name, entry in entries.items()
        if entry.grid is not None
    }


@pytest.fixture(scope="module")
def hats(grids):
    return {name: hat_extract(tilde_homology(G), G) for name, G in grids.items()}


@pytest.fixture(scope="module")
def deltas(grids):
    out = {}
    for name, G in grids.items():
        start = time.perf_counter()
        out[name] = (alexander_poly(G), time.perf_counter() - start)
    return out


def _step_map(cert):
    return {s.step: s for s in cert.steps}


def _unknot_slices(hat, comp):
    out = {}
    for mg, d in hat.items():
        a = mg.alex2[comp]
        out[a] = out.get(a, 0) + d
    return out


def test_criterion_1_khovanov_fixture_tables(l1_link, l2_link):
    fixtures = [
        ("two-component unlink", closure(BraidSpec(2, ())), U2_TABLE),
        ("split trefoil+unknot", closure(BraidSpec(3, (1, 1, 1))), TU_TABLE),
        ("split mirror trefoil+unknot", closure(BraidSpec(3, (-1, -1, -1))), TU_MIRROR),
        ("braid axis target", l1_link, L1_TABLE),
        ("trefoil meridian target", l2_link, L2_TABLE),
        ("L6a3", closure(BraidSpec(3, (1, 2), axis=True)), L6A3_TABLE),
    ]
    for name, link, table in fixtures:
        start = time.perf_counter()
        kh = kh_ranks(link)
        elapsed = time.perf_counter() - start
        assert kh.l_ranks() == table, name
        assert kh.total() == sum(table.values()), name
        assert elapsed < 1.0, f"{name} took {elapsed:.2f}s"
    for table in (L1_TABLE, L2_TABLE, L6A3_TABLE):
        assert sum(table.values()) == 12
    print("criterion 1: PASS - six fixture rank tables exact, each under 1s")


def test_criterion_2_structural_rank_laws(entries):
    two_component = 0
    doubling_checks = 0
    for name in sorted(entries):
        link = entries[name].link()
        unreduced = kh_ranks(link)
        if link.num_components() == 2:
            assert unreduced.total() % 4 == 0, name
            two_component += 1
        table = unreduced.as_dict()
        for bp in sorted(link.edges()) or [None]:
            reduced = kh_ranks(link, reduced=True, basepoint=bp).as_dict()
            doubled: dict = {}
            for (h, q), r in reduced.items():
                for s in (-1, 1):
                    doubled[h, q + s] = doubled.get((h, q + s), 0) + r
            assert doubled == table, (name, bp)
            doubling_checks += 1
    assert two_component == 7
    print(
        f"criterion 2: PASS - mod-4 totals on {two_component} two-component "
        f"links, reduced doubling at {doubling_checks} basepoints"
    )


def test_criterion_3_batson_seed_inequality(l1_link, l2_link):
    l1 = kh_ranks(l1_link).l_ranks()
    l2 = kh_ranks(l2_link).l_ranks()
    assert batson_seed_check(l1, TREFOIL_L, UNKNOT, 2)
    assert batson_seed_check(l2, TREFOIL_L, UNKNOT, 1)
    for lk in (2, -2):
        assert not batson_seed_check(l1, TREFOIL_R, UNKNOT, lk)
    for lk in (1, -1):
        assert not batson_seed_check(l2, TREFOIL_R, UNKNOT, lk)
    print(
        "criterion 3: PASS - inequality holds for both targets with the left "
        "trefoil, fails with the right trefoil under either linking sign"
    )


def test_criterion_4_alexander_and_torres(grids, deltas):
    for name in sorted(grids):
        assert grids[name].n <= 9, name
        delta, elapsed = deltas[name]
        assert elapsed < 60.0, f"{name} took {elapsed:.1f}s"
        assert delta.doteq(delta.invert_vars()) is not None, name
    d2, _ = deltas["trefoil-meridian"]
    assert d2.substitute_one(1).doteq(TREFOIL_DELTA) is not None
    report = torres_conditions(d2, TREFOIL_DELTA, 1)
    assert report.ok_x and report.ok_y
    d1, _ = deltas["L7n1"]
    assert d1.substitute_one(1).doteq(P("1 + x^3")) is not None
    report = torres_conditions(d1, TREFOIL_DELTA, 2)
    assert report.ok_x and report.ok_y
    print(
        f"criterion 4: PASS - {len(grids)} grid polynomials symmetric and "
        "inside budget, Torres conditions hold on both targets"
    )


def test_criterion_5_grid_homology(grids, hats):
    for name in sorted(grids):
        G = grids[name]
        src, dst = _kernels.grid_diff_pairs(G.n, list(G.x_cols), list(G.o_cols))
        _check_square_zero(math.factorial(G.n), src, dst)
    for name in ("U", "trefoil", "hopf", "L7n1", "trefoil-meridian", "L6a3"):
        assert sum(hats[name].values()) > 0, name
    for name, hat in hats.items():
        collapsed: dict = {}
        for mg, d in hat.items():
            collapsed[mg.alex2] = collapsed.get(mg.alex2, 0) + d
        for a, d in collapsed.items():
            mirror = tuple(-x for x in a)
            assert collapsed.get(mirror, 0) == d, (name, a)
        if name == "trefoil":
            assert collapsed == {(2,): 1, (0,): 1, (-2,): 1}
    print(
        f"criterion 5: PASS - square-zero differentials on {len(grids)} grids, "
        "hat extraction exact with symmetric Alexander support"
    )


def test_criterion_6_hfl_slice_instances(hats, l1_cert, l2_cert):
    assert top_slice(hats["L7n1"], 1) == (2, 2)
    assert top_slice(hats["trefoil-meridian"], 1) == (1, 6)
    s1 = _step_map(l1_cert)
    assert s1["hfl-slices"].verdict == (
        "unknot component 1 slice dims "
        "{-2: 2 (Q-certified), 0: 6 (F2-only), 2: 2 (Q-certified)}"
    )
    assert (
        s1["q-rank-sandwich"].verdict
        == "chi-norm 8 below F2 dim 10: gap flagged, F2 bounds only"
    )
    s2 = _step_map(l2_cert)
    assert s2["hfl-slices"].verdict == (
        "unknot component 1 slice dims {-1: 6 (Q-certified), 1: 6 (Q-certified)}"
    )
    assert (
        s2["q-rank-sandwich"].verdict
        == "chi-norm 12 equals F2 dim 12: rank over Q certified as 12"
    )
    print(
        "criterion 6: PASS - top slices (2,2) and (1,6); sandwich certifies 12 "
        "for the meridian target and flags the 8<10 gap for the braid target"
    )


def test_criterion_7_detection_and_replay(l1_link, l2_link, l1_cert, l2_cert):
    assert l1_cert.final == "MatchesL1"
    assert l2_cert.final == "MatchesL2"
    ruled_sig = classify(closure(BraidSpec(3, (1, 2), axis=True)))
    assert ruled_sig.final == "RuledOut"
    assert "match neither target" in ruled_sig.reason
    ruled_rank = classify(closure(BraidSpec(2, (1,), axis=True)))
    assert ruled_rank.final == "RuledOut"
    assert ruled_rank.reason == "total rank 8 != 12"
    assert replay(l1_cert, l1_link)
    assert replay(l2_cert, l2_link)
    for cert in (l1_cert, l2_cert, ruled_sig, ruled_rank):
        assert Certificate.from_json(cert.to_json()) == cert
    print(
        "criterion 7: PASS - both targets matched, L6a3 and L4a1 ruled out, "
        "certificates replay and round-trip losslessly"
    )


def test_criterion_8_case_analysis_and_lemmas(hats, deltas):
    d2, _ = deltas["trefoil-meridian"]
    rep2 = lemma_supp2(d2, 1)
    assert rep2.hypothesis_holds and rep2.forces_lk_one and not rep2.contradiction
    d1, _ = deltas["L7n1"]
    assert not lemma_supp2(d1, 2).hypothesis_holds

    four_col = YSlices(
        lk=1,
        slices={-1: P("x^2", 1), 0: P("1", 1), 1: P("-1", 1), 2: P("-x^2", 1)},
        unit=Unit(1, (0, 0)),
    )
    rep4 = supp4_criterion(four_col)
    assert rep4.hypothesis_holds and rep4.k == 1
    assert rep4.forces_lk_one and rep4.forces_unknot and not rep4.contradiction
    assert not lemma_4deg(d1, 2).hypothesis_holds
    wide = YSlices(
        lk=1,
        slices={0: P("1 - x + x^2", 1), 1: P("-1 + x - x^2", 1)},
        unit=Unit(1, (0, 0)),
    )
    assert not supp4_criterion(wide).hypothesis_holds

    assert hfl_case(_unknot_slices(hats["L7n1"], 1), 2) is Case.BRAID
    assert hfl_case(_unknot_slices(hats["trefoil-meridian"], 1), 1) is Case.MERIDIAN

    rng = random.Random(8151)
    cases = 0
    for _ in range(220):
        lk = rng.randint(1, 4)
        top = lk + rng.randint(0, 3)
        d = rng.choice((2, 4, 6))
        dims = {top: d, -top: d}
        budget = 12 - 2 * d
        for a in range(1, top):
            if budget >= 4 and rng.random() < 0.5:
                pair = 2 * rng.randint(1, budget // 4)
                dims[a] = dims[-a] = pair
                budget -= 2 * pair
        if budget >= 2 and rng.random() < 0.7:
            dims[0] = 2 * rng.randint(1, budget // 2)
        if d == 2:
            expected = Case.BRAID
        elif d == 4:
            expected = Case.PARITY_CONTRADICTION if top == lk else Case.FOUR_DEGREES
        else:
            expected = Case.MERIDIAN
        assert hfl_case(dims, lk) is expected
        cases += 1

        odd = dict(dims)
        odd[rng.choice(sorted(odd))] += 1
        with pytest.raises(OddDim):
            hfl_case(odd, lk)
        cases += 1

        lopsided = dict(dims)
        lopsided[rng.choice([a for a in lopsided if a > 0])] += 2
        with pytest.raises(AsymmetricDims):
            hfl_case(lopsided, lk)
        cases += 1

        oversize = {a: 4 * v for a, v in dims.items()}
        with pytest.raises(DimTooLarge):
            hfl_case(oversize, lk)
        cases += 1

        with pytest.raises(TopBelowHalfL):
            hfl_case(dims, top + 1 + rng.randint(0, 2))
        cases += 1

        with pytest.raises(ValueError, match="positive linking number"):
            hfl_case(dims, -rng.randint(0, 3))
        cases += 1
    with pytest.raises(TopBelowHalfL):
        hfl_case({}, 1)
    assert cases >= 1000
    print(
        f"criterion 8: PASS - lemma fixtures split as expected and "
        f"{cases} randomized case-analysis checks raise the named errors"
    )
