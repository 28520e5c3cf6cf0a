from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from khdetect.detect import (
    AsymmetricDims,
    Case,
    Certificate,
    DimTooLarge,
    NotTwoComponents,
    OddDim,
    REFERENCE_L_TABLES,
    TopBelowHalfL,
    UnknownTarget,
    batson_seed_check,
    classify,
    component_kind,
    hfl_case,
    lemma_4deg,
    lemma_supp2,
    negate_grading,
    rank_constraints,
    replay,
    signature_match,
    tensor_l_ranks,
)
from khdetect.khovanov import kh_ranks
from khdetect.laurent import LaurentPoly
from khdetect.linkdiag import BraidSpec, closure, meridian_union, mirror

UNKNOT = {-1: 1, 1: 1}
TREFOIL_L = {1: 1, 3: 2, 4: 1, 5: 1, 6: 1}
TREFOIL_R = {-1: 1, -3: 2, -4: 1, -5: 1, -6: 1}

L1_TABLE = REFERENCE_L_TABLES["L1"]
L2_TABLE = REFERENCE_L_TABLES["L2"]

DELTA_L1 = LaurentPoly(2, {(0, 0): 1, (3, 1): 1})
DELTA_L2 = LaurentPoly(2, {(0, 0): 1, (1, 0): -1, (2, 0): 1})


@pytest.fixture(scope="module")
def l1_link():
    return closure(BraidSpec(2, (1, 1, 1), axis=True))


@pytest.fixture(scope="module")
def l2_link():
    tref = closure(BraidSpec(2, (1, 1, 1)))
    edge = min(e for x in tref.crossings for e in x.edges)
    return meridian_union(tref, edge)


@pytest.fixture(scope="module")
def l1_cert(l1_link):
    return classify(l1_link)


@pytest.fixture(scope="module")
def l2_cert(l2_link):
    return classify(l2_link)


# ------------------------------------------------------ batson-seed


def test_batson_seed_l1_holds_with_equality():
    assert batson_seed_check(L1_TABLE, TREFOIL_L, UNKNOT, 2)
    shifted = {l + 4: r for l, r in tensor_l_ranks(TREFOIL_L, UNKNOT).items()}
    assert shifted == L1_TABLE


def test_batson_seed_l2_holds():
    assert batson_seed_check(L2_TABLE, TREFOIL_L, UNKNOT, 1)


def test_batson_seed_right_trefoil_fails():
    assert not batson_seed_check(L2_TABLE, TREFOIL_R, UNKNOT, 1)
    assert not batson_seed_check(L1_TABLE, TREFOIL_R, UNKNOT, 2)
    # robust against either sign convention for the quoted linking number
    assert not batson_seed_check(L2_TABLE, TREFOIL_R, UNKNOT, -1)
    assert not batson_seed_check(L1_TABLE, TREFOIL_R, UNKNOT, -2)


def test_tensor_is_tu_table():
    assert tensor_l_ranks(TREFOIL_L, UNKNOT) == REFERENCE_L_TABLES["TU"]


@settings(max_examples=150)
@given(
    st.dictionaries(st.integers(-6, 6), st.integers(1, 4), max_size=5),
    st.dictionaries(st.integers(-6, 6), st.integers(1, 4), max_size=5),
    st.dictionaries(st.integers(-6, 6), st.integers(1, 4), max_size=5),
    st.integers(-3, 3),
)
def test_batson_seed_tensor_symmetry(L, a, b, lk):
    assert batson_seed_check(L, a, b, lk) == batson_seed_check(L, b, a, lk)


# ------------------------------------------------------ rank laws


def test_rank_constraints_tables():
    rc = rank_constraints(REFERENCE_L_TABLES["U2"])
    assert (rc.total, rc.mult4) == (4, True)
    rc = rank_constraints(L1_TABLE)
    assert (rc.total, rc.mult4) == (12, True)
    rc = rank_constraints({0: 4, 1: 3, 2: 3})
    assert rc.total == 10 and not rc.mult4


# ------------------------------------------------------ signature matching


def test_signature_exact_on_computed_l1(l1_link):
    table = kh_ranks(l1_link).l_ranks()
    m = signature_match(table, "L1")
    assert m.exact and not m.as_mirror


def test_signature_l6a3_vs_l1_fails_both_ways():
    m = signature_match(REFERENCE_L_TABLES["L6a3"], "L1")
    assert not m.exact and not m.as_mirror


def test_signature_mirror_of_tu():
    right_tu = negate_grading(REFERENCE_L_TABLES["TU"])
    m = signature_match(right_tu, "TU")
    assert m.as_mirror and not m.exact


def test_signature_unknown_target():
    with pytest.raises(UnknownTarget):
        signature_match(L1_TABLE, "L5")


def test_signature_negation_invariant():
    for target, ref in REFERENCE_L_TABLES.items():
        assert signature_match(ref, target).exact
        assert signature_match(negate_grading(ref), target).as_mirror


@settings(max_examples=100)
@given(st.dictionaries(st.integers(-12, 12), st.integers(1, 3), max_size=8))
def test_signature_negation_agrees_on_random_tables(table):
    for target in REFERENCE_L_TABLES:
        exact = signature_match(table, target).exact
        assert exact == signature_match(negate_grading(table), target).as_mirror


# ------------------------------------------------------ component tables


def test_component_kind_tables():
    assert component_kind({0: 1}) == "unknot"
    assert component_kind({2: 1, 4: 1, 5: 1}) == "trefoil-left"
    assert component_kind({-2: 1, -4: 1, -5: 1}) == "trefoil-right"
    assert component_kind({-2: 1, 0: 1, 2: 1}) == "other"
    assert component_kind({0: 1, 3: 1, 4: 1}) == "other"


# ------------------------------------------------------ hfl_case


def test_hfl_case_braid():
    assert hfl_case({-2: 2, 0: 6, 2: 2}, 2) is Case.BRAID


def test_hfl_case_meridian():
    assert hfl_case({-1: 6, 1: 6}, 1) is Case.MERIDIAN


def test_hfl_case_parity_contradiction():
    assert hfl_case({-2: 4, 0: 2, 2: 4}, 2) is Case.PARITY_CONTRADICTION


def test_hfl_case_four_degrees():
    assert hfl_case({-3: 4, -1: 2, 1: 2, 3: 4}, 1) is Case.FOUR_DEGREES


def test_hfl_case_ignores_zero_slices():
    assert hfl_case({-2: 2, 0: 6, 2: 2, 4: 0, -4: 0}, 2) is Case.BRAID


def test_hfl_case_named_errors():
    with pytest.raises(OddDim):
        hfl_case({-1: 3, 1: 3}, 1)
    with pytest.raises(AsymmetricDims):
        hfl_case({-1: 2, 1: 4}, 1)
    with pytest.raises(DimTooLarge):
        hfl_case({-1: 8, 1: 8}, 1)
    with pytest.raises(TopBelowHalfL):
        hfl_case({-1: 2, 1: 2}, 3)
    with pytest.raises(TopBelowHalfL):
        hfl_case({}, 1)
    with pytest.raises(ValueError):
        hfl_case({-1: 2, 1: 2}, 0)


@settings(max_examples=200)
@given(
    st.lists(st.tuples(st.integers(1, 5), st.integers(1, 3)), min_size=1, max_size=3),
    st.integers(1, 5),
)
def test_hfl_case_total_and_classification_consistent(pairs, l):
    dims = {}
    for a, half in pairs:
        dims[a] = dims.get(a, 0) + 2 * half
        dims[-a] = dims.get(-a, 0) + 2 * half
    dims = {a: min(d, 6) for a, d in dims.items()}
    total = sum(dims.values())
    top = max(dims)
    if total > 12:
        with pytest.raises(DimTooLarge):
            hfl_case(dims, l)
    elif top < l:
        with pytest.raises(TopBelowHalfL):
            hfl_case(dims, l)
    else:
        case = hfl_case(dims, l)
        d = dims[top]
        if d == 2:
            assert case is Case.BRAID
        elif d == 4:
            assert case is (Case.PARITY_CONTRADICTION if top == l else Case.FOUR_DEGREES)
        else:
            assert case is Case.MERIDIAN


# ------------------------------------------------------ lemma wrappers


def test_lemma_supp2_on_meridian_delta():
    rep = lemma_supp2(DELTA_L2, 1)
    assert rep.hypothesis_holds and rep.forces_lk_one


def test_lemma_supp2_fails_on_braid_axis_delta():
    assert not lemma_supp2(DELTA_L1, 2).hypothesis_holds


def test_lemma_4deg_rejects_corpus_deltas():
    assert not lemma_4deg(DELTA_L1, 2).hypothesis_holds
    assert not lemma_4deg(DELTA_L2, 1).hypothesis_holds


# ------------------------------------------------------ classify pipeline

EXPECTED_STEPS = [
    "kh-ranks",
    "rank-constraints",
    "signature-L1",
    "signature-L2",
    "component-0",
    "component-1",
    "linking-number",
    "batson-seed",
    "hfl-slices",
    "q-rank-sandwich",
    "alexander-torres",
    "hfl-case",
]


def step_map(cert):
    return {s.step: s.verdict for s in cert.steps}


def test_classify_l1(l1_cert):
    assert l1_cert.final == "MatchesL1" and l1_cert.reason == ""
    assert [s.step for s in l1_cert.steps] == EXPECTED_STEPS
    v = step_map(l1_cert)
    assert v["rank-constraints"] == "total 12, multiple of four: True"
    assert v["linking-number"] == "lk = -2"
    assert "0: 6 (F2-only)" in v["hfl-slices"]
    assert "2: 2 (Q-certified)" in v["hfl-slices"]
    assert "gap flagged" in v["q-rank-sandwich"]
    assert v["hfl-case"].startswith("Braid")
    assert v["alexander-torres"] == "x-specialization: PASS, y-specialization: PASS"


def test_classify_l2(l2_cert):
    assert l2_cert.final == "MatchesL2" and l2_cert.reason == ""
    assert [s.step for s in l2_cert.steps] == EXPECTED_STEPS + ["lemma-supp2"]
    v = step_map(l2_cert)
    assert v["linking-number"] == "lk = -1"
    assert "certified as 12" in v["q-rank-sandwich"]
    assert v["hfl-case"] == "Meridian"
    assert v["lemma-supp2"] == "hypothesis holds: True"


def test_classify_l6a3():
    cert = classify(closure(BraidSpec(3, (1, 2), axis=True)))
    assert cert.final == "RuledOut"
    assert cert.reason.startswith("signature mismatch")
    v = step_map(cert)
    assert v["rank-constraints"] == "total 12, multiple of four: True"
    assert v["hfl-case"] == "Braid"


def test_classify_l4a1():
    cert = classify(closure(BraidSpec(2, (1,), axis=True)))
    assert cert.final == "RuledOut"
    assert cert.reason == "total rank 8 != 12"


def test_classify_hopf_has_no_curated_grid():
    cert = classify(closure(BraidSpec(2, (1, 1))))
    assert cert.final == "RuledOut"
    assert cert.reason == "total rank 4 != 12"
    assert step_map(cert)["hfl-slices"].startswith("skipped")


def test_classify_rejects_knots():
    with pytest.raises(NotTwoComponents):
        classify(closure(BraidSpec(2, (1, 1, 1))))


def test_classify_mirror_l1_ruled_out(l1_link):
    cert = classify(mirror(l1_link))
    assert cert.final == "RuledOut"
    assert cert.reason == "matches L1 only after grading negation (mirror)"


def test_classify_deterministic_and_replays(l1_link, l1_cert):
    again = classify(l1_link)
    assert again.to_json() == l1_cert.to_json()
    assert replay(l1_cert, l1_link)


def test_certificate_json_round_trip(l1_cert):
    back = Certificate.from_json(l1_cert.to_json())
    assert back == l1_cert
    payload = json.loads(l1_cert.to_json())
    assert list(payload) == ["steps", "final", "reason"]
    for s in payload["steps"]:
        assert list(s) == ["step", "anchor", "inputs_hash", "verdict"]
        assert len(s["inputs_hash"]) == 16
        int(s["inputs_hash"], 16)


def test_certificate_summary(l1_cert):
    assert l1_cert.summary() == "MatchesL1"
    cert = classify(closure(BraidSpec(2, (1,), axis=True)))
    assert cert.summary() == "RuledOut: total rank 8 != 12"
