from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from khdetect.cli import CorpusError, corpus_index, corpus_load, corpus_verify, main

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "docs" / "schemas"

ALL_NAMES = [
    "U",
    "U2",
    "hopf",
    "trefoil",
    "trefoil-right",
    "L4a1",
    "L6a2",
    "L6a3",
    "L7n1",
    "trefoil-meridian",
]


def load_schema(name):
    return json.loads((SCHEMA_DIR / name).read_text())


def write_corpus(tmp_path, records):
    p = tmp_path / "corpus.jsonl"
    p.write_text("\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8")
    return str(p)


def run_cli(capsys, argv):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


@pytest.fixture(scope="module")
def entries():
    return corpus_load()


# ------------------------------------------------------ corpus loading


def test_corpus_names_and_aliases(entries):
    assert [e.name for e in entries] == ALL_NAMES
    idx = corpus_index(entries)
    assert idx["L1"].name == "L7n1"
    assert idx["L2"].name == "trefoil-meridian"
    assert idx["T+m"].name == "trefoil-meridian"


def test_corpus_lines_validate_against_schema():
    schema = load_schema("corpus-entry.schema.json")
    text = resources.files("khdetect").joinpath("corpus/links.jsonl").read_text(encoding="utf-8")
    lines = [line for line in text.splitlines() if line.strip()]
    assert len(lines) == len(ALL_NAMES)
    for line in lines:
        jsonschema.validate(json.loads(line), schema)


def test_every_entry_has_some_diagram(entries):
    for e in entries:
        assert e.pd is not None or e.braid is not None or e.grid is not None


def test_corpus_verify_green_and_byte_stable(entries):
    rep1 = corpus_verify(entries)
    rep2 = corpus_verify(entries)
    assert rep1.failures == 0
    assert rep1.text == rep2.text
    assert rep1.text.endswith("0 failures")


def test_verify_flags_non_mult4_expected_total(tmp_path):
    path = write_corpus(
        tmp_path,
        [
            {
                "name": "badhopf",
                "braid": {"strands": 2, "word": [1, 1]},
                "expected": {
                    "kh_l_ranks": {"value": {"0": 4, "2": 3, "4": 3}, "provenance": "derived"}
                },
            }
        ],
    )
    rep = corpus_verify(corpus_load(path))
    assert rep.failures >= 1
    assert any("kh-rank-law FAIL" in line and "not a multiple of 4" in line for line in rep.lines)


def test_load_rejects_entry_without_diagram(tmp_path):
    path = write_corpus(tmp_path, [{"name": "ghost"}])
    with pytest.raises(CorpusError, match="line 1"):
        corpus_load(path)
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"name": "ghost"}, load_schema("corpus-entry.schema.json"))


def test_load_rejects_bad_provenance(tmp_path):
    path = write_corpus(
        tmp_path,
        [
            {
                "name": "x",
                "braid": {"strands": 1, "word": []},
                "expected": {"alexander": {"value": "1", "provenance": "guessed"}},
            }
        ],
    )
    with pytest.raises(CorpusError, match="provenance"):
        corpus_load(path)


def test_load_rejects_duplicate_alias(tmp_path):
    path = write_corpus(
        tmp_path,
        [
            {"name": "a", "braid": {"strands": 1, "word": []}},
            {"name": "b", "aliases": ["a"], "braid": {"strands": 1, "word": []}},
        ],
    )
    with pytest.raises(CorpusError, match="duplicate"):
        corpus_load(path)


def test_load_reports_json_error_line(tmp_path):
    p = tmp_path / "corpus.jsonl"
    p.write_text('{"name": "a", "braid": {"strands": 1, "word": []}}\n{oops\n', encoding="utf-8")
    with pytest.raises(CorpusError, match="line 2"):
        corpus_load(str(p))


# ------------------------------------------------------ kh subcommand


def test_cli_kh_table(capsys):
    code, out, _ = run_cli(capsys, ["kh", "L7n1", "--field", "f2"])
    assert code == 0
    assert "l-ranks: {4: 1, 6: 3, 7: 1, 8: 3, 9: 2, 10: 1, 11: 1}" in out
    assert "total: 12" in out


def test_cli_kh_reduced_json_validates(capsys):
    code, out, _ = run_cli(
        capsys,
        ["kh", "PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]", "--reduced", "--basepoint", "1", "--json"],
    )
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, load_schema("kh-report.schema.json"))
    assert payload["total"] == 3
    assert payload["l_ranks"] == {"2": 1, "4": 1, "5": 1}


def test_cli_kh_rational_field(capsys):
    code, out, _ = run_cli(capsys, ["kh", "U2", "--field", "q"])
    assert code == 0
    assert "total: 4" in out


# ------------------------------------------------------ alex subcommand


def test_cli_alex_torres_pass(capsys):
    code, out, _ = run_cli(capsys, ["alex", "L2", "--torres", "1-x+x^2,1"])
    assert code == 0
    assert "delta: 1 - x + x^2" in out
    assert "torres (knot 1 - x + x^2, l=1): PASS" in out


def test_cli_alex_json_validates(capsys):
    code, out, _ = run_cli(capsys, ["alex", "L7n1", "--torres", "1-x+x^2,2", "--json"])
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, load_schema("alex-report.schema.json"))
    assert payload["delta"] == "1 + x^3*y"
    assert payload["torres"] == {"knot": "1 - x + x^2", "l": 2, "ok": True}


def test_cli_alex_accepts_grid_text(capsys):
    code, out, _ = run_cli(capsys, ["alex", "5 / X: 2 3 4 0 1 / O: 0 1 2 3 4"])
    assert code == 0
    assert "delta: 1 - x + x^2" in out


def test_cli_alex_hopf_unit_delta(capsys):
    code, out, _ = run_cli(capsys, ["alex", "hopf"])
    assert code == 0
    assert "delta: 1\n" in out


def test_cli_alex_requires_grid(capsys):
    code, _, err = run_cli(capsys, ["alex", "trefoil-right"])
    assert code == 3
    assert "no grid diagram" in err


def test_cli_alex_bad_torres_argument(capsys):
    code, _, err = run_cli(capsys, ["alex", "hopf", "--torres", "zzz"])
    assert code == 3
    assert "--torres" in err


# ------------------------------------------------------ detect subcommand


def test_cli_detect_l7n1_json_validates(capsys):
    code, out, _ = run_cli(capsys, ["detect", "L7n1", "--json"])
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, load_schema("certificate.schema.json"))
    assert payload["final"] == "MatchesL1"


def test_cli_detect_l2_alias(capsys):
    code, out, _ = run_cli(capsys, ["detect", "T+m"])
    assert code == 0
    assert "final: MatchesL2" in out


def test_cli_detect_ruled_out_exit_code(capsys):
    code, out, _ = run_cli(capsys, ["detect", "L4a1"])
    assert code == 1
    assert "final: RuledOut: total rank 8 != 12" in out


def test_cli_detect_knot_exit_code(capsys):
    code, _, err = run_cli(capsys, ["detect", "trefoil"])
    assert code == 3
    assert "2 components" in err


def test_cli_unknown_input(capsys):
    code, _, err = run_cli(capsys, ["detect", "nosuchlink"])
    assert code == 3
    assert "unknown input" in err


# ------------------------------------------------------ corpus subcommand


def test_cli_corpus_list(capsys):
    code, out, _ = run_cli(capsys, ["corpus", "list"])
    assert code == 0
    assert "L7n1 (aliases: L1)" in out
    for name in ALL_NAMES:
        assert name in out


def test_cli_corpus_verify_custom_path(tmp_path, capsys):
    good = write_corpus(
        tmp_path,
        [
            {
                "name": "onlyU",
                "braid": {"strands": 1, "word": []},
                "expected": {"kh_l_ranks": {"value": {"-1": 1, "1": 1}, "provenance": "trivial"}},
            }
        ],
    )
    code, out, _ = run_cli(capsys, ["--corpus", good, "corpus", "verify"])
    assert code == 0
    assert "0 failures" in out


def test_cli_corpus_verify_failure_exit(tmp_path, capsys):
    bad = write_corpus(
        tmp_path,
        [
            {
                "name": "badhopf",
                "braid": {"strands": 2, "word": [1, 1]},
                "expected": {
                    "kh_l_ranks": {"value": {"0": 4, "2": 3, "4": 3}, "provenance": "derived"}
                },
            }
        ],
    )
    code, out, _ = run_cli(capsys, ["--corpus", bad, "corpus", "verify"])
    assert code == 1
    assert "kh-rank-law FAIL" in out


def test_cli_custom_corpus_name_resolution(tmp_path, capsys):
    good = write_corpus(tmp_path, [{"name": "onlyU", "braid": {"strands": 1, "word": []}}])
    code, out, _ = run_cli(capsys, ["--corpus", good, "kh", "onlyU"])
    assert code == 0
    assert "total: 2" in out
