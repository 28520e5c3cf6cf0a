"""Command-line surface and the bundled link corpus.

Subcommands: `kh` (rank tables), `alex` (grid Euler characteristic and
Alexander polynomial with an optional Torres check), `detect` (the full
certificate pipeline, exit code 0/1/2 for match/ruled out/inconclusive and
3 on errors), and `corpus` (list or re-verify the bundled fixtures).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional, Tuple

from .detect import NotTwoComponents, classify
from .gridfloer import (
    GridDiagram,
    alexander_poly,
    euler_char,
    hat_extract,
    parse_grid,
    tilde_homology,
    top_slice,
)
from .khovanov import kh_ranks
from .laurent import LaurentPoly, torres_conditions
from .linkdiag import BraidSpec, PDLink, closure, linking_number, parse_pd

PROVENANCE_TAGS = ("paper", "derived", "trivial")
EXPECTED_CHECKS = (
    "kh_l_ranks",
    "kh_reduced_l_ranks",
    "linking",
    "alexander",
    "hfl_top_slice",
)


class CorpusError(ValueError):
    pass


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    aliases: Tuple[str, ...]
    pd: Optional[str]
    braid: Optional[Dict]
    grid: Optional[str]
    expected: Dict[str, Dict]
    line_no: int

    def link(self) -> Optional[PDLink]:
        if self.pd is not None:
            return parse_pd(self.pd)
        if self.braid is not None:
            spec = BraidSpec(
                strands=int(self.braid["strands"]),
                word=tuple(int(w) for w in self.braid["word"]),
                axis=bool(self.braid.get("axis", False)),
            )
            return closure(spec)
        return None

    def grid_diagram(self) -> Optional[GridDiagram]:
        return parse_grid(self.grid) if self.grid is not None else None


def _corpus_text(path: Optional[str]) -> Tuple[str, str]:
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read(), path
    res = resources.files("khdetect").joinpath("corpus/links.jsonl")
    return res.read_text(encoding="utf-8"), str(res)


def _validate_entry(raw: object, line_no: int) -> CorpusEntry:
    def bad(msg: str) -> CorpusError:
        return CorpusError(f"line {line_no}: {msg}")

    if not isinstance(raw, dict):
        raise bad("entry is not a JSON object")
    name = raw.get("name")
    if not isinstance(name, str) or not name:
        raise bad("missing or empty name")
    aliases = raw.get("aliases", [])
    if not isinstance(aliases, list) or not all(isinstance(a, str) for a in aliases):
        raise bad("aliases must be a list of strings")
    pd = raw.get("pd")
    braid = raw.get("braid")
    grid = raw.get("grid")
    if pd is None and braid is None and grid is None:
        raise bad("needs at least one of pd, braid, grid")
    if pd is not None and not isinstance(pd, str):
        raise bad("pd must be a string")
    if grid is not None and not isinstance(grid, str):
        raise bad("grid must be a string")
    if braid is not None:
        if not isinstance(braid, dict) or "strands" not in braid or "word" not in braid:
            raise bad("braid must be an object with strands and word")
        extra = set(braid) - {"strands", "word", "axis"}
        if extra:
            raise bad(f"unknown braid fields {sorted(extra)}")
    expected = raw.get("expected", {})
    if not isinstance(expected, dict):
        raise bad("expected must be an object")
    for check, block in expected.items():
        if check not in EXPECTED_CHECKS:
            raise bad(f"unknown expected check {check!r}")
        if not isinstance(block, dict) or set(block) != {"value", "provenance"}:
            raise bad(f"expected block {check!r} needs exactly value and provenance")
        if block["provenance"] not in PROVENANCE_TAGS:
            raise bad(f"expected block {check!r} has invalid provenance {block['provenance']!r}")
    extra = set(raw) - {"name", "aliases", "pd", "braid", "grid", "expected"}
    if extra:
        raise bad(f"unknown fields {sorted(extra)}")
    return CorpusEntry(
        name=name,
        aliases=tuple(aliases),
        pd=pd,
        braid=braid,
        grid=grid,
        expected=expected,
        line_no=line_no,
    )


def corpus_load(path: Optional[str] = None) -> List[CorpusEntry]:
    """Parse and validate a JSON-lines corpus; defaults to the bundled one."""
    text, origin = _corpus_text(path)
    entries: List[CorpusEntry] = []
    seen: Dict[str, int] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"line {line_no}: invalid JSON ({exc.msg})") from None
        entry = _validate_entry(raw, line_no)
        for key in (entry.name, *entry.aliases):
            if key in seen:
                raise CorpusError(f"line {line_no}: duplicate name or alias {key!r} (first on line {seen[key]})")
            seen[key] = line_no
        entries.append(entry)
    if not entries:
        raise CorpusError(f"{origin}: no entries")
    return entries


def corpus_index(entries: List[CorpusEntry]) -> Dict[str, CorpusEntry]:
    index: Dict[str, CorpusEntry] = {}
    for e in entries:
        for key in (e.name, *e.aliases):
            index[key] = e
    return index


@dataclass
class VerifyReport:
    lines: List[str] = field(default_factory=list)
    checks: int = 0
    failures: int = 0

    def add(self, name: str, check: str, ok: bool, detail: str = "") -> None:
        self.checks += 1
        if not ok:
            self.failures += 1
        tail = f" ({detail})" if detail and not ok else ""
        self.lines.append(f"{name}: {check} {'OK' if ok else 'FAIL'}{tail}")

    @property
    def text(self) -> str:
        summary = f"{self.checks} checks, {self.failures} failures"
        return "\n".join(self.lines + [summary])


def _table_from_json(value: Dict[str, int]) -> Dict[int, int]:
    return {int(l): int(r) for l, r in value.items()}


def _fmt(table: Dict[int, int]) -> str:
    return "{" + ", ".join(f"{l}: {r}" for l, r in sorted(table.items())) + "}"


def corpus_verify(entries: Optional[List[CorpusEntry]] = None) -> VerifyReport:
    """Recompute every expected block of the corpus and diff against it.

    One deterministic report line per check, entries in name order;
    expected Khovanov tables of 2-component links are additionally held to
    the multiple-of-four total rank law before anything is recomputed.
    """
    if entries is None:
        entries = corpus_load()
    report = VerifyReport()
    for entry in sorted(entries, key=lambda e: e.name):
        link = entry.link()
        grid = entry.grid_diagram()
        if link is not None and grid is not None:
            ok = link.num_components() == grid.num_components
            detail = f"pd has {link.num_components()} components, grid {grid.num_components}"
            if ok and link.num_components() == 2:
                ok = linking_number(link, 0, 1) == grid.linking_number(0, 1)
                detail = (
                    f"pd lk {linking_number(link, 0, 1)}, grid lk {grid.linking_number(0, 1)}"
                )
            report.add(entry.name, "diagram-consistency", ok, detail)
        exp = entry.expected
        if "kh_l_ranks" in exp:
            want = _table_from_json(exp["kh_l_ranks"]["value"])
            if link is not None and link.num_components() == 2:
                total = sum(want.values())
                report.add(entry.name, "kh-rank-law", total % 4 == 0, f"expected total {total} is not a multiple of 4")
            if link is not None:
                got = kh_ranks(link).l_ranks()
                report.add(entry.name, "kh-l-ranks", got == want, f"computed {_fmt(got)}, expected {_fmt(want)}")
            else:
                report.add(entry.name, "kh-l-ranks", False, "no diagram to compute from")
        if "kh_reduced_l_ranks" in exp:
            want = _table_from_json(exp["kh_reduced_l_ranks"]["value"])
            if link is not None:
                got = kh_ranks(link, reduced=True).l_ranks()
                report.add(entry.name, "kh-reduced-l-ranks", got == want, f"computed {_fmt(got)}, expected {_fmt(want)}")
            else:
                report.add(entry.name, "kh-reduced-l-ranks", False, "no diagram to compute from")
        if "linking" in exp:
            for i, j, lk in exp["linking"]["value"]:
                ok = link is not None and linking_number(link, i, j) == lk
                detail = "no diagram" if link is None else f"computed {linking_number(link, i, j)}, expected {lk}"
                report.add(entry.name, f"linking-{i}-{j}", ok, detail)
        hat = None
        if grid is not None and ("alexander" in exp or "hfl_top_slice" in exp):
            hat = hat_extract(tilde_homology(grid), grid)
        if "alexander" in exp:
            if grid is None:
                report.add(entry.name, "alexander", False, "no grid")
            else:
                want_poly = LaurentPoly.parse(exp["alexander"]["value"], nvars=grid.num_components)
                delta = alexander_poly(grid)
                report.add(
                    entry.name,
                    "alexander",
                    delta.doteq(want_poly) is not None,
                    f"computed {delta.canonical()[0]}, expected {want_poly}",
                )
        if "hfl_top_slice" in exp:
            for comp, a2, dim in exp["hfl_top_slice"]["value"]:
                if hat is None:
                    report.add(entry.name, f"hfl-top-{comp}", False, "no grid")
                    continue
                got_top = top_slice(hat, comp)
                report.add(
                    entry.name,
                    f"hfl-top-{comp}",
                    got_top == (a2, dim),
                    f"computed {got_top}, expected {(a2, dim)}",
                )
    return report


# --- input resolution -------------------------------------------------------


def resolve_input(text: str, path: Optional[str] = None) -> Tuple[Optional[PDLink], Optional[GridDiagram]]:
    """Turn a CLI input (corpus name or alias, PD text, grid text) into diagrams."""
    if text.lstrip().startswith("PD["):
        return parse_pd(text), None
    if "X:" in text:
        return None, parse_grid(text)
    entry = corpus_index(corpus_load(path)).get(text)
    if entry is None:
        raise InputError(f"unknown input {text!r}: not a corpus name, PD text, or grid text")
    return entry.link(), entry.grid_diagram()


# --- subcommands -------------------------------------------------------------


def cmd_kh(args: argparse.Namespace) -> int:
    link, _ = resolve_input(args.input, args.corpus)
    if link is None:
        raise InputError(f"{args.input!r} carries no link diagram to compute Khovanov homology from")
    field_name = {"f2": "F2", "q": "Q"}[args.field]
    table = kh_ranks(link, field=field_name, reduced=args.reduced, basepoint=args.basepoint)
    bigraded = sorted(table.as_dict().items())
    l_ranks = table.l_ranks()
    if args.json:
        payload = {
            "input": args.input,
            "field": field_name,
            "reduced": args.reduced,
            "basepoint": args.basepoint,
            "bigraded": [[h, q, r] for (h, q), r in bigraded],
            "l_ranks": {str(l): r for l, r in sorted(l_ranks.items())},
            "total": table.total(),
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"input: {args.input}")
        print(f"field: {field_name}  reduced: {'yes' if args.reduced else 'no'}")
        print("h\tq\trank")
        for (h, q), r in bigraded:
            print(f"{h}\t{q}\t{r}")
        print(f"l-ranks: {_fmt(l_ranks)}")
        print(f"total: {table.total()}")
    return 0


def _parse_torres(arg: str) -> Tuple[LaurentPoly, int]:
    text, _, l_text = arg.rpartition(",")
    if not text:
        raise InputError('--torres expects "<knot polynomial>,<linking number>"')
    try:
        l = int(l_text)
    except ValueError:
        raise InputError(f"--torres linking number {l_text!r} is not an integer") from None
    return LaurentPoly.parse(text, nvars=1), l


def cmd_alex(args: argparse.Namespace) -> int:
    link, grid = resolve_input(args.input, args.corpus)
    if grid is None:
        raise InputError(f"{args.input!r} carries no grid diagram; alex needs one")
    chi = euler_char(grid)
    delta = alexander_poly(grid).canonical()[0]
    torres = None
    if args.torres is not None:
        knot_poly, l = _parse_torres(args.torres)
        rep = torres_conditions(delta, knot_poly, l)
        torres = {"knot": str(knot_poly), "l": l, "ok": bool(rep.ok_x and rep.ok_y)}
    if args.json:
        payload = {
            "input": args.input,
            "chi": str(chi),
            "delta": str(delta),
            "torres": torres,
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"input: {args.input}")
        print(f"chi: {chi}")
        print(f"delta: {delta}")
        if torres is not None:
            print(f"torres (knot {torres['knot']}, l={torres['l']}): {'PASS' if torres['ok'] else 'FAIL'}")
    return 0


def cmd_detect(args: argparse.Namespace) -> int:
    link, grid = resolve_input(args.input, args.corpus)
    if link is None:
        raise InputError(f"{args.input!r} carries no link diagram to classify")
    cert = classify(link, grid)
    if args.json:
        print(cert.to_json())
    else:
        for step in cert.steps:
            print(f"[{step.anchor}] {step.step}: {step.verdict}")
        print(f"final: {cert.summary()}")
    if cert.final in ("MatchesL1", "MatchesL2"):
        return 0
    if cert.final == "RuledOut":
        return 1
    return 2


def cmd_corpus(args: argparse.Namespace) -> int:
    entries = corpus_load(args.corpus)
    if args.action == "list":
        for e in sorted(entries, key=lambda x: x.name):
            parts = [k for k in ("pd", "braid", "grid") if getattr(e, k) is not None]
            alias = f" (aliases: {', '.join(e.aliases)})" if e.aliases else ""
            expected = ", ".join(sorted(e.expected)) or "none"
            print(f"{e.name}{alias}: {'/'.join(parts)}; expected: {expected}")
        return 0
    report = corpus_verify(entries)
    print(report.text)
    return 0 if report.failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="khdetect",
        description="Khovanov and grid Floer invariants for small links, with a detection pipeline.",
    )
    parser.add_argument(
        "--corpus",
        metavar="PATH",
        default=None,
        help="JSON-lines corpus to resolve names against (defaults to the bundled one)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_kh = sub.add_parser("kh", help="Khovanov rank tables")
    p_kh.add_argument("input", help="corpus name, alias, or PD text")
    p_kh.add_argument("--field", choices=("f2", "q"), default="f2")
    p_kh.add_argument("--reduced", action="store_true")
    p_kh.add_argument("--basepoint", type=int, default=None, metavar="EDGE")
    p_kh.add_argument("--json", action="store_true")
    p_kh.set_defaults(func=cmd_kh)

    p_alex = sub.add_parser("alex", help="grid Euler characteristic and Alexander polynomial")
    p_alex.add_argument("input", help="corpus name, alias, or grid text")
    p_alex.add_argument("--torres", metavar="POLY,L", default=None, help='Torres check, e.g. "1-x+x^2",2')
    p_alex.add_argument("--json", action="store_true")
    p_alex.set_defaults(func=cmd_alex)

    p_det = sub.add_parser("detect", help="run the detection pipeline")
    p_det.add_argument("input", help="corpus name, alias, or PD text")
    p_det.add_argument("--json", action="store_true")
    p_det.set_defaults(func=cmd_detect)

    p_cor = sub.add_parser("corpus", help="list or verify the corpus")
    p_cor.add_argument("action", choices=("list", "verify"))
    p_cor.set_defaults(func=cmd_corpus)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotTwoComponents as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
