"""Command-line interface.

Exit codes: 0 success or affirmative answer, 2 usage error, 3 negative
result, 4 counterexample found, 5 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import catalog
from .core import ToleranceConfig, UnitScalar, distinct_elements, gram_defect, imaginary_array, is_chm, parse_turns
from .equivalence import are_equivalent, match_h_family
from .errors import CHMError, CounterexampleError, InconsistencyError, StructuralError
from .jsonio import dumps, load_matrix, matrix_to_json, scalar_to_json
from .search import (
    Alphabet,
    Classification,
    Kind,
    SearchReport,
    classify,
    classify_h3,
    default_grid,
    default_three_samples,
    default_two_samples,
    find_chm_cliques,
    karlsson_grid_scan,
    scan_three_element,
    scan_two_element,
)
from .substructure import DETECTORS, is_h2_reducible

EXIT_OK, EXIT_USAGE, EXIT_NEGATIVE, EXIT_COUNTEREXAMPLE, EXIT_INCONSISTENT = 0, 2, 3, 4, 5

SCAN_HEADER = (
    "Alphabet scans cover matrices whose entries lie in the alphabet after "
    "normalizing the first row (sorted under column permutations); sample "
    "points are a finite grid on the unit circle, not a symbolic proof."
)


@dataclass
class CommandOutcome:
    exit_code: int
    payload: Optional[str] = None
    diagnostics: str = ""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def parse_scalar(text: str) -> UnitScalar:
    """Turns as 'p/q' or a float, or a complex literal such as '1j'."""
    text = text.strip()
    if "j" in text:
        return UnitScalar.from_complex(complex(text.replace(" ", "")))
    return UnitScalar.from_turns(parse_turns(text))


def _angle(text: str) -> float:
    """Angle given in turns, returned in radians."""
    return 2 * math.pi * float(parse_turns(text.strip()))


_CALL = re.compile(r"^\s*(\w+)\s*(?:\((.*)\))?\s*$")


def catalog_matrix(name: str, tol: ToleranceConfig):
    m = _CALL.match(name)
    if not m:
        raise StructuralError(f"cannot parse catalog name {name!r}")
    head, args = m.group(1).lower(), m.group(2)
    argv = [a for a in (args or "").split(",") if a.strip()]
    if head in catalog.CATALOG and not argv:
        return catalog.CATALOG[head]()
    if head == "h" and len(argv) == 2:
        return catalog.h_family(catalog.HFamilyParams(parse_scalar(argv[0]), parse_scalar(argv[1])))
    if head == "karlsson" and len(argv) in (3, 6):
        theta, phi = _angle(argv[0]), _angle(argv[1])
        if len(argv) == 3:
            z = catalog.karlsson_completion(theta, phi, parse_scalar(argv[2]))
        else:
            z = tuple(parse_scalar(a) for a in argv[2:])
        return catalog.karlsson(catalog.KarlssonParams(theta, phi, z), tol)
    raise StructuralError(
        f"unknown catalog entry {name!r}; expected tao, m1, m2, h(alpha,beta), "
        "karlsson(theta,phi,z3) or karlsson(theta,phi,z1,z2,z3,z4)"
    )


def _json(obj) -> str:
    return dumps(obj) + "\n"


def _report_outcome(report: SearchReport, extra: dict | None = None) -> CommandOutcome:
    doc = report.to_json()
    if extra:
        doc = {**extra, **doc}
    return CommandOutcome(EXIT_COUNTEREXAMPLE if report.counterexample else EXIT_OK, _json(doc))


def _scan_outcome(command: str, reports: Sequence[SearchReport]) -> CommandOutcome:
    doc = {"command": command, "header": SCAN_HEADER, "reports": [r.to_json() for r in reports]}
    bad = any(r.counterexample for r in reports)
    return CommandOutcome(EXIT_COUNTEREXAMPLE if bad else EXIT_OK, _json(doc))


def cmd_catalog(a, tol):
    return CommandOutcome(EXIT_OK, _json(matrix_to_json(catalog_matrix(a.name, tol))))


def cmd_verify(a, tol):
    m = load_matrix(a.matrix)
    ok = is_chm(m, tol)
    doc = {
        "n": m.n,
        "is_chm": ok,
        "gram_defect": gram_defect(m),
        "distinct_elements": [scalar_to_json(s) for s in distinct_elements(m, tol)],
        "imaginary_array": list(imaginary_array(m, tol).counts),
        "is_h2_reducible": is_h2_reducible(m, tol),
    }
    return CommandOutcome(EXIT_OK if ok else EXIT_NEGATIVE, _json(doc))


def cmd_detect(a, tol):
    m = load_matrix(a.matrix)
    locs = DETECTORS[a.kind][0](m, tol)
    doc = {"kind": a.kind, "count": len(locs), "locations": [loc.to_json() for loc in locs]}
    return CommandOutcome(EXIT_OK if locs else EXIT_NEGATIVE, _json(doc))


def cmd_equiv(a, tol):
    w = are_equivalent(load_matrix(a.a), load_matrix(a.b), tol)
    if w is None:
        return CommandOutcome(EXIT_NEGATIVE, _json({"equivalent": False}))
    return CommandOutcome(EXIT_OK, _json({"equivalent": True, **w.to_json()}))


def cmd_match_family(a, tol):
    hit = match_h_family(load_matrix(a.matrix), tol)
    if hit is None:
        return CommandOutcome(EXIT_NEGATIVE, _json({"member": False}))
    params, w = hit
    doc = {
        "member": True,
        "alpha": scalar_to_json(params.alpha),
        "beta": scalar_to_json(params.beta),
        "witness": w.to_json(),
    }
    return CommandOutcome(EXIT_OK, _json(doc))


def cmd_search_alphabet(a, tol):
    elems = [parse_scalar(e) for e in a.elements.split(",") if e.strip()]
    alphabet = Alphabet(tuple(elems))
    rep = SearchReport(
        {"elements": [scalar_to_json(e) for e in alphabet.elements], "first_row": a.first_row}
    )
    for m in find_chm_cliques(alphabet, tol, first_row=a.first_row):
        rep.add(m, classify(m, tol))
    return _report_outcome(rep)


def cmd_scan_two(a, tol):
    return _scan_outcome("scan-two", scan_two_element(default_two_samples(a.samples), tol, a.workers))


def cmd_scan_three(a, tol):
    return _scan_outcome("scan-three", scan_three_element(default_three_samples(a.samples), tol, a.workers))


def _seed(a) -> int:
    if a.seed is not None:
        return a.seed
    env = os.environ.get("CHM_SEED")
    try:
        return int(env) if env else 0
    except ValueError as exc:
        raise StructuralError(f"CHM_SEED={env!r} is not an integer") from exc


def cmd_scan_karlsson(a, tol):
    try:
        nt, np_ = (int(x) for x in a.grid.split(","))
    except ValueError as exc:
        raise StructuralError(f"--grid expects T,P, got {a.grid!r}") from exc
    rep = karlsson_grid_scan(default_grid(nt), default_grid(np_), a.zdraws, _seed(a), tol)
    return _report_outcome(rep, {"command": "scan-karlsson"})


def cmd_classify_h3(a, tol):
    m = load_matrix(a.matrix)
    rep = SearchReport({"source": a.matrix})
    try:
        rep.add(m, classify_h3(m, tol))
    except CounterexampleError as exc:
        rep.add(m, Classification(Kind.UNCLASSIFIED, note=str(exc)))
    return _report_outcome(rep, {"command": "classify-h3"})


def _render_report(rep: dict, lines: list) -> None:
    lines.append(f"parameter: {json.dumps(rep.get('parameter', {}), sort_keys=True)}")
    if "n_samples" in rep:
        lines.append(f"samples: {rep['n_samples']}")
    cls = rep.get("classifications", [])
    lines.append(f"matrices found: {len(rep.get('matrices_found', []))}")
    counts: dict = {}
    for c in cls:
        counts[c["kind"]] = counts.get(c["kind"], 0) + 1
    for kind in sorted(counts):
        lines.append(f"  {kind}: {counts[kind]}")
    for note in rep.get("notes", []):
        lines.append(f"note: {note}")
    lines.append("COUNTEREXAMPLE" if rep.get("counterexample") else "no counterexample")


def render(doc: dict) -> str:
    lines: list = []
    if "reports" in doc:
        lines.append(f"{doc.get('command', 'scan')}: {len(doc['reports'])} sample points")
        if doc.get("header"):
            lines.append(doc["header"])
        nonempty = [r for r in doc["reports"] if r.get("matrices_found")]
        lines.append(f"points with hits: {len(nonempty)}")
        for rep in nonempty:
            lines.append("-" * 40)
            _render_report(rep, lines)
        bad = any(r.get("counterexample") for r in doc["reports"])
        lines.append("=" * 40)
        lines.append("COUNTEREXAMPLE FOUND" if bad else "no counterexample at any point")
    else:
        _render_report(doc, lines)
    return "\n".join(lines) + "\n"


def cmd_report(a, tol):
    try:
        text = sys.stdin.read() if a.report == "-" else open(a.report).read()
        doc = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise StructuralError(f"cannot read report {a.report}: {exc}") from exc
    if not isinstance(doc, dict):
        raise StructuralError("report JSON must be an object")
    return CommandOutcome(EXIT_OK, render(doc))


def build_parser() -> argparse.ArgumentParser:
    tolerances = _Parser(add_help=False)
    d = ToleranceConfig()
    tolerances.add_argument("--eps-unit", type=float, default=argparse.SUPPRESS, help=f"default {d.eps_unit}")
    tolerances.add_argument("--eps-orth", type=float, default=argparse.SUPPRESS, help=f"default {d.eps_orth}")
    tolerances.add_argument("--eps-eq", type=float, default=argparse.SUPPRESS, help=f"default {d.eps_eq}")

    p = _Parser(prog="chm6", description="Complex Hadamard matrices of order six.", parents=[tolerances])
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, parents=[tolerances])
        sp.set_defaults(func=fn)
        return sp

    add("catalog", cmd_catalog, "emit a named matrix as JSON").add_argument("name")
    add("verify", cmd_verify, "check the CHM property and report invariants").add_argument("matrix")
    sp = add("detect", cmd_detect, "find 2x2 / 3x3 Hadamard or rank-one 2x3 blocks")
    sp.add_argument("kind", choices=sorted(DETECTORS))
    sp.add_argument("matrix")
    sp = add("equiv", cmd_equiv, "decide complex equivalence")
    sp.add_argument("a")
    sp.add_argument("b")
    add("match-family", cmd_match_family, "match into H(alpha, beta)").add_argument("matrix")
    sp = add("search-alphabet", cmd_search_alphabet, "all CHMs over a finite alphabet")
    sp.add_argument("--elements", required=True, help="comma-separated turns (p/q) or complex literals")
    sp.add_argument("--first-row", choices=("ones", "sorted"), default="ones")
    for name, fn, n in (("scan-two", cmd_scan_two, 360), ("scan-three", cmd_scan_three, 180)):
        sp = add(name, fn, f"alphabet scan over {n} default sample points")
        sp.add_argument("--samples", type=int, default=n)
        sp.add_argument("--workers", type=int, default=1)
    sp = add("scan-karlsson", cmd_scan_karlsson, "validity scan of the H2-reducible family")
    sp.add_argument("--grid", default="32,32")
    sp.add_argument("--zdraws", type=int, default=4)
    sp.add_argument("--seed", type=int, default=None, help="falls back to $CHM_SEED, then 0")
    add("classify-h3", cmd_classify_h3, "classify a CHM with a 3x3 Hadamard block").add_argument("matrix")
    add("report", cmd_report, "render a report JSON as text").add_argument("report")
    return p


def run(argv: Sequence[str]) -> CommandOutcome:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        d = ToleranceConfig()
        tol = ToleranceConfig(
            getattr(args, "eps_unit", d.eps_unit),
            getattr(args, "eps_orth", d.eps_orth),
            getattr(args, "eps_eq", d.eps_eq),
        )
        return args.func(args, tol)
    except UsageError as exc:
        return CommandOutcome(EXIT_USAGE, None, str(exc))
    except InconsistencyError as exc:
        return CommandOutcome(EXIT_INCONSISTENT, None, f"internal inconsistency: {exc}")
    except CHMError as exc:
        return CommandOutcome(EXIT_USAGE, None, f"{exc}\n{parser.format_usage()}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    out = run(sys.argv[1:] if argv is None else argv)
    if out.payload is not None:
        sys.stdout.write(out.payload)
    if out.diagnostics:
        sys.stderr.write(out.diagnostics.rstrip("\n") + "\n")
    return out.exit_code


if __name__ == "__main__":
    sys.exit(main())
