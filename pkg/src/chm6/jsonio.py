"""Matrix JSON format.

``{"n": 6, "entries": [[{"re": f, "im": f, "phase_turns": "p/q"}, ...], ...]}``
with ``phase_turns`` optional; when present it wins and re/im are regenerated.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

from .core import CMatrix, UnitScalar, parse_turns, turns_to_complex
from .errors import CHMError, StructuralError


def scalar_to_json(s: UnitScalar) -> dict:
    out = {"re": float(s.re), "im": float(s.im)}
    if s.exact_phase is not None:
        out["phase_turns"] = str(s.exact_phase)
    return out


def scalar_from_json(obj) -> UnitScalar:
    if not isinstance(obj, dict):
        raise StructuralError(f"entry must be an object, got {obj!r}")
    if obj.get("phase_turns") is not None:
        return UnitScalar.from_turns(parse_turns(obj["phase_turns"]))
    try:
        z = complex(float(obj["re"]), float(obj["im"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"bad entry {obj!r}") from exc
    return UnitScalar.from_complex(z)


def matrix_to_json(m: CMatrix) -> dict:
    return {"n": m.n, "entries": [[scalar_to_json(s) for s in row] for row in m.rows()]}


def matrix_from_json(obj) -> CMatrix:
    if not isinstance(obj, dict) or "entries" not in obj:
        raise StructuralError("matrix JSON needs an 'entries' field")
    rows = obj["entries"]
    n = obj.get("n", len(rows))
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise StructuralError(f"'entries' is not an {n}x{n} array")
    try:
        return CMatrix.from_entries([[scalar_from_json(e) for e in row] for row in rows])
    except CHMError as exc:
        raise StructuralError(str(exc)) from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def load_matrix(path: str) -> CMatrix:
    """Read a matrix from a file path, or from stdin when path is ``-``."""
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path) as fh:
                text = fh.read()
        obj = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise StructuralError(f"cannot read matrix from {path}: {exc}") from exc
    return matrix_from_json(obj)


def save_matrix(m: CMatrix, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(matrix_to_json(m)))


__all__ = [
    "Fraction",
    "dumps",
    "load_matrix",
    "matrix_from_json",
    "matrix_to_json",
    "save_matrix",
    "scalar_from_json",
    "scalar_to_json",
    "turns_to_complex",
]
