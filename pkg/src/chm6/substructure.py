"""Detectors for 2x2 Hadamard, 3x3 Hadamard and rank-one 2x3 submatrices.

Indices are 0-based. The ``find_*`` functions prune by working on per-row-pair
product vectors; the ``oracle_*`` functions enumerate every index subset and
test the defining condition directly, and exist to cross-check the former.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import DEFAULT_TOL, CMatrix, ToleranceConfig, as_cmatrix, cluster_values
from .errors import StructuralError


@dataclass(frozen=True, order=True)
class BlockLocation:
    rows: tuple
    cols: tuple

    def __post_init__(self):
        rows, cols = tuple(map(int, self.rows)), tuple(map(int, self.cols))
        for idx in (rows, cols):
            if list(idx) != sorted(set(idx)) or (idx and idx[0] < 0):
                raise StructuralError(f"index set {idx} is not strictly increasing")
        if (len(rows), len(cols)) not in ((2, 2), (2, 3), (3, 2), (3, 3)):
            raise StructuralError("only 2x2, 2x3 and 3x3 blocks are supported")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    def to_json(self):
        return {"rows": list(self.rows), "cols": list(self.cols)}


def _pair_products(v: np.ndarray) -> dict:
    return {(a, b): v[a] * v[b].conj() for a, b in combinations(range(v.shape[0]), 2)}


def find_h2_blocks(m: CMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> list:
    v = as_cmatrix(m).values
    n = v.shape[0]
    iu = np.triu_indices(n, 1)
    out = []
    for (a, b), p in _pair_products(v).items():
        hits = np.abs(p[:, None] + p[None, :])[iu] < tol.eps_orth
        out.extend(BlockLocation((a, b), (int(c), int(d))) for c, d in zip(iu[0][hits], iu[1][hits]))
    return sorted(out)


def is_h2_reducible(m: CMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    return bool(find_h2_blocks(m, tol))


def _zero_triples(p: np.ndarray, eps: float) -> set:
    n = p.shape[0]
    s = p[:, None, None] + p[None, :, None] + p[None, None, :]
    return {(c, d, e) for c, d, e in combinations(range(n), 3) if abs(s[c, d, e]) < eps}


def find_h3_blocks(m: CMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> list:
    v = as_cmatrix(m).values
    n = v.shape[0]
    triples = {k: _zero_triples(p, tol.eps_orth) for k, p in _pair_products(v).items()}
    out = []
    for a, b, c in combinations(range(n), 3):
        common = triples[a, b]
        if not common:
            continue
        common = common & triples[a, c] & triples[b, c]
        out.extend(BlockLocation((a, b, c), cols) for cols in common)
    return sorted(out)


def find_rank1_2x3(m: CMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> list:
    v = as_cmatrix(m).values
    n = v.shape[0]
    out = []
    for a, b in combinations(range(n), 2):
        ratio = v[a] / v[b]
        for rep in cluster_values(ratio, tol.eps_eq):
            cols = [c for c in range(n) if abs(ratio[c] - rep) < tol.eps_eq]
            out.extend(BlockLocation((a, b), t) for t in combinations(cols, 3))
    return sorted(set(out))


# Unpruned oracles: every subset, defining condition evaluated on the block.


def oracle_h2_blocks(m: CMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> list:
    v = as_cmatrix(m).values
    n = v.shape[0]
    out = []
    for rows in combinations(range(n), 2):
        for cols in combinations(range(n), 2):
            s = v[np.ix_(rows, cols)]
            if abs(np.vdot(s[1], s[0])) < tol.eps_orth:
                out.append(BlockLocation(rows, cols))
    return out


def oracle_h3_blocks(m: CMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> list:
    v = as_cmatrix(m).values
    n = v.shape[0]
    out = []
    for rows in combinations(range(n), 3):
        for cols in combinations(range(n), 3):
            s = v[np.ix_(rows, cols)]
            if np.max(np.abs(s @ s.conj().T - 3 * np.eye(3))) < tol.eps_orth:
                out.append(BlockLocation(rows, cols))
    return out


def oracle_rank1_2x3(m: CMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> list:
    v = as_cmatrix(m).values
    n = v.shape[0]
    out = []
    for rows in combinations(range(n), 2):
        for cols in combinations(range(n), 3):
            s = v[np.ix_(rows, cols)]
            r = s[0] / s[1]
            if abs(r[1] - r[0]) < tol.eps_eq and abs(r[2] - r[0]) < tol.eps_eq:
                out.append(BlockLocation(rows, cols))
    return out


DETECTORS = {
    "h2": (find_h2_blocks, oracle_h2_blocks),
    "h3": (find_h3_blocks, oracle_h3_blocks),
    "rank1": (find_rank1_2x3, oracle_rank1_2x3),
}
