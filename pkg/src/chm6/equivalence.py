"""Complex equivalence of CHMs: M ~ N iff N = P M Q with P, Q monomial unitary."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Optional, Sequence

import numpy as np

from .catalog import HFamilyParams, h_family, h_family_values
from .core import (
    DEFAULT_TOL,
    CMatrix,
    MonomialUnitary,
    ToleranceConfig,
    UnitScalar,
    apply_monomials,
    as_cmatrix,
    dephased_at,
    haagerup_multiset,
    is_chm,
    max_deviation,
    multisets_match,
    phase_key,
)
from .errors import DomainError, InconsistencyError
from .identities import ChordTag, chord3_class
from .substructure import find_rank1_2x3

# Witness checks absorb rounding accumulated through composed monomials.
WITNESS_SLACK = 10.0


@dataclass(frozen=True)
class EquivalenceWitness:
    """Certifies ``left @ M @ right == N`` for the pair it was built for."""

    left: MonomialUnitary
    right: MonomialUnitary

    def apply(self, m: CMatrix) -> CMatrix:
        return apply_monomials(self.left, as_cmatrix(m), self.right)

    def deviation(self, m: CMatrix, n: CMatrix) -> float:
        return max_deviation(self.apply(m), as_cmatrix(n))

    def verify(self, m: CMatrix, n: CMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
        return self.deviation(m, n) < WITNESS_SLACK * tol.eps_eq

    def inverse(self) -> "EquivalenceWitness":
        return EquivalenceWitness(self.left.inverse(), self.right.inverse())

    def then(self, other: "EquivalenceWitness") -> "EquivalenceWitness":
        """Witness for M -> K given self: M -> N and other: N -> K."""
        return EquivalenceWitness(other.left @ self.left, self.right @ other.right)

    def to_json(self) -> dict:
        from .jsonio import scalar_to_json

        return {
            "perm_left": list(self.left.perm),
            "phases_left": [scalar_to_json(s) for s in self.left.phases],
            "perm_right": list(self.right.perm),
            "phases_right": [scalar_to_json(s) for s in self.right.phases],
        }


def _require_chm(*ms: CMatrix, tol: ToleranceConfig) -> None:
    for m in ms:
        if not is_chm(m, tol):
            raise DomainError("input is not a complex Hadamard matrix")


def snap_phase(z: complex, eps: float, max_den: int = 24) -> UnitScalar:
    """Tag z as an exact root of unity when it is one to within eps."""
    t = Fraction(float(np.angle(z) / (2 * np.pi))).limit_denominator(max_den) % 1
    exact = UnitScalar.from_turns(t)
    if abs(exact.value - z) < eps:
        return exact
    return UnitScalar.from_complex(z)


def solve_witness(
    m: CMatrix, n: CMatrix, sigma: Sequence[int], tau: Sequence[int], tol: ToleranceConfig = DEFAULT_TOL
) -> Optional[EquivalenceWitness]:
    """Phases d, e with N[i, j] = d_i M[sigma_i, tau_j] e_j, or None.

    The image of entry (0, 0) fixes e_0 = 1; all other phases are then forced.
    """
    p = m.permuted(sigma, tau)
    d = [n.entry(i, 0) / p.entry(i, 0) for i in range(n.n)]
    e = [n.entry(0, j) / (d[0] * p.entry(0, j)) for j in range(n.n)]
    w = EquivalenceWitness(
        MonomialUnitary(tuple(sigma), tuple(d)), MonomialUnitary.column_map(tau, e)
    )
    return w if w.verify(m, n, tol) else None


def _multiset_compat(a: np.ndarray, b: np.ndarray, eps: float) -> np.ndarray:
    """compat[i, k] iff row i of a and row k of b agree as multisets."""
    out = np.zeros((a.shape[0], b.shape[0]), dtype=bool)
    for i, ra in enumerate(a):
        for k, rb in enumerate(b):
            out[i, k] = multisets_match(ra, rb, eps)
    return out


def _perfect_matching(compat: np.ndarray) -> Optional[list]:
    n = compat.shape[0]
    assign: list = [None] * n
    used = [False] * n

    def go(j):
        if j == n:
            return True
        for k in np.flatnonzero(compat[j]):
            if not used[k]:
                used[k] = True
                assign[j] = int(k)
                if go(j + 1):
                    return True
                used[k] = False
        return False

    return assign if go(0) else None


def _match_dephased(md: np.ndarray, nd: np.ndarray, eps: float):
    """Row map pi and column map kappa with md[pi[i], kappa[j]] ~ nd[i, j].

    Both inputs are dephased with the pivot at (0, 0), which stays fixed.
    """
    n = nd.shape[0]
    row_ok = _multiset_compat(nd, md, eps)
    col_ok = _multiset_compat(nd.T, md.T, eps)
    col_ok[0, 1:] = False
    col_ok[1:, 0] = False
    if not row_ok[0, 0]:
        return None
    pi = [0] * n
    used = [True] + [False] * (n - 1)

    def go(i, compat):
        if i == n:
            kappa = _perfect_matching(compat)
            return (list(pi), kappa) if kappa is not None else None
        for k in range(1, n):
            if used[k] or not row_ok[i, k]:
                continue
            nxt = compat & (np.abs(nd[i][:, None] - md[k][None, :]) < eps)
            if not nxt.any(axis=1).all() or not nxt.any(axis=0).all():
                continue
            used[k] = True
            pi[i] = k
            res = go(i + 1, nxt)
            if res is not None:
                return res
            used[k] = False
        return None

    return go(1, col_ok)


def are_equivalent(m: CMatrix, n: CMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> Optional[EquivalenceWitness]:
    """A witness that left @ m @ right == n, or None if m and n are inequivalent."""
    m, n = as_cmatrix(m), as_cmatrix(n)
    _require_chm(m, n, tol=tol)
    if m.n != n.n:
        return None
    eps = WITNESS_SLACK * tol.eps_eq
    if not multisets_match(haagerup_multiset(m), haagerup_multiset(n), eps):
        return None
    size = n.n
    nd = dephased_at(n, 0, 0)
    for r in range(size):
        rows = [r] + [i for i in range(size) if i != r]
        for c in range(size):
            cols = [c] + [j for j in range(size) if j != c]
            found = _match_dephased(dephased_at(m, r, c), nd, eps)
            if found is None:
                continue
            pi, kappa = found
            w = solve_witness(m, n, [rows[k] for k in pi], [cols[k] for k in kappa], tol)
            if w is not None:
                return w
    return None


def canonical_form(m: CMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> CMatrix:
    """Lexicographically least dephased representative of m's equivalence class.

    Dephasing after a permutation only depends on which row and column land
    first, so the search runs over the n^2 pivots and the (n-1)! orders of the
    remaining columns; for a fixed column order the least row order is the
    sorted one. Phases are compared through quantized keys.
    """
    m = as_cmatrix(m)
    _require_chm(m, tol=tol)
    n = m.n
    best = None
    for r in range(n):
        for c in range(n):
            d = dephased_at(m, r, c)
            keys = np.vectorize(phase_key, otypes=[np.int64])(d)
            for tail in permutations(range(1, n)):
                order = (0,) + tail
                sub = keys[:, order]
                body = sorted(range(1, n), key=lambda i: tuple(sub[i]))
                cand = tuple(tuple(sub[i]) for i in [0] + body)
                if best is None or cand < best[0]:
                    best = (cand, d[np.ix_([0] + body, order)])
    vals = best[1]
    return CMatrix(vals / np.abs(vals))


def match_h_family(m: CMatrix, tol: ToleranceConfig = DEFAULT_TOL):
    """Parameters (alpha, beta) and a witness mapping m onto h_family(alpha, beta).

    Follows the constructive argument: move a rank-one 2x3 block to the top
    left and dephase, which forces the rest of the second row to -1; each
    lower row then splits into two vanishing triples, and the remaining row
    and column orders are found by direct search. Returns None when m has no
    rank-one 2x3 block.
    """
    m = as_cmatrix(m)
    _require_chm(m, tol=tol)
    if m.n != 6:
        raise DomainError("the H(alpha, beta) family has order six")
    blocks = find_rank1_2x3(m, tol)
    if not blocks:
        return None
    blk = blocks[0]
    rest_r = [i for i in range(6) if i not in blk.rows]
    rest_c = [j for j in range(6) if j not in blk.cols]
    rows = list(blk.rows) + rest_r
    cols = list(blk.cols) + rest_c
    x = dephased_at(m.permuted(rows, cols), 0, 0)
    eps = tol.eps_eq
    if np.max(np.abs(x[1, :3] - 1)) >= eps:
        raise InconsistencyError("rank-one block did not dephase to ones")
    if abs(3 + x[1, 3:].sum()) >= tol.eps_orth or np.max(np.abs(x[1, 3:] + 1)) >= eps:
        raise InconsistencyError(f"second row tail {x[1, 3:]} is not (-1, -1, -1)")
    for i in range(2, 6):
        for trip in ((1, x[i, 1], x[i, 2]), tuple(x[i, 3:])):
            if chord3_class(*trip, tol=tol).tag is ChordTag.NON_ZERO_SUM:
                raise InconsistencyError(f"row {i} does not split into vanishing triples")
    for cp in ((1, 2), (2, 1)):
        for tp in permutations((3, 4, 5)):
            cidx = [0, *cp, *tp]
            xc = x[:, cidx]
            for rp in permutations((2, 3, 4, 5)):
                y = xc[[0, 1, *rp]]
                alpha, beta = y[2, 3], y[4, 3]
                if np.max(np.abs(y - h_family_values(alpha, beta))) >= eps:
                    continue
                params = HFamilyParams(snap_phase(alpha, eps), snap_phase(beta, eps))
                target = h_family(params)
                sigma = [rows[k] for k in (0, 1, *rp)]
                tau = [cols[k] for k in cidx]
                w = solve_witness(m, target, sigma, tau, tol)
                if w is not None:
                    return params, w
    raise InconsistencyError("rank-one block present but no H(alpha, beta) arrangement fits")
