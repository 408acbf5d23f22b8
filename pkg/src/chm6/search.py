"""Exhaustive alphabet searches and parameter scans.

A CHM over a finite alphabet is a 6-clique in the graph of alphabet vectors
joined when orthogonal. Two normalizations are offered:

* ``first_row="ones"``: the first row is all ones (dephased search). Only
  rows orthogonal to it are candidates, which is tiny for {1, w, w^2}.
* ``first_row="sorted"``: the first row is any alphabet vector with
  non-decreasing symbol indices, which is no loss of generality under column
  permutations. Needed for alphabets like {1, -1, x}: after dephasing such a
  matrix its entries leave the alphabet.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

import numpy as np

from . import catalog
from .core import (
    DEFAULT_TOL,
    CMatrix,
    ToleranceConfig,
    UnitScalar,
    distinct_elements,
    is_chm,
)
from .errors import CounterexampleError, DomainError
from .equivalence import EquivalenceWitness, are_equivalent, match_h_family
from .jsonio import matrix_to_json, scalar_to_json
from .substructure import find_h3_blocks, is_h2_reducible


@dataclass(frozen=True)
class Alphabet:
    elements: tuple

    def __post_init__(self):
        elems = tuple(UnitScalar.coerce(e) for e in self.elements)
        if not 2 <= len(elems) <= 6:
            raise DomainError("alphabets have between 2 and 6 elements")
        if not any(e.close_to(1) for e in elems):
            raise DomainError("alphabet must contain 1")
        for i, a in enumerate(elems):
            for b in elems[:i]:
                if a.close_to(b.value):
                    raise DomainError(f"alphabet elements {a} and {b} coincide")
        object.__setattr__(self, "elements", elems)

    @property
    def values(self) -> np.ndarray:
        return np.array([e.value for e in self.elements])

    def __len__(self):
        return len(self.elements)


def candidate_rows(alphabet: Alphabet, tol: ToleranceConfig = DEFAULT_TOL, first_row: str = "ones") -> list:
    """Index tuples of the rows a search may use below the first row."""
    k = len(alphabet)
    one = next(i for i, e in enumerate(alphabet.elements) if e.close_to(1))
    vals = alphabet.values
    if first_row == "ones":
        out = []
        for tail in product(range(k), repeat=5):
            if abs(1 + vals[list(tail)].sum()) < tol.eps_orth:
                out.append((one,) + tail)
        return out
    if first_row == "sorted":
        return list(product(range(k), repeat=6))
    raise ValueError(f"unknown first_row mode {first_row!r}")


def _cliques(adj: list, nodes: Sequence[int], size: int) -> list:
    """All cliques of the given size among ``nodes`` (adjacency as int bitsets)."""
    order = sorted(nodes, key=lambda v: (bin(adj[v]).count("1"), v))
    rank = {v: i for i, v in enumerate(order)}
    later = [0] * (max(nodes, default=-1) + 1)
    for v in order:
        mask = 0
        for u in order[rank[v] + 1 :]:
            mask |= 1 << u
        later[v] = mask
    out = []

    def extend(clique, cand):
        if len(clique) == size:
            out.append(tuple(clique))
            return
        need = size - len(clique)
        while cand and bin(cand).count("1") >= need:
            v = cand.bit_length() - 1
            cand &= ~(1 << v)
            extend(clique + [v], cand & adj[v])

    for v in order:
        extend([v], later[v] & adj[v])
    return out


def find_chm_cliques(
    alphabet: Alphabet | Sequence,
    tol: ToleranceConfig = DEFAULT_TOL,
    first_row: str = "ones",
) -> list:
    """Every CHM of order six over the alphabet, up to row order.

    Rows are listed in lexicographic order of their alphabet indices, so
    row-permuted copies collapse to one result.
    """
    if not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(tuple(alphabet))
    vals = alphabet.values
    rows = candidate_rows(alphabet, tol, first_row)
    vecs = np.array([vals[list(r)] for r in rows]) if rows else np.zeros((0, 6))
    if not rows:
        return []
    ortho = np.abs(vecs @ vecs.conj().T) < tol.eps_orth
    adj = [0] * len(rows)
    for i in range(len(rows)):
        for j in np.flatnonzero(ortho[i]):
            adj[i] |= 1 << int(j)
    found: set = set()
    if first_row == "ones":
        for clique in _cliques(adj, list(range(len(rows))), 5):
            found.add((None,) + tuple(sorted(rows[i] for i in clique)))
    else:
        for s, r in enumerate(rows):
            if list(r) != sorted(r):
                continue
            nbrs = [int(j) for j in np.flatnonzero(ortho[s])]
            for clique in _cliques(adj, nbrs, 5):
                found.add(tuple(sorted([r] + [rows[i] for i in clique])))
    elems = alphabet.elements
    one = next(i for i, e in enumerate(elems) if e.close_to(1))
    out = []
    for key in sorted(found, key=lambda t: tuple((-1,) * 6 if r is None else r for r in t)):
        grid = [(one,) * 6 if r is None else r for r in key]
        out.append(CMatrix.from_entries([[elems[i] for i in r] for r in grid]))
    return out


class Kind(enum.Enum):
    EQUIV_M2 = "EquivM2"
    EQUIV_TAO = "EquivTao"
    H_FAMILY = "HFamilyMember"
    NO_H3 = "NoH3Block"
    UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    params: Optional[catalog.HFamilyParams] = None
    witness: Optional[EquivalenceWitness] = None
    note: str = ""

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind.value}
        if self.params is not None:
            out["alpha"] = scalar_to_json(self.params.alpha)
            out["beta"] = scalar_to_json(self.params.beta)
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class SearchReport:
    parameter: dict
    matrices_found: list = field(default_factory=list)
    classifications: list = field(default_factory=list)
    details: list = field(default_factory=list)
    n_samples: Optional[int] = None
    notes: list = field(default_factory=list)

    @property
    def counterexample(self) -> bool:
        return any(c.kind is Kind.UNCLASSIFIED for c in self.classifications)

    def add(self, m: CMatrix, c: Classification, **detail) -> None:
        self.matrices_found.append(m)
        self.classifications.append(c)
        self.details.append(detail)

    def to_json(self) -> dict:
        out = {
            "parameter": self.parameter,
            "matrices_found": [matrix_to_json(m) for m in self.matrices_found],
            "classifications": [c.to_json() for c in self.classifications],
            "details": self.details,
            "counterexample": self.counterexample,
        }
        if self.n_samples is not None:
            out["n_samples"] = self.n_samples
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def classify(m: CMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> Classification:
    """Place m in the M2 class, the Tao class, the H(alpha, beta) family, or nowhere."""
    w = are_equivalent(m, catalog.m2(), tol)
    if w is not None:
        return Classification(Kind.EQUIV_M2, witness=w)
    w = are_equivalent(m, catalog.tao(), tol)
    if w is not None:
        return Classification(Kind.EQUIV_TAO, witness=w)
    hit = match_h_family(m, tol)
    if hit is not None:
        return Classification(Kind.H_FAMILY, params=hit[0], witness=hit[1])
    return Classification(Kind.UNCLASSIFIED)


def classify_h3(m: CMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> Classification:
    """A CHM with a 3x3 Hadamard block is Tao-equivalent or in H(alpha, beta).

    Raises CounterexampleError if neither holds.
    """
    if not is_chm(m, tol):
        raise DomainError("input is not a complex Hadamard matrix")
    if not find_h3_blocks(m, tol):
        return Classification(Kind.NO_H3)
    hit = match_h_family(m, tol)
    if hit is not None:
        return Classification(Kind.H_FAMILY, params=hit[0], witness=hit[1])
    w = are_equivalent(m, catalog.tao(), tol)
    if w is not None:
        return Classification(Kind.EQUIV_TAO, witness=w)
    raise CounterexampleError(
        "matrix has a 3x3 Hadamard block but is neither Tao-equivalent nor in H(alpha, beta)", m
    )


def _run(fn, items, workers):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def default_two_samples(count: int = 360) -> list:
    return [UnitScalar.from_turns(Fraction(2 * k + 1, 2 * count)) for k in range(count)]


def default_three_samples(count: int = 180) -> list:
    pts = [UnitScalar.from_turns(Fraction(2 * k + 1, 2 * count)) for k in range(count)]
    return pts + [UnitScalar.from_turns("1/4"), UnitScalar.from_turns("3/4")]


def _two_point(args):
    s, tol = args
    rep = SearchReport({"s": scalar_to_json(s)})
    for m in find_chm_cliques(Alphabet((UnitScalar.from_turns(0), s)), tol, first_row="sorted"):
        rep.add(m, Classification(Kind.UNCLASSIFIED, note="CHM over two elements"))
    return rep


def scan_two_element(samples: Sequence, tol: ToleranceConfig = DEFAULT_TOL, workers: int = 1) -> list:
    """One report per s for the alphabet {1, s}; nonexistence predicts all empty."""
    samples = [UnitScalar.coerce(s) for s in samples]
    for s in samples:
        if s.close_to(1):
            raise DomainError("sample s = 1 does not give a two-element alphabet")
    return _run(_two_point, [(s, tol) for s in samples], workers)


def _count_close(row: np.ndarray, x: complex, eps: float) -> int:
    return int(np.sum(np.abs(row - x) < eps))


def _three_point(args):
    x, tol = args
    x = UnitScalar.coerce(x)
    one = UnitScalar.from_turns(0)
    alphabet = Alphabet((one, -one, x))
    m2 = catalog.m2()
    rep = SearchReport({"x": scalar_to_json(x)})
    for m in find_chm_cliques(alphabet, tol, first_row="sorted"):
        if len(distinct_elements(m, tol)) != 3:
            continue
        h2 = is_h2_reducible(m, tol)
        counts = [_count_close(r, x.value, tol.eps_eq) for r in m.values]
        w = are_equivalent(m, m2, tol)
        parity_ok = all(c % 2 == 1 for c in counts) or w is not None
        if w is not None and parity_ok:
            cls = Classification(Kind.EQUIV_M2, witness=w)
        elif not parity_ok:
            cls = Classification(Kind.UNCLASSIFIED, note="parity dichotomy violated")
        elif h2:
            cls = Classification(Kind.UNCLASSIFIED, note="H2-reducible but not equivalent to M2")
        else:
            t = are_equivalent(m, catalog.tao(), tol)
            cls = (
                Classification(Kind.EQUIV_TAO, witness=t)
                if t is not None
                else Classification(Kind.UNCLASSIFIED, note="three-element CHM outside {M2, Tao}")
            )
        rep.add(m, cls, h2_reducible=h2, x_counts=counts, parity_ok=parity_ok)
    return rep


def scan_three_element(samples: Sequence, tol: ToleranceConfig = DEFAULT_TOL, workers: int = 1) -> list:
    """One report per x for CHMs using exactly the three entries 1, -1, x."""
    samples = [UnitScalar.coerce(s) for s in samples]
    for x in samples:
        if x.close_to(1) or x.close_to(-1):
            raise DomainError("x must differ from 1 and -1")
    return _run(_three_point, [(x, tol) for x in samples], workers)


def default_grid(count: int = 32) -> list:
    return [math.pi * k / count for k in range(count)]


def karlsson_grid_scan(
    thetas: Sequence[float],
    phis: Sequence[float],
    z_draws: int,
    seed: int,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> SearchReport:
    """Build Karlsson matrices over a grid with seeded random z3 and sign choices.

    Every sample must be a CHM, and any sample with exactly three distinct
    entries must be equivalent to M2. Failures are reported as counterexamples.
    """
    rng = np.random.default_rng(seed)
    rep = SearchReport(
        {"thetas": list(map(float, thetas)), "phis": list(map(float, phis)), "z_draws": z_draws, "seed": seed}
    )
    m2 = catalog.m2()
    n = three = 0
    for theta in thetas:
        for phi in phis:
            for _ in range(z_draws):
                z3 = np.exp(2j * np.pi * rng.uniform())
                signs = tuple(int(s) for s in rng.choice([-1, 1], size=3))
                z = catalog.karlsson_completion(theta, phi, z3, signs)
                m = catalog.karlsson(catalog.KarlssonParams(theta, phi, z), tol)
                n += 1
                where = {"theta": float(theta), "phi": float(phi), "z": [scalar_to_json(s) for s in z]}
                if not is_chm(m, tol):
                    rep.add(m, Classification(Kind.UNCLASSIFIED, note="not a CHM"), **where)
                    continue
                if len(distinct_elements(m, tol)) == 3:
                    three += 1
                    w = are_equivalent(m, m2, tol)
                    cls = (
                        Classification(Kind.EQUIV_M2, witness=w)
                        if w is not None
                        else Classification(Kind.UNCLASSIFIED, note="three elements, not M2")
                    )
                    rep.add(m, cls, **where)
    rep.n_samples = n
    rep.notes.append(f"{three} samples had exactly three distinct entries")
    return rep
