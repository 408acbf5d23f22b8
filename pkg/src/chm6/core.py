"""Unimodular scalars, the matrix value type and elementwise invariants.

All arithmetic is floating point. Entries that are known roots of unity may
additionally carry an exact phase, stored as a :class:`fractions.Fraction`
number of turns, so that products and conjugates of tagged values stay exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError, StructuralError

TAU = 2.0 * math.pi
OMEGA = complex(-0.5, math.sqrt(3.0) / 2.0)

# Phase keys used for deterministic sorting are quantized to this many steps
# per turn. Float noise must stay far below one step.
PHASE_STEPS = 1 << 24


@dataclass(frozen=True)
class ToleranceConfig:
    eps_unit: float = 1e-9
    eps_orth: float = 1e-8
    eps_eq: float = 1e-8

    def __post_init__(self):
        for name in ("eps_unit", "eps_orth", "eps_eq"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be strictly positive")
        if self.eps_unit > self.eps_eq:
            raise DomainError("eps_unit must not exceed eps_eq")


DEFAULT_TOL = ToleranceConfig()


def turns_to_complex(turns: Fraction) -> complex:
    """Exact-ish evaluation of exp(2*pi*i*turns), snapping the quarter turns."""
    t = turns % 1
    snapped = {
        Fraction(0): 1 + 0j,
        Fraction(1, 4): 1j,
        Fraction(1, 2): -1 + 0j,
        Fraction(3, 4): -1j,
    }
    if t in snapped:
        return snapped[t]
    return cmath.exp(1j * TAU * float(t))


def phase_of(z: complex) -> float:
    """Argument of z in [0, 2*pi)."""
    p = math.atan2(z.imag, z.real)
    if p < 0:
        p += TAU
    if p >= TAU:
        p -= TAU
    return p


def phase_key(z: complex) -> int:
    """Quantized phase in units of 1/PHASE_STEPS turn, wrapped so 0 == 1 turn."""
    return int(round(phase_of(z) / TAU * PHASE_STEPS)) % PHASE_STEPS


def parse_turns(text: str | Fraction | int) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise StructuralError(f"cannot parse turns {text!r}") from exc


@dataclass(frozen=True)
class UnitScalar:
    """A complex number of modulus one, optionally tagged with exact turns."""

    re: float
    im: float
    exact_phase: Optional[Fraction] = None

    def __post_init__(self):
        if abs(math.hypot(self.re, self.im) - 1.0) > DEFAULT_TOL.eps_unit:
            raise DomainError(f"{complex(self.re, self.im)} is not unimodular")
        if self.exact_phase is not None:
            object.__setattr__(self, "exact_phase", Fraction(self.exact_phase) % 1)
            z = turns_to_complex(self.exact_phase)
            if abs(z - complex(self.re, self.im)) > DEFAULT_TOL.eps_unit:
                raise DomainError("exact_phase disagrees with (re, im)")

    @classmethod
    def from_turns(cls, turns) -> "UnitScalar":
        t = parse_turns(turns) % 1
        z = turns_to_complex(t)
        return cls(z.real, z.imag, t)

    @classmethod
    def from_complex(cls, z: complex, eps_unit: float = DEFAULT_TOL.eps_unit) -> "UnitScalar":
        z = complex(z)
        if abs(abs(z) - 1.0) > eps_unit:
            raise DomainError(f"{z} is not unimodular")
        z = z / abs(z)
        return cls(z.real, z.imag)

    @classmethod
    def coerce(cls, value) -> "UnitScalar":
        if isinstance(value, UnitScalar):
            return value
        if isinstance(value, (Fraction, str)):
            return cls.from_turns(value)
        return cls.from_complex(value)

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def __complex__(self):
        return self.value

    @property
    def phase(self) -> float:
        if self.exact_phase is not None:
            return TAU * float(self.exact_phase)
        return phase_of(self.value)

    def __mul__(self, other: "UnitScalar") -> "UnitScalar":
        other = UnitScalar.coerce(other)
        if self.exact_phase is not None and other.exact_phase is not None:
            return UnitScalar.from_turns(self.exact_phase + other.exact_phase)
        return UnitScalar.from_complex(self.value * other.value)

    __rmul__ = __mul__

    def __truediv__(self, other: "UnitScalar") -> "UnitScalar":
        return self * UnitScalar.coerce(other).conjugate()

    def __neg__(self) -> "UnitScalar":
        return self * UnitScalar.from_turns(Fraction(1, 2))

    def conjugate(self) -> "UnitScalar":
        if self.exact_phase is not None:
            return UnitScalar.from_turns(-self.exact_phase)
        return UnitScalar(self.re, -self.im)

    def close_to(self, other, eps: float = DEFAULT_TOL.eps_eq) -> bool:
        return abs(self.value - complex(other)) < eps

    def __str__(self):
        if self.exact_phase is not None:
            return f"e^(2pi i {self.exact_phase})"
        return f"{self.value:.12g}"


ONE = UnitScalar.from_turns(0)
W = UnitScalar.from_turns(Fraction(1, 3))


def _tag_grid(turns, n):
    if turns is None:
        return None
    grid = tuple(tuple(None if t is None else Fraction(t) % 1 for t in row) for row in turns)
    if len(grid) != n or any(len(row) != n for row in grid):
        raise StructuralError("phase tag grid has the wrong shape")
    if all(t is None for row in grid for t in row):
        return None
    return grid


@dataclass(frozen=True, eq=False)
class CMatrix:
    """Square matrix of unimodular entries (the 1/sqrt(n) factor is omitted).

    ``values`` is a read-only complex array; ``turns`` optionally tags entries
    that are exact roots of unity.
    """

    values: np.ndarray
    turns: Optional[tuple] = field(default=None)

    def __post_init__(self):
        arr = np.array(self.values, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise StructuralError(f"expected a square matrix, got shape {arr.shape}")
        bad = np.abs(np.abs(arr) - 1.0) > DEFAULT_TOL.eps_unit
        if bad.any():
            i, j = map(int, np.argwhere(bad)[0])
            raise DomainError(f"entry ({i}, {j}) = {arr[i, j]} is not unimodular")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "turns", _tag_grid(self.turns, arr.shape[0]))

    @classmethod
    def from_turns(cls, turns: Sequence[Sequence]) -> "CMatrix":
        tags = [[parse_turns(t) for t in row] for row in turns]
        vals = [[turns_to_complex(t) for t in row] for row in tags]
        return cls(np.array(vals), tuple(map(tuple, tags)))

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence]) -> "CMatrix":
        """Build from UnitScalars, complex numbers or turn strings."""
        scal = [[UnitScalar.coerce(v) for v in row] for row in rows]
        vals = np.array([[s.value for s in row] for row in scal])
        tags = tuple(tuple(s.exact_phase for s in row) for row in scal)
        return cls(vals, tags)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def entry(self, i: int, j: int) -> UnitScalar:
        z = self.values[i, j]
        t = None if self.turns is None else self.turns[i][j]
        if t is not None:
            return UnitScalar(z.real, z.imag, t)
        return UnitScalar.from_complex(z)

    def rows(self):
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]

    def transpose(self) -> "CMatrix":
        tags = None if self.turns is None else tuple(zip(*self.turns))
        return CMatrix(self.values.T, tags)

    def conj(self) -> "CMatrix":
        tags = None
        if self.turns is not None:
            tags = tuple(tuple(None if t is None else -t for t in row) for row in self.turns)
        return CMatrix(self.values.conj(), tags)

    def permuted(self, rows: Sequence[int], cols: Sequence[int]) -> "CMatrix":
        """Matrix whose (i, j) entry is self[rows[i], cols[j]]."""
        rows, cols = list(rows), list(cols)
        tags = None
        if self.turns is not None:
            tags = tuple(tuple(self.turns[r][c] for c in cols) for r in rows)
        return CMatrix(self.values[np.ix_(rows, cols)], tags)

    def scaled(self, left: Sequence, right: Sequence) -> "CMatrix":
        """diag(left) @ self @ diag(right), propagating exact tags where possible."""
        left = [UnitScalar.coerce(v) for v in left]
        right = [UnitScalar.coerce(v) for v in right]
        lv = np.array([s.value for s in left])
        rv = np.array([s.value for s in right])
        vals = lv[:, None] * self.values * rv[None, :]
        vals = vals / np.abs(vals)
        tags = None
        if self.turns is not None:
            tags = tuple(
                tuple(
                    None
                    if (t is None or left[i].exact_phase is None or right[j].exact_phase is None)
                    else t + left[i].exact_phase + right[j].exact_phase
                    for j, t in enumerate(row)
                )
                for i, row in enumerate(self.turns)
            )
            vals = vals.copy()
            for i, row in enumerate(tags):
                for j, t in enumerate(row):
                    if t is not None:
                        vals[i, j] = turns_to_complex(t)
        return CMatrix(vals, tags)

    def allclose(self, other: "CMatrix", eps: float = DEFAULT_TOL.eps_eq) -> bool:
        return self.n == other.n and max_deviation(self, other) < eps

    def __repr__(self):
        return f"CMatrix(n={self.n})"


def as_cmatrix(m) -> CMatrix:
    if isinstance(m, CMatrix):
        return m
    return CMatrix(np.asarray(m, dtype=complex))


def max_deviation(a: CMatrix, b: CMatrix) -> float:
    return float(np.max(np.abs(a.values - b.values)))


def gram_defect(m: CMatrix) -> float:
    """max |(M M^dagger)_ij - n delta_ij|."""
    v = as_cmatrix(m).values
    g = v @ v.conj().T
    return float(np.max(np.abs(g - v.shape[0] * np.eye(v.shape[0]))))


def unit_defect(m: CMatrix) -> float:
    return float(np.max(np.abs(np.abs(as_cmatrix(m).values) - 1.0)))


def is_chm(m: CMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    m = as_cmatrix(m)
    return unit_defect(m) <= tol.eps_unit and gram_defect(m) < tol.eps_orth


@dataclass(frozen=True)
class MonomialUnitary:
    """Monomial unitary with entry ``phases[i]`` at position ``(i, perm[i])``."""

    perm: tuple
    phases: tuple

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        if sorted(perm) != list(range(len(perm))):
            raise StructuralError(f"{perm} is not a permutation")
        phases = tuple(UnitScalar.coerce(p) for p in self.phases)
        if len(phases) != len(perm):
            raise StructuralError("perm and phases differ in length")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "phases", phases)

    @classmethod
    def identity(cls, n: int = 6) -> "MonomialUnitary":
        return cls(tuple(range(n)), (ONE,) * n)

    @classmethod
    def diagonal(cls, phases) -> "MonomialUnitary":
        return cls(tuple(range(len(phases))), tuple(phases))

    @classmethod
    def column_map(cls, tau: Sequence[int], phases) -> "MonomialUnitary":
        """Right factor Q with (X Q)[:, j] = phases[j] * X[:, tau[j]]."""
        n = len(tau)
        perm = [0] * n
        ph = [None] * n
        for j, k in enumerate(tau):
            perm[k] = j
            ph[k] = phases[j]
        return cls(tuple(perm), tuple(ph))

    @property
    def n(self) -> int:
        return len(self.perm)

    def to_array(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=complex)
        for i, (p, s) in enumerate(zip(self.perm, self.phases)):
            a[i, p] = s.value
        return a

    def inverse(self) -> "MonomialUnitary":
        # (P^-1)[perm[i], i] = conj(phases[i])
        inv = [0] * self.n
        ph = [None] * self.n
        for i, (p, s) in enumerate(zip(self.perm, self.phases)):
            inv[p] = i
            ph[p] = s.conjugate()
        return MonomialUnitary(tuple(inv), tuple(ph))

    def __matmul__(self, other: "MonomialUnitary") -> "MonomialUnitary":
        # (P O)[i, O.perm[P.perm[i]]] = P.phases[i] * O.phases[P.perm[i]]
        perm = tuple(other.perm[p] for p in self.perm)
        phases = tuple(s * other.phases[p] for p, s in zip(self.perm, self.phases))
        return MonomialUnitary(perm, phases)


def apply_monomials(left: MonomialUnitary, m: CMatrix, right: MonomialUnitary) -> CMatrix:
    """left @ m @ right, keeping exact tags when every factor is tagged."""
    rows = list(left.perm)
    # (X Q)[:, perm[k]] = phases[k] X[:, k]  =>  column j comes from k = perm^-1[j]
    inv = [0] * right.n
    for k, p in enumerate(right.perm):
        inv[p] = k
    moved = m.permuted(rows, inv)
    return moved.scaled(left.phases, [right.phases[k] for k in inv])


def dephase(m: CMatrix):
    """Return (M', D1, D2) with M' = D1 M D2 having first row and column all ones."""
    m = as_cmatrix(m)
    first_row = [m.entry(0, j) for j in range(m.n)]
    right = [s.conjugate() for s in first_row]
    left = [(m.entry(i, 0) * right[0]).conjugate() for i in range(m.n)]
    d1 = MonomialUnitary.diagonal(left)
    d2 = MonomialUnitary.diagonal(right)
    return m.scaled(left, right), d1, d2


def dephased_at(m: CMatrix, row: int, col: int) -> np.ndarray:
    """Values of M with ``row``/``col`` moved to the front and then dephased."""
    v = m.values
    n = v.shape[0]
    rows = [row] + [i for i in range(n) if i != row]
    cols = [col] + [j for j in range(n) if j != col]
    p = v[np.ix_(rows, cols)]
    return p * p[0, 0] / (p[:, :1] * p[:1, :])


@dataclass(frozen=True)
class ImaginaryArray:
    counts: tuple

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if any(c < 0 or c > len(self.counts) for c in self.counts):
            raise DomainError("imaginary counts out of range")

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __iter__(self):
        return iter(self.counts)

    def __eq__(self, other):
        if isinstance(other, ImaginaryArray):
            return self.counts == other.counts
        return self.counts == tuple(other)

    def __hash__(self):
        return hash(self.counts)


def imaginary_array(m: CMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> ImaginaryArray:
    v = as_cmatrix(m).values
    return ImaginaryArray(tuple(int(c) for c in (np.abs(v.imag) > tol.eps_eq).sum(axis=1)))


def _sort_key(z: complex):
    return (phase_key(z), round(z.real, 12))


def cluster_values(values: Iterable[complex], eps: float) -> list:
    """Greedy representatives of |u - v| < eps classes, first occurrence wins."""
    reps: list = []
    for z in values:
        if not any(abs(z - r) < eps for r in reps):
            reps.append(z)
    return reps


def distinct_elements(m: CMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> list:
    """Distinct entries (within eps_eq), sorted by phase in [0, 2*pi)."""
    m = as_cmatrix(m)
    reps: list = []
    for i in range(m.n):
        for j in range(m.n):
            z = m.values[i, j]
            if not any(abs(z - r.value) < tol.eps_eq for r in reps):
                reps.append(m.entry(i, j))
    return sorted(reps, key=lambda s: _sort_key(s.value))


def haagerup_multiset(m: CMatrix) -> np.ndarray:
    """All n^4 products M_ij M_kl conj(M_il) conj(M_kj), sorted by (phase, re)."""
    v = as_cmatrix(m).values
    prod = np.einsum("ij,kl,il,kj->ijkl", v, v, v.conj(), v.conj()).ravel()
    keys = np.round(np.angle(prod) % TAU / TAU * PHASE_STEPS).astype(np.int64) % PHASE_STEPS
    order = np.lexsort((np.round(prod.real, 12), keys))
    return prod[order]


def multisets_match(a: np.ndarray, b: np.ndarray, eps: float) -> bool:
    """True iff the unimodular multisets a and b agree up to eps after matching.

    Both are sorted by phase measured from the middle of the widest gap in a,
    so no branch cut falls on a cluster; sorting cannot increase the sup-norm
    distance of an optimal matching.
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.shape != b.shape:
        return False
    if a.size == 0:
        return True
    pa = np.sort(np.angle(a) % TAU)
    gaps = np.diff(np.concatenate([pa, [pa[0] + TAU]]))
    k = int(np.argmax(gaps))
    cut = pa[k] + gaps[k] / 2.0
    sa = a[np.argsort((np.angle(a) - cut) % TAU, kind="stable")]
    sb = b[np.argsort((np.angle(b) - cut) % TAU, kind="stable")]
    return bool(np.all(np.abs(sa - sb) < eps))
