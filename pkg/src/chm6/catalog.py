"""Named matrices and parametric families of order six."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import DEFAULT_TOL, CMatrix, ToleranceConfig, UnitScalar
from .errors import DomainError

_W, _W2 = "1/3", "2/3"

# Tao's matrix over {1, w, w^2}. The printed corner entries of the first row
# are forced to 1 by orthogonality of the first two rows.
_TAO = [
    [0, 0, 0, 0, 0, 0],
    [0, 0, _W, _W, _W2, _W2],
    [0, _W, 0, _W2, _W2, _W],
    [0, _W, _W2, 0, _W, _W2],
    [0, _W2, _W2, _W, 0, _W],
    [0, _W2, _W, _W2, _W, 0],
]

_M1 = [
    [_W, _W, 0, 0, 0, 0],
    [_W, "5/6", "1/2", 0, "1/2", 0],
    [0, 0, _W, _W, 0, 0],
    [0, "1/2", "5/6", _W, "1/2", 0],
    [0, 0, 0, 0, _W, _W],
    ["1/2", 0, 0, "1/2", _W, "5/6"],
]

_M2 = [
    ["1/4", 0, 0, 0, 0, 0],
    [0, "1/4", 0, 0, "1/2", "1/2"],
    [0, 0, "1/4", "1/2", 0, "1/2"],
    [0, 0, "1/2", "1/4", "1/2", 0],
    [0, "1/2", 0, "1/2", "1/4", 0],
    [0, "1/2", "1/2", 0, 0, "1/4"],
]


def tao(corner=0) -> CMatrix:
    """Tao's matrix. ``corner`` replaces entries (0, 4) and (0, 5); only 1 gives a CHM."""
    c = UnitScalar.coerce(corner if not isinstance(corner, int) else str(corner))
    rows = [[UnitScalar.from_turns(t) for t in row] for row in _TAO]
    rows[0][4] = rows[0][5] = c
    return CMatrix.from_entries(rows)


def m1() -> CMatrix:
    return CMatrix.from_turns(_M1)


def m2() -> CMatrix:
    return CMatrix.from_turns(_M2)


def fourier3() -> CMatrix:
    return CMatrix.from_turns([[0, 0, 0], [0, _W, _W2], [0, _W2, _W]])


@dataclass(frozen=True)
class HFamilyParams:
    alpha: UnitScalar
    beta: UnitScalar

    def __post_init__(self):
        object.__setattr__(self, "alpha", UnitScalar.coerce(self.alpha))
        object.__setattr__(self, "beta", UnitScalar.coerce(self.beta))


def h_family(p: HFamilyParams | None = None, alpha=None, beta=None) -> CMatrix:
    """Two-parameter family containing a rank-one 2x3 block in rows 0-1, cols 0-2."""
    if p is None:
        p = HFamilyParams(alpha if alpha is not None else "0", beta if beta is not None else "0")
    one = UnitScalar.from_turns(0)
    w = UnitScalar.from_turns(_W)
    w2 = UnitScalar.from_turns(_W2)
    a, b = p.alpha, p.beta
    rows = [
        [one, one, one, one, one, one],
        [one, one, one, -one, -one, -one],
        [one, w, w2, a, a * w, a * w2],
        [one, w, w2, -a, -(a * w), -(a * w2)],
        [one, w2, w, b, b * w2, b * w],
        [one, w2, w, -b, -(b * w2), -(b * w)],
    ]
    return CMatrix.from_entries(rows)


@dataclass(frozen=True)
class KarlssonParams:
    theta: float
    phi: float
    z: tuple

    def __post_init__(self):
        for name in ("theta", "phi"):
            v = float(getattr(self, name))
            if not 0.0 <= v < math.pi:
                raise DomainError(f"{name} = {v} outside [0, pi)")
            object.__setattr__(self, name, v)
        z = tuple(UnitScalar.coerce(v) for v in self.z)
        if len(z) != 4:
            raise DomainError("Karlsson parameters need exactly four z values")
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class KarlssonCore:
    A11: complex
    A12: complex
    A: np.ndarray
    B: np.ndarray


def karlsson_core(theta: float, phi: float) -> KarlssonCore:
    s3 = math.sqrt(3.0) / 2.0
    a11 = -0.5 + 1j * s3 * (math.cos(theta) + np.exp(-1j * phi) * math.sin(theta))
    a12 = -0.5 + 1j * s3 * (-math.cos(theta) + np.exp(1j * phi) * math.sin(theta))
    A = np.array([[a11, a12], [np.conj(a12), -np.conj(a11)]])
    B = np.array([[-1 - a11, -1 - a12], [-1 - np.conj(a12), 1 + np.conj(a11)]])
    return KarlssonCore(complex(a11), complex(a12), A, B)


class KarlssonDomainError(DomainError):
    """Assembled Karlsson matrix has non-unimodular entries."""

    def __init__(self, message, block=None, values=None):
        super().__init__(message)
        self.block = block
        self.values = values


_F2 = np.array([[1, 1], [1, -1]], dtype=complex)


def _zcol(z):
    return np.array([[1, 1], [z, -z]], dtype=complex)


def _zrow(z):
    return np.array([[1, z], [1, -z]], dtype=complex)


def karlsson_values(p: KarlssonParams) -> np.ndarray:
    core = karlsson_core(p.theta, p.phi)
    z1, z2, z3, z4 = (s.value for s in p.z)
    Z1, Z2, Z3, Z4 = _zcol(z1), _zcol(z2), _zrow(z3), _zrow(z4)
    A, B = core.A, core.B
    return np.block(
        [
            [_F2, Z1, Z2],
            [Z3, Z3 @ A @ Z1 / 2, Z3 @ B @ Z2 / 2],
            [Z4, Z4 @ B @ Z1 / 2, Z4 @ A @ Z2 / 2],
        ]
    )


_BLOCK_NAMES = {
    (1, 1): "Z3 A Z1 / 2",
    (1, 2): "Z3 B Z2 / 2",
    (2, 1): "Z4 B Z1 / 2",
    (2, 2): "Z4 A Z2 / 2",
}


def karlsson(p: KarlssonParams, tol: ToleranceConfig = DEFAULT_TOL) -> CMatrix:
    """The H2-reducible block matrix, with unimodularity checked not assumed.

    Unimodularity only holds when z1, z2, z4 are tied to z3 as computed by
    :func:`karlsson_completion`; other z raise :class:`KarlssonDomainError`.
    """
    v = karlsson_values(p)
    dev = np.abs(np.abs(v) - 1.0)
    if dev.max() > tol.eps_unit:
        i, j = map(int, np.unravel_index(np.argmax(dev), dev.shape))
        key = (i // 2, j // 2)
        blk = v[2 * key[0] : 2 * key[0] + 2, 2 * key[1] : 2 * key[1] + 2]
        raise KarlssonDomainError(
            f"entry ({i}, {j}) has modulus {abs(v[i, j]):.6g}; offending block "
            f"{_BLOCK_NAMES.get(key, key)} = {np.round(blk, 6).tolist()}",
            block=key,
            values=blk,
        )
    return CMatrix(v / np.abs(v))


def _column_direction(X: np.ndarray, z_row: complex) -> complex:
    # Block Z_row X Z_col / 2 is unimodular iff Re(conj(z_col) * w) = 0.
    return z_row * np.conj(X[0, 1]) ** 2 - np.conj(z_row) * X[0, 0] ** 2


def _row_direction(X: np.ndarray, z_col: complex) -> complex:
    # Same condition rewritten as Re(g * z_row) = 0.
    return np.conj(z_col) * np.conj(X[0, 1]) ** 2 - z_col * np.conj(X[0, 0] ** 2)


def _refine(A, B, z3, z1, z2, z4, steps: int = 8):
    """Gauss-Newton on the angles of z1, z2, z4 against the four block conditions.

    Near singular points of the family the greedy solution loses digits;
    a few least-squares steps restore the conditions to rounding level.
    """
    t = np.angle([z1, z2, z4])
    # (row phase index or None for z3, column phase index, core block)
    rows = ((None, 0, A), (None, 1, B), (2, 0, B), (2, 1, A))
    for _ in range(steps):
        z = np.exp(1j * t)
        res = np.zeros(4)
        jac = np.zeros((4, 3))
        for k, (ri, ci, X) in enumerate(rows):
            zr = z3 if ri is None else z[ri]
            zc = z[ci]
            w = _column_direction(X, zr)
            res[k] = (np.conj(zc) * w).real
            jac[k, ci] = (np.conj(zc) * w).imag
            if ri is not None:
                dw = 1j * zr * np.conj(X[0, 1]) ** 2 + 1j * np.conj(zr) * X[0, 0] ** 2
                jac[k, ri] = (np.conj(zc) * dw).real
        if np.max(np.abs(res)) < 1e-15:
            break
        t = t - np.linalg.lstsq(jac, res, rcond=None)[0]
    z = np.exp(1j * t)
    return complex(z[0]), complex(z[1]), complex(z[2])


def karlsson_completion(
    theta: float,
    phi: float,
    z3,
    signs: Sequence[int] = (1, 1, 1),
    degenerate_eps: float = 1e-12,
) -> tuple:
    """Complete a free z3 to a valid (z1, z2, z3, z4).

    Each off-diagonal 2x2 block is unimodular iff the column phase is
    orthogonal (as a plane vector) to a direction fixed by the row phase and
    the core matrix, so z1, z2 and z4 are determined up to the given signs.
    Unknowns are solved greedily from whichever constraint has the longest
    direction, which keeps near-degenerate points well conditioned; where
    every direction vanishes the phase is free and 1 is used.
    """
    core = karlsson_core(theta, phi)
    A, B = core.A, core.B
    z = {3: UnitScalar.coerce(z3).value}
    sign = {1: signs[0], 2: signs[1], 4: signs[2]}
    # (row index, column index, core block) for the four off-diagonal blocks
    constraints = ((3, 1, A), (3, 2, B), (4, 1, B), (4, 2, A))
    while len(z) < 4:
        best = None
        for r, c, X in constraints:
            if (r in z) == (c in z):
                continue
            if r in z:
                w = _column_direction(X, z[r])
                cand = (abs(w), c, 1j * w / abs(w) if abs(w) else None)
            else:
                g = _row_direction(X, z[c])
                cand = (abs(g), r, 1j * np.conj(g) / abs(g) if abs(g) else None)
            if best is None or cand[0] > best[0]:
                best = cand
        if best is None:
            unknown = min({1, 2, 4} - set(z))
            z[unknown] = 1.0 + 0j
            continue
        size, idx, val = best
        z[idx] = sign[idx] * val if size >= degenerate_eps else 1.0 + 0j
    z1, z2, z4 = _refine(A, B, z[3], z[1], z[2], z[4])
    return tuple(UnitScalar.from_complex(v) for v in (z1, z2, z[3], z4))


def karlsson_from_z3(theta: float, phi: float, z3, signs=(1, 1, 1), tol=DEFAULT_TOL) -> CMatrix:
    return karlsson(KarlssonParams(theta, phi, karlsson_completion(theta, phi, z3, signs)), tol)


CATALOG = {"tao": tao, "m1": m1, "m2": m2}


def h_family_values(alpha: complex, beta: complex) -> np.ndarray:
    """Float-only fast path of :func:`h_family` used inside searches."""
    w = complex(-0.5, math.sqrt(3.0) / 2.0)
    w2 = w.conjugate()
    a, b = complex(alpha), complex(beta)
    return np.array(
        [
            [1, 1, 1, 1, 1, 1],
            [1, 1, 1, -1, -1, -1],
            [1, w, w2, a, a * w, a * w2],
            [1, w, w2, -a, -a * w, -a * w2],
            [1, w2, w, b, b * w2, b * w],
            [1, w2, w, -b, -b * w2, -b * w],
        ],
        dtype=complex,
    )
