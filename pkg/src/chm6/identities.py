"""Vanishing sums of few unimodular numbers.

Three terms: a zero sum is a rotated (1, w, w^2) or (1, w^2, w). Four terms:
the entries cancel in pairs. Six cube roots with a scale factor: the factor
is a sixth root of unity. Each function checks its preconditions instead of
assuming them, so it doubles as a verifier of the identity it implements.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import DEFAULT_TOL, OMEGA, ToleranceConfig, UnitScalar
from .errors import DomainError, InconsistencyError, PreconditionError

CUBE_ROOTS = (1 + 0j, OMEGA, OMEGA.conjugate())
SIXTH_ROOTS = CUBE_ROOTS + tuple(-z for z in CUBE_ROOTS)
_SIXTH_TURNS = (Fraction(0), Fraction(1, 3), Fraction(2, 3), Fraction(1, 2), Fraction(5, 6), Fraction(1, 6))


class ChordTag(enum.Enum):
    NON_ZERO_SUM = "NonZeroSum"
    OMEGA_ORDER = "OmegaOrder"
    OMEGA_BAR_ORDER = "OmegaBarOrder"


@dataclass(frozen=True)
class ChordClass:
    tag: ChordTag
    scale: UnitScalar | None = None


def _unit(value, tol: ToleranceConfig) -> complex:
    if isinstance(value, UnitScalar):
        return value.value
    z = complex(value)
    if abs(abs(z) - 1.0) > tol.eps_unit:
        raise DomainError(f"{z} is not unimodular")
    return z


def chord3_class(a, b, c, tol: ToleranceConfig = DEFAULT_TOL) -> ChordClass:
    """Classify a triple of unimodular numbers by whether it sums to zero."""
    za, zb, zc = (_unit(v, tol) for v in (a, b, c))
    if abs(za + zb + zc) >= tol.eps_orth:
        return ChordClass(ChordTag.NON_ZERO_SUM)
    scale = a if isinstance(a, UnitScalar) else UnitScalar.from_complex(za)
    rb, rc = zb / za, zc / za
    w, wb = CUBE_ROOTS[1], CUBE_ROOTS[2]
    if abs(rb - w) < tol.eps_eq and abs(rc - wb) < tol.eps_eq:
        return ChordClass(ChordTag.OMEGA_ORDER, scale)
    if abs(rb - wb) < tol.eps_eq and abs(rc - w) < tol.eps_eq:
        return ChordClass(ChordTag.OMEGA_BAR_ORDER, scale)
    raise InconsistencyError(
        f"zero-sum triple {za, zb, zc} is not a rotated cube-root triple; "
        "eps_orth is probably too loose relative to eps_eq"
    )


def four_term_partner(a, b, c, d, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Index (1, 2 or 3) of an entry equal to -a in a zero-sum quadruple."""
    zs = [_unit(v, tol) for v in (a, b, c, d)]
    if abs(sum(zs)) >= tol.eps_orth:
        raise PreconditionError(f"quadruple sums to {sum(zs)}, not zero")
    for idx in (1, 2, 3):
        if abs(zs[idx] + zs[0]) < tol.eps_eq:
            return idx
    raise InconsistencyError("zero-sum quadruple without a cancelling partner")


def _is_cube_root(z: complex, tol: ToleranceConfig) -> bool:
    return any(abs(z - r) < tol.eps_eq for r in CUBE_ROOTS)


def admissible_scale_factor(g: Sequence, tol: ToleranceConfig = DEFAULT_TOL) -> UnitScalar:
    """Solve g1 + g2 + g3 + k (g4 + g5 + g6) = 0 for k over cube-root entries.

    Requires a unimodular k, which rules out g4 = g5 = g6 (then |k| = 1/sqrt 3).
    The returned k is checked to be a sixth root of unity.
    """
    if len(g) != 6:
        raise PreconditionError("expected six entries")
    zs = [_unit(v, tol) for v in g]
    if not all(_is_cube_root(z, tol) for z in zs):
        raise PreconditionError("entries must be cube roots of unity")
    head, tail = zs[:3], zs[3:]
    if abs(head[0] - head[1]) < tol.eps_eq and abs(head[0] - head[2]) < tol.eps_eq:
        raise PreconditionError("g1, g2, g3 are all equal")
    num, den = sum(head), sum(tail)
    if abs(num) < tol.eps_orth:
        raise PreconditionError("g1 + g2 + g3 vanishes")
    if abs(den) < tol.eps_orth:
        raise PreconditionError("g4 + g5 + g6 vanishes")
    k = -num / den
    if abs(abs(k) - 1.0) > tol.eps_unit:
        raise PreconditionError(f"k = {k} is not unimodular (g4, g5, g6 all equal)")
    dist, idx = min((abs(k - r), i) for i, r in enumerate(SIXTH_ROOTS))
    if dist >= tol.eps_eq:
        raise InconsistencyError(f"k = {k} is not a sixth root of unity")
    return UnitScalar.from_turns(_SIXTH_TURNS[idx])
