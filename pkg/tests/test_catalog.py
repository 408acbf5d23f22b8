import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chm6.catalog import (
    HFamilyParams,
    KarlssonDomainError,
    KarlssonParams,
    h_family,
    karlsson,
    karlsson_completion,
    karlsson_core,
    karlsson_from_z3,
    m1,
    m2,
    tao,
)
from chm6.core import OMEGA, distinct_elements, gram_defect, is_chm
from chm6.errors import DomainError

from conftest import units

W, W2 = OMEGA, OMEGA.conjugate()
pi_angles = st.floats(min_value=0.0, max_value=math.pi, exclude_max=True, allow_nan=False)


def test_tao_entries():
    t = tao().values
    assert t[0, 0] == 1
    assert abs(t[1, 2] - W) < 1e-15
    assert np.allclose([s.value for s in distinct_elements(tao())], [1, W, W2])
    assert is_chm(tao())


def test_m2_entries_and_symmetry():
    v = m2().values
    assert v[0, 0] == 1j
    assert v[1, 4] == -1
    assert np.array_equal(v, v.T)
    assert is_chm(m2())


def test_m1_alphabet():
    v = m1().values.ravel()
    assert all(min(abs(z - r) for r in (1, -1, W, -W)) < 1e-15 for z in v)
    assert is_chm(m1())


def test_h_family_row_and_blocks():
    h = h_family(alpha=1, beta=1).values
    assert np.allclose(h[3], [1, W, W2, -1, -W, -W2])
    assert np.allclose(h[0, :3], h[1, :3])
    assert np.allclose(h[np.ix_([0, 1], [0, 3])], [[1, 1], [1, -1]])


def test_h_family_rejects_non_unimodular():
    with pytest.raises(DomainError):
        HFamilyParams(1.5, 1)


def test_h_family_exact_tags():
    h = h_family(alpha="1/4", beta="1/6")
    assert all(t is not None for row in h.turns for t in row)


@settings(max_examples=100)
@given(units, units)
def test_h_family_is_chm(a, b):
    assert gram_defect(h_family(alpha=a, beta=b)) < 1e-8


def test_karlsson_zero_point():
    core = karlsson_core(0.0, 0.0)
    assert abs(core.A11 - W) < 1e-15
    assert abs(core.A12 - W2) < 1e-15
    k = karlsson(KarlssonParams(0.0, 0.0, (1, 1, 1, 1))).values
    assert np.allclose(k[2:4, 2:4], [[W, W], [W2, -W2]])
    assert np.allclose(k[:2, :2], [[1, 1], [1, -1]])
    assert is_chm(karlsson(KarlssonParams(0.0, 0.0, (1, 1, 1, 1))))


@settings(max_examples=200)
@given(pi_angles, pi_angles)
def test_karlsson_core_norm(theta, phi):
    c = karlsson_core(theta, phi)
    assert abs(abs(c.A11) ** 2 + abs(c.A12) ** 2 - 2) < 1e-10
    assert np.allclose(c.A, [[c.A11, c.A12], [np.conj(c.A12), -np.conj(c.A11)]])


def test_karlsson_range_checks():
    with pytest.raises(DomainError):
        KarlssonParams(math.pi, 0.0, (1, 1, 1, 1))
    with pytest.raises(DomainError):
        KarlssonParams(0.0, -0.1, (1, 1, 1, 1))
    with pytest.raises(DomainError):
        KarlssonParams(0.0, 0.0, (1, 1, 1))


def test_karlsson_reports_offending_block():
    z = tuple(np.exp(1j * np.array([0.3, 1.1, 2.0, 2.9])))
    with pytest.raises(KarlssonDomainError) as info:
        karlsson(KarlssonParams(0.7, 0.4, z))
    err = info.value
    assert err.block in {(1, 1), (1, 2), (2, 1), (2, 2)}
    assert err.values.shape == (2, 2)
    assert "offending block" in str(err)


@settings(max_examples=200, deadline=None)
@given(pi_angles, pi_angles, units, st.tuples(*[st.sampled_from([-1, 1])] * 3))
def test_karlsson_completion_gives_chm(theta, phi, z3, signs):
    z = karlsson_completion(theta, phi, z3, signs)
    m = karlsson(KarlssonParams(theta, phi, z))
    assert gram_defect(m) < 1e-8
    assert np.allclose(m.values[:2, :2], [[1, 1], [1, -1]])


def test_karlsson_grid_with_many_draws():
    rng = np.random.default_rng(7)
    worst = 0.0
    for theta in np.arange(32) * math.pi / 32:
        for phi in np.arange(32) * math.pi / 32:
            for _ in range(4):
                z3 = np.exp(2j * np.pi * rng.uniform())
                signs = tuple(rng.choice([-1, 1], size=3))
                worst = max(worst, gram_defect(karlsson_from_z3(theta, phi, z3, signs)))
    assert worst < 1e-8


@pytest.mark.parametrize("theta", [1e-9, 1e-8, 1e-5, 0.0])
def test_karlsson_completion_near_singular_point(theta):
    for signs in ((1, 1, 1), (-1, -1, -1), (1, -1, 1)):
        m = karlsson_from_z3(theta, 0.0, 1, signs)
        assert gram_defect(m) < 1e-8
