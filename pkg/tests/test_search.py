from itertools import product
from math import pi

import numpy as np
import pytest

from chm6.catalog import karlsson_from_z3, m1, m2, tao
from chm6.core import OMEGA, UnitScalar, is_chm
from chm6.equivalence import are_equivalent
from chm6.errors import CounterexampleError, DomainError
from chm6.search import (
    Alphabet,
    Kind,
    candidate_rows,
    classify,
    classify_h3,
    find_chm_cliques,
    karlsson_grid_scan,
    scan_three_element,
    scan_two_element,
)

from conftest import scramble

W = OMEGA


def test_alphabet_validation():
    with pytest.raises(DomainError):
        Alphabet((UnitScalar.from_turns("1/3"), UnitScalar.from_turns("2/3")))
    with pytest.raises(DomainError):
        Alphabet((1, 1, 1j))
    with pytest.raises(DomainError):
        Alphabet((1,))


def test_candidate_count_matches_independent_enumeration():
    alphabet = Alphabet((1, W, W.conjugate()))
    expected = sum(1 for g in product((1, W, W.conjugate()), repeat=5) if abs(1 + sum(g)) < 1e-9)
    assert expected == 30
    assert len(candidate_rows(alphabet)) == expected


def test_omega_alphabet_gives_tao():
    found = find_chm_cliques([1, W, W.conjugate()])
    assert found
    for m in found:
        assert is_chm(m)
        assert np.allclose(m.values[0], 1)
        assert are_equivalent(m, tao()) is not None


def test_omega_results_differ_by_permutation_only():
    found = find_chm_cliques([1, W, W.conjugate()])
    for i, a in enumerate(found):
        for b in found[i + 1 :]:
            w = are_equivalent(a, b)
            assert w is not None
            phases = [s.value for s in w.left.phases + w.right.phases]
            # permutation-equivalent up to one global phase
            assert np.allclose(phases[:6], phases[0]) and np.allclose(phases[6:], np.conj(phases[0]))


@pytest.mark.parametrize("s", [np.exp(1j * pi / 5), -1, 1j])
def test_two_element_alphabets_empty(s):
    assert find_chm_cliques([1, s]) == []
    assert find_chm_cliques([1, s], first_row="sorted") == []


def test_real_alphabet_has_no_orthogonal_pairs():
    # rows orthogonal to all ones carry three -1 among the last five entries;
    # two such rows differ in an even number of places, never in three
    rows = candidate_rows(Alphabet((1, -1)))
    assert len(rows) == 10
    vecs = np.array([[1 if x == 0 else -1 for x in r] for r in rows])
    assert int(np.sum(vecs @ vecs.T == 0)) == 0
    assert find_chm_cliques([1, -1]) == []


def test_scan_two_small():
    reps = scan_two_element(["1/2", "1/4", UnitScalar.from_complex(np.exp(0.3j))])
    assert [len(r.matrices_found) for r in reps] == [0, 0, 0]
    assert not any(r.counterexample for r in reps)
    with pytest.raises(DomainError):
        scan_two_element([1])


def test_scan_three_at_i():
    (rep,) = scan_three_element(["1/4"])
    assert rep.matrices_found
    assert not rep.counterexample
    for m, c, d in zip(rep.matrices_found, rep.classifications, rep.details):
        assert c.kind is Kind.EQUIV_M2
        assert d["parity_ok"]
        if d["h2_reducible"]:
            assert c.witness.verify(m, m2())


def test_scan_three_conjugate_and_generic():
    minus_i, generic, omega = scan_three_element(["3/4", UnitScalar.from_complex(np.exp(1j * pi / 7)), "1/3"])
    assert minus_i.matrices_found
    assert all(c.kind is Kind.EQUIV_M2 for c in minus_i.classifications)
    assert generic.matrices_found == []
    assert omega.matrices_found == []
    with pytest.raises(DomainError):
        scan_three_element(["1/2"])


def test_karlsson_scan_small():
    rep = karlsson_grid_scan([0.0, pi / 4], [0.0, pi / 3], 2, seed=5)
    assert rep.n_samples == 8
    assert not rep.counterexample
    again = karlsson_grid_scan([0.0, pi / 4], [0.0, pi / 3], 2, seed=5)
    assert rep.to_json() == again.to_json()


def test_karlsson_scan_single_point():
    rep = karlsson_grid_scan([0.0], [0.0], 3, seed=1)
    assert rep.n_samples == 3


def test_classify_h3(rng):
    assert classify_h3(scramble(tao(), rng)).kind is Kind.EQUIV_TAO
    c = classify_h3(scramble(m1(), rng))
    assert c.kind is Kind.H_FAMILY and c.params is not None
    assert classify_h3(m2()).kind is Kind.NO_H3
    assert classify_h3(karlsson_from_z3(0.4, 1.2, np.exp(0.7j))).kind is Kind.NO_H3


def test_classify_h3_counterexample_is_raised(monkeypatch):
    import chm6.search as search

    monkeypatch.setattr(search, "match_h_family", lambda m, tol: None)
    monkeypatch.setattr(search, "are_equivalent", lambda m, n, tol: None)
    with pytest.raises(CounterexampleError) as info:
        search.classify_h3(tao())
    assert info.value.matrix is not None


def test_classify_general():
    assert classify(m2()).kind is Kind.EQUIV_M2
    assert classify(tao()).kind is Kind.EQUIV_TAO
    assert classify(m1()).kind is Kind.H_FAMILY
    assert classify(karlsson_from_z3(0.4, 1.2, np.exp(0.7j))).kind is Kind.UNCLASSIFIED


def test_report_json_counterexample_flag():
    from chm6.search import Classification, SearchReport

    rep = SearchReport({"x": 1})
    assert rep.to_json()["counterexample"] is False
    rep.add(tao(), Classification(Kind.UNCLASSIFIED))
    assert rep.to_json()["counterexample"] is True
