from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from instanton_kit import adhm, monads, quiver
from instanton_kit.quiver import THETA0, QuiverRep, RelationFailure


def test_theta_vector_reference_value():
    assert tuple(quiver.theta_vector(-1, 1, 2, 1)) == tuple(THETA0)
    assert str(quiver.theta_vector(-1, 1, 5, 3)) == "(-1, 0, 1)"


@settings(max_examples=100)
@given(st.fractions(-5, 5), st.fractions(-5, 5), st.integers(0, 6), st.integers(1, 6))
def test_theta_is_orthogonal_to_dimension_vector(a, g, r, c):
    th = quiver.theta_vector(a, g, r, c)
    assert quiver.theta_pairing(th, (c, r + 2 * c, c)) == 0
    assert th[0] == a and th[2] == g


def test_theta_rejects_degenerate_shape():
    with pytest.raises(ValueError):
        quiver.theta_vector(1, 1, 0, 0)


@pytest.mark.parametrize("seed", range(100))
def test_relations_match_verify_complex(seed):
    c, r = 1 + seed % 2, 1 + seed % 3
    data = adhm.random_adhm(3, c, r, seed)
    C = adhm.build_monad(data)
    if seed % 2:
        # perturb the middle map so roughly half the cases fail
        pert = quiver.from_monad(C, check=False)
        pert.B[seed % 4][0][0] += 1
        C = pert.to_monad()
    rep = quiver.from_monad(C, check=False)
    assert rep.relations_hold() == monads.verify_complex(C)


def test_monad_roundtrip():
    C = monads.null_correlation_monad()
    rep = quiver.from_monad(C)
    assert rep.dims == (1, 4, 1)
    back = rep.to_monad()
    assert back.maps[-1].to_json() == C.maps[-1].to_json()
    assert back.maps[0].to_json() == C.maps[0].to_json()
    assert QuiverRep.from_json(rep.to_json()).to_json() == rep.to_json()


def test_non_complex_raises():
    rep = quiver.from_monad(monads.null_correlation_monad())
    rep.B[0][0][0] += 1
    with pytest.raises(RelationFailure):
        quiver.from_monad(rep.to_monad())


def test_wrong_twists_rejected():
    with pytest.raises(monads.ShapeMismatch):
        quiver.from_monad(monads.trivial_complex(3, 2, 1))


def test_search_conventions_on_charge_one():
    rep = quiver.from_monad(adhm.build_monad(adhm.charge_one_data()))
    ge = quiver.subrep_search(rep, THETA0, convention="ge")
    assert ge.witness is None and "does not prove" in ge.note
    le = quiver.subrep_search(rep, THETA0, convention="le")
    assert le.witness == (0, 1, 1) and le.pairing == 1


def test_witness_is_a_genuine_subrepresentation():
    rep = quiver.zero_rep(3, (1, 3, 1))
    found = quiver.subrep_search(rep, THETA0, convention="le")
    assert found.witness == (0, 0, 1)
    S0, S1, S2 = found.subspaces
    for A in rep.A:
        for v in S0:
            img = quiver._apply(A, v)
            assert len(quiver._span(S1 + [img])) == len(S1)


def test_search_is_deterministic():
    rep = quiver.from_monad(adhm.build_monad(adhm.random_adhm(3, 2, 2, 4), check=False), check=False)
    a = quiver.subrep_search(rep, (Fraction(-1), Fraction(1, 3), Fraction(1)), budget=60, seed=9)
    b = quiver.subrep_search(rep, (Fraction(-1), Fraction(1, 3), Fraction(1)), budget=60, seed=9)
    assert a.to_json() == b.to_json()


def test_zero_theta_and_bad_convention():
    rep = quiver.zero_rep(3, (1, 3, 1))
    assert quiver.subrep_search(rep, (0, 0, 0)).witness is None
    with pytest.raises(ValueError):
        quiver.subrep_search(rep, THETA0, convention="gt")
