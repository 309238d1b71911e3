from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from instanton_kit import fano
from instanton_kit.fano import (ChernCharacter, IntegratedVector, P3, Q3, D_functor_character,
                                acyclic_extension_character, euler_characteristic, instanton_vector,
                                line_bundle, twist_character, untwist, variety)

rats = st.fractions(min_value=-20, max_value=20, max_denominator=12)
ALL_PRESETS = list(fano.PRESETS.values())


def test_presets():
    assert (P3.degree, P3.index, P3.q, P3.e, P3.beta0) == (1, 4, 2, 0, 0)
    assert (Q3.degree, Q3.index, Q3.q, Q3.e, Q3.beta0) == (2, 3, 1, 1, Fraction(-1, 2))
    assert variety("v4").degree == 4
    assert variety(degree=22, index=1).name == "X22"
    with pytest.raises(fano.UnsupportedVariety):
        variety("V7")
    with pytest.raises(fano.UnsupportedVariety):
        fano.FanoThreefold(1, 5)


@pytest.mark.parametrize("X", ALL_PRESETS, ids=lambda X: X.label)
def test_structure_sheaf_has_euler_one(X):
    assert euler_characteristic(X, line_bundle(0)) == 1


@pytest.mark.parametrize("k", range(-6, 6))
def test_line_bundles_on_p3(k):
    # chi(O(k)) on P^3 is the binomial polynomial
    assert euler_characteristic(P3, line_bundle(k)) == Fraction((k + 1) * (k + 2) * (k + 3), 6)
    if k >= 0:
        assert euler_characteristic(P3, line_bundle(k)) == comb(k + 3, 3)


@pytest.mark.parametrize("k", range(-5, 5))
def test_line_bundles_on_quadric(k):
    # Hilbert polynomial of a quadric threefold
    assert euler_characteristic(Q3, line_bundle(k)) == Fraction((k + 1) * (k + 2) * (2 * k + 3), 6)


def test_spinor_bundle_on_quadric():
    # S(-1) is acyclic, and the spinor S = S(-1)(1) has four sections
    sm1 = ChernCharacter(2, -1, 0, Fraction(1, 12))
    assert euler_characteristic(Q3, sm1) == 0
    assert euler_characteristic(Q3, sm1, 1) == 4


def test_twist_at_beta0_of_spinor_shift():
    from instanton_kit.stability import spinor_minus_one, v_at_beta0
    v = v_at_beta0(Q3, fano.shift(spinor_minus_one(), 1))
    assert tuple(v) == (-4, 0, Fraction(1, 2), 0)


@pytest.mark.parametrize("n", range(-2, 4))
def test_twisted_line_bundle_on_quadric(n):
    v = twist_character(Q3, line_bundle(n), Q3.beta0)
    h = n + Fraction(1, 2)
    assert tuple(v) == (2, 2 * h, h * h, h ** 3 / 3)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(ALL_PRESETS), st.lists(rats, min_size=4, max_size=4), rats)
def test_twist_untwist_roundtrip(X, coeffs, beta):
    ch = ChernCharacter(coeffs)
    assert untwist(X, twist_character(X, ch, beta)) == ch


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(ALL_PRESETS), st.lists(rats, min_size=4, max_size=4))
def test_D_functor_is_an_involution(X, coeffs):
    ch = ChernCharacter(coeffs)
    assert D_functor_character(X, D_functor_character(X, ch)) == ch


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(ALL_PRESETS), st.lists(rats, min_size=4, max_size=4), rats)
def test_dual_vector_is_dual_twist(X, coeffs, beta):
    ch = ChernCharacter(coeffs)
    lhs = fano.dual_character(twist_character(X, ch, beta))
    rhs = twist_character(X, fano.derived_dual(ch), -beta)
    assert lhs == rhs


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(ALL_PRESETS), st.lists(rats, min_size=4, max_size=4), st.integers(-4, 4))
def test_serre_duality_on_euler_characteristic(X, coeffs, k):
    # chi(E) = -chi(E^vee (x) K_X) on a threefold
    ch = ChernCharacter(coeffs)
    dual = fano.tensor_line_bundle(fano.derived_dual(ch), -X.index)
    assert euler_characteristic(X, ch) == -euler_characteristic(X, dual)


def test_euler_of_instanton_shape_index_two():
    X = variety("V3")
    ch = untwist(X, instanton_vector(X, 3, 2))
    assert euler_characteristic(X, ch) == 2 - 1


def test_acyclic_extension():
    X = variety("V2")
    v = instanton_vector(X, 4, 3)
    w = acyclic_extension_character(X, v)
    assert tuple(w) == (-2 * 3, 0, 3, 0)
    with pytest.raises(ValueError):
        acyclic_extension_character(X, instanton_vector(X, 8, 3))
    with pytest.raises(fano.UnsupportedVariety):
        acyclic_extension_character(P3, instanton_vector(P3, 2, 1))


def test_shape_and_parsing():
    assert fano.is_instanton_shape(IntegratedVector([-4, 0, Fraction(1, 2), 0]))[0]
    assert not fano.is_instanton_shape(IntegratedVector([-4, 1, Fraction(1, 2), 0]))[0]
    assert fano.parse_vector("(2, -1, 0, 1/12)") == [2, -1, 0, Fraction(1, 12)]
