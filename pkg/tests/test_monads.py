from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from corpus import euler_sequence, koszul_p1, p2_monad, regression_complexes
from instanton_kit import adhm, monads
from instanton_kit.cech import cech_hypercohomology, cech_line_bundle, truncation_bound
from instanton_kit.exact import HomogPoly, PolyMatrix
from instanton_kit.fano import ChernCharacter, variety
from instanton_kit.monads import (InsufficientWindow, LineBundleComplex, ShapeMismatch,
                                  UnsupportedComplex, bott_line, chi_line, cohomology_table,
                                  complex_character, hypercohomology, instanton_predicate)

CORPUS = regression_complexes()


def _bott_by_serre(n, k):
    # independent: h^0 counts monomials, h^n by Serre duality
    h = [0] * (n + 1)
    h[0] = comb(n + k, n) if k >= 0 else 0
    h[n] = comb(-k - 1, n) if -k - n - 1 >= 0 else 0
    return tuple(h)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bott_formula(n):
    for k in range(-8, 6):
        assert bott_line(n, k) == _bott_by_serre(n, k)
        h = bott_line(n, k)
        assert sum((-1) ** i * x for i, x in enumerate(h)) == chi_line(n, k)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cech_line_bundles_agree_with_bott(n):
    for k in range(-n - 3, 3):
        assert cech_line_bundle(n, k) == bott_line(n, k)


def test_named_complexes_verify():
    for name, C in CORPUS:
        assert monads.verify_complex(C), name
    z0, z1, x, y = (HomogPoly.var(4, i) for i in range(4))
    bad = monads.monad(3, 1, 4, 1, monads.null_correlation_monad().map(-1),
                       PolyMatrix([[x, y, z0, z1]]))
    assert not monads.verify_complex(bad)


def test_characters():
    assert tuple(complex_character(monads.null_correlation_monad())) == (2, 0, -1, 0)
    assert tuple(complex_character(monads.hyperplane_monad())) == (0, 0, -3, 0)
    assert tuple(complex_character(monads.trivial_complex(3, 2))) == (2, 0, 0, 0)


def test_null_correlation_table():
    table = cohomology_table(monads.null_correlation_monad(), range(-3, 2))
    assert table.get(1, -1) == 1
    assert table.get(0, -1) == 0 and table.get(0, 1) == 5
    assert table.get(1, -2) == 0 and table.get(2, -2) == 0 and table.get(3, -3) == 0
    rep = instanton_predicate(table, complex_character(monads.null_correlation_monad()))
    assert rep.passed and rep.charge == 1


def test_hyperplane_monad_hypercohomology():
    C = monads.hyperplane_monad()
    assert hypercohomology(C, 0) == {1: 6}
    assert hypercohomology(C, -1) == {1: 3}
    assert hypercohomology(C, 1) == {0: 1, 1: 10}


def test_jumping_monad_is_still_a_p3_instanton():
    C = adhm.jumping_monad()
    table = cohomology_table(C, range(-3, 1))
    assert instanton_predicate(table, complex_character(C)).passed


@pytest.mark.parametrize("name,C", CORPUS, ids=[n for n, _ in CORPUS])
def test_spectral_agrees_with_cech(name, C):
    for t in range(-3, 2):
        assert hypercohomology(C, t, "spectral") == cech_hypercohomology(C, t), (name, t)


def test_cech_truncation_is_stable():
    C = monads.null_correlation_monad()
    for t in (-3, -1, 0):
        N = truncation_bound(C, t)
        assert cech_hypercohomology(C, t, N) == cech_hypercohomology(C, t, N + 2)


def test_p1_complexes_use_cech():
    C = koszul_p1()
    assert monads.verify_complex(C)
    for t in range(-2, 3):
        assert hypercohomology(C, t) == {}  # Koszul complex of (x, y) is exact on P^1
    with pytest.raises(UnsupportedComplex):
        hypercohomology(C, 0, "spectral")


def test_euler_sequence_gives_tangent_bundle_twist():
    # T(-1) on P^2: h0(T(-1)) = 3, all else zero in this window
    C = euler_sequence(2)
    assert hypercohomology(C, 0) == {0: 3}
    assert hypercohomology(C, -1) == {}


def test_table_euler_column_matches_riemann_roch():
    for name, C in CORPUS:
        table = cohomology_table(C, range(-3, 2))
        ch = complex_character(C)
        for t in table.ts:
            assert table.euler(t) == monads.euler_pn(C.n, ch, t), name


def test_parallel_table_is_identical():
    C = p2_monad()
    a = cohomology_table(C, range(-3, 3), workers=1)
    b = cohomology_table(C, range(-3, 3), workers=3)
    assert a.to_json() == b.to_json()


def test_window_errors():
    table = cohomology_table(monads.null_correlation_monad(), range(-1, 1))
    with pytest.raises(InsufficientWindow):
        table.get(1, -3)
    with pytest.raises(InsufficientWindow):
        instanton_predicate(table, complex_character(monads.null_correlation_monad()))


def test_degree_check_rejects_wrong_twists():
    x = HomogPoly.var(4, 0)
    C = LineBundleComplex(3, {-1: [(-1, 1)], 0: [(0, 1)]}, {-1: PolyMatrix([[x * x]])})
    with pytest.raises(ValueError):
        C.check_degrees()


def test_unsupported_long_complex():
    C = LineBundleComplex(3, {-2: [(-2, 1)], -1: [(-1, 1)], 0: [(0, 1)], 1: [(1, 1)]})
    with pytest.raises(UnsupportedComplex):
        hypercohomology(C, 0, "spectral")


def test_line_bundle_table():
    table = monads.line_bundle_table(3, 0, range(-5, 2), mult=2)
    assert table.get(0, 1) == 8 and table.get(3, -5) == 8 and table.get(3, -4) == 2


def test_index_two_pattern_table():
    table = monads.index_two_instanton_table(variety("V3"), 3, range(-3, 3))
    assert table.get(1, -1) == 0 and table.get(1, 0) == 1 and table.get(2, -2) == 1
    assert table.get(0, 2) is None
    # E(1) is an ordinary h-instanton for h = H: feed the shifted table
    shifted = monads.CohomologyTable(3, [t - 1 for t in table.ts],
                                     {i: {t - 1: v for t, v in row.items()} for i, row in table.h.items()})
    rep = instanton_predicate(shifted, ChernCharacter(2, 1, 0, 0), "h")
    assert rep.passed and rep.delta == 0 and rep.charge == 1


def test_h_flavors_on_null_correlation():
    C = monads.null_correlation_monad()
    table = cohomology_table(C, range(-4, 2))
    ch = complex_character(C)
    assert instanton_predicate(table, ch, "h-ordinary").passed
    assert not instanton_predicate(table, ch, "h-nonordinary").passed
    rep = instanton_predicate(table, ch, "h")
    assert rep.deltas_passing == [0] and rep.charge == 1


def test_predicate_fails_for_trivial_twisted_bundle():
    C = monads.trivial_complex(3, 2, 1)
    table = cohomology_table(C, range(-3, 1))
    rep = instanton_predicate(table, complex_character(C))
    assert not rep.passed and "c1=0" in rep.failing


def test_perverse_shape():
    assert monads.perverse_shape_check(monads.null_correlation_monad()).r == 2
    with pytest.raises(ShapeMismatch):
        monads.perverse_shape_check(euler_sequence(3))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(-3, 3), st.integers(1, 3), st.integers(-4, 2))
def test_single_line_bundle_complex(n, k, r, t):
    C = monads.trivial_complex(n, r, k)
    h = hypercohomology(C, t)
    want = {i: r * x for i, x in enumerate(bott_line(n, k + t)) if x}
    assert h == want


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 40), st.integers(-3, 1))
def test_random_adhm_monads_match_riemann_roch(seed, t):
    data = adhm.random_adhm(3, 1 + seed % 2, 1 + seed % 3, seed)
    C = adhm.build_monad(data)
    h = hypercohomology(C, t)
    chi = sum((-1) ** m * d for m, d in h.items())
    assert chi == monads.euler_pn(3, complex_character(C), t)
