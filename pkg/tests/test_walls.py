from fractions import Fraction
from math import ceil, floor

import pytest
from hypothesis import given, settings, strategies as st

from corpus import WALL_CASES
from instanton_kit import wall_engine as we
from instanton_kit.fano import IntegratedVector, P3, Q3, instanton_vector, variety
from instanton_kit.stability import lambda_slope

F = Fraction


def _scaled_hnf(vectors, scale=6):
    return we.hermite([[int(x * scale) for x in v] for v in vectors])


def test_p3_lattice_is_spanned_by_structure_sheaves():
    gens = [(1, 0, 0, 0), (0, 1, F(-1, 2), F(1, 6)), (0, 0, 1, -1), (0, 0, 0, 1)]
    lat = we.lattice_constraints(P3)
    assert _scaled_hnf(lat.basis) == _scaled_hnf(gens)


def test_q3_lattice_basis_and_members():
    lat = we.lattice_constraints(Q3)
    # O, O(1), the spinor S(-1), a line and a point all lie in it
    members = [(2, 0, 0, 0), (2, 2, 1, F(1, 3)), (4, -2, 0, F(1, 6)), (0, 0, 1, F(-1, 2)),
               (0, 0, 0, 1)]
    for u in members:
        assert lat.contains(u)
    assert not lat.contains((1, 0, 0, 0))
    assert not lat.contains((0, 0, F(1, 2), 0))


def test_q3_display_conditions():
    steps = we.quadric_conditions(we.lattice_constraints(Q3))
    assert steps == {"ch1H2": 2, "ch2H": 1, "r": 2, "c": 1, "d": F(1, 4), "e": F(1, 24)}
    assert we.describe_conditions(steps) == [
        "ch1(A)H^2 in 2Z", "ch2(A)H in Z", "r in 2Z", "4d in Z", "24e in Z"]


def test_lattice_parameters_are_configurable():
    coarse = we.lattice_constraints(Q3, chi_twists=())
    assert coarse.contains((0, 0, F(1, 2), 0))
    assert we.lattice_constraints(Q3, scales=(2, 2, 1, F(1, 6))).contains((0, 0, 1, F(-1, 2)))


def test_spinor_wall():
    ws = we.walls(Q3, 4, F(1, 2))
    assert [w.k for w in ws.walls] == [F(1, 24)]
    assert [c.vector for c in ws.candidates] == [(-6, 1, F(1, 4), F(1, 24)), (2, 1, F(1, 4), F(1, 24))]
    assert ws.k_U == F(3, 8) and ws.walls[0].inside_U


def test_p3_charge_one_wall():
    ws = we.walls(P3, 2, 1)
    assert [w.k for w in ws.walls] == [F(1, 6)]
    assert sorted(c.r for c in ws.candidates) == [-3, -2, -1, 0, 1]


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_index_two_ideal_sheaf_cases(d):
    ws = we.walls(variety(f"V{d}"), d, 1)
    if d == 1:
        assert [w.k for w in ws.walls] == [F(1, 6)]
    else:
        assert ws.candidates == []


def _brute_force(X, R, D):
    """Independent enumeration on a fixed fine grid, membership by Riemann-Roch integrality."""
    lat = we.lattice_constraints(X)
    R, D = F(R), F(D)
    sr, sc, sd, se = F(1, 2), F(1, 2), F(1, 24), F(1, 48)
    out = set()
    for jd in range(1, ceil(D / sd)):
        d = jd * sd
        m = min((2 * d) ** 2, (2 * D - 2 * d) ** 2)
        jc = 1
        while jc * sc * 6 * se <= m:
            c = jc * sc
            je = 1
            while c * 6 * je * se <= m:
                e = je * se
                lo = -(c / (6 * e)) * (2 * D - 2 * d) - R
                hi = (c / (6 * e)) * 2 * d
                for jr in range(ceil(lo / sr), floor(hi / sr) + 1):
                    v = IntegratedVector([jr * sr, c, d, e], X.beta0)
                    if lat.contains_twisted(v):
                        out.add(tuple(v))
                je += 1
            jc += 1
    return out


@pytest.mark.parametrize("X,R,D", [(Q3, 4, F(1, 2)), (P3, 2, 1), (P3, 1, 1), (variety("V2"), 2, 1),
                                   (variety("V1"), 1, 1), (variety("X4"), 0, 1)],
                         ids=lambda x: getattr(x, "label", str(x)))
def test_enumeration_matches_brute_force(X, R, D):
    got = {c.vector for c in we.enumerate_candidates(X, R, D)}
    assert got == _brute_force(X, R, D)


@pytest.mark.parametrize("X,R,D", WALL_CASES, ids=lambda x: getattr(x, "label", str(x)))
def test_regression_set_is_closed_under_involution(X, R, D):
    ws = we.walls(X, R, D, check_involution=False)
    assert we.closed_under_involution(ws.candidates, R, D, X)
    for c in ws.candidates:
        assert c.wall_k == c.e / c.c
        assert we.lambda_vanishes_on_wall(X, c, R, D, F(1, 100))


def test_candidates_satisfy_inequalities():
    for X, R, D in WALL_CASES:
        R, D = F(R), F(D)
        for c in we.enumerate_candidates(X, R, D):
            assert 0 < c.d < D
            assert 0 < c.c * 6 * c.e <= min((2 * c.d) ** 2, (2 * D - 2 * c.d) ** 2)
            ratio = c.c / (6 * c.e)
            assert -ratio * (2 * D - 2 * c.d) - R <= c.r <= ratio * 2 * c.d


def test_parallel_enumeration_gives_same_set():
    serial = we.enumerate_candidates(P3, 4, 2, workers=1)
    parallel = we.enumerate_candidates(P3, 4, 2, workers=2)
    assert serial == parallel


def test_threads_env_var(monkeypatch):
    monkeypatch.setenv("INSTANTON_KIT_THREADS", "2")
    assert we._worker_count(None) == 2
    assert we._worker_count(3) == 3


def test_invalid_shapes():
    with pytest.raises(we.InvalidShape):
        we.walls(P3, -1, 1)
    with pytest.raises(we.InvalidShape):
        we.walls(P3, 1, 0)
    with pytest.raises(we.InvalidShape):
        # ch2 H = 1/4 is not integral enough on P3
        we.walls(P3, 1, F(1, 4))


def test_chambers():
    ws = we.walls(Q3, 4, F(1, 2))
    assert [str(c) for c in ws.chambers()] == ["(0, 1/24)", "(1/24, 3/8)", "(3/8, inf)"]
    ch = we.chamber_of(Q3, ws, F(1, 4), F(1, 12))  # k = 1/16
    assert ch.index == 1 and ch.meets_U
    assert we.chamber_of(Q3, ws, F(1, 100), F(1, 12)).index == 0
    assert not we.chamber_of(Q3, ws, 1, 1).meets_U
    with pytest.raises(we.OnWall) as exc:
        we.chamber_of(Q3, ws, F(1, 8), F(1, 6))
    assert exc.value.kind == "wall"


def test_on_u_boundary():
    ws = we.walls(Q3, 4, F(1, 2))
    with pytest.raises(we.OnWall) as exc:
        we.chamber_of(Q3, ws, F(3, 8), F(5, 6))
    assert exc.value.kind == "U boundary"


def test_instanton_wall_constant():
    assert we.instanton_wall_constant(P3) == F(2, 3)


def test_quadric_monad_counts_reference():
    assert we.quadric_monad_counts(4, F(1, 2)) == (0, 1, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 30), st.integers(1, 40))
def test_quadric_monad_counts_solve_the_linear_system(R, D2):
    R, D = F(R), F(D2, 2)
    n, a, b, c = we.solve_quadric_monad(R, D)
    assert n == 0
    assert (a, b, c) == we.quadric_monad_counts(R, D)


def test_wallset_serialisation():
    ws = we.walls(Q3, 4, F(1, 2))
    js = ws.to_json()
    assert js["k_U"] == "3/8"
    assert js["walls"][0]["candidates"][0] == {"r": -6, "c": 1, "d": "1/4", "e": "1/24"}
    assert ws.to_csv().splitlines()[1] == "1/24,true,-6,1,1/4,1/24"
