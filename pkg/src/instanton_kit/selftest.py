"""Quick end-to-end checks of the pinned reference values, one line per check."""

from __future__ import annotations

import random
from fractions import Fraction

from . import adhm, fano, monads, quiver, stability
from . import wall_engine as walls
from .cech import cech_hypercohomology


def _spinor_wall():
    ws = walls.walls(fano.Q3, 4, Fraction(1, 2))
    cands = {c.vector for c in ws.candidates}
    want = {(Fraction(-6), Fraction(1), Fraction(1, 4), Fraction(1, 24)),
            (Fraction(2), Fraction(1), Fraction(1, 4), Fraction(1, 24))}
    return [w.k for w in ws.walls] == [Fraction(1, 24)] and cands == want


def _ideal_sheaf():
    return all(not walls.walls(fano.variety(f"V{d}"), d, 1).candidates for d in (2, 3, 4, 5))


def _lattice():
    steps = walls.quadric_conditions(walls.lattice_constraints(fano.Q3))
    return walls.describe_conditions(steps) == [
        "ch1(A)H^2 in 2Z", "ch2(A)H in Z", "r in 2Z", "4d in Z", "24e in Z"]


def _euler():
    rng = random.Random(0)
    for d in range(1, 6):
        X = fano.variety(f"V{d}")
        for _ in range(100):
            R = Fraction(rng.randint(0, 40))
            D = Fraction(rng.randint(1, 80), 2)
            ch = fano.untwist(X, fano.instanton_vector(X, R, D))
            if fano.euler_characteristic(X, ch) != D - R / d:
                return False
    return True


def _line_bundle_vector():
    for X in (fano.P3, fano.Q3, fano.variety("V5"), fano.variety("X22")):
        h, i = X.degree, Fraction(X.index, 2)
        v = stability.v_at_beta0(X, fano.line_bundle(X.q))
        if tuple(v) != (h, i * h, i ** 2 * h / 2, i ** 3 * h / 6):
            return False
    return True


def _duality():
    X = fano.Q3
    ch = fano.ChernCharacter(2, -1, 0, Fraction(1, 12))
    if fano.D_functor_character(X, fano.D_functor_character(X, ch)) != ch:
        return False
    ws = walls.walls(X, 4, Fraction(1, 2), check_involution=False)
    return walls.closed_under_involution(ws.candidates, 4, Fraction(1, 2), X)


def _adhm_pipeline():
    C = adhm.build_monad(adhm.charge_one_data())
    table = monads.cohomology_table(C, range(-3, 1))
    rep = monads.instanton_predicate(table, monads.complex_character(C))
    return (monads.verify_complex(C) and tuple(monads.complex_character(C)) == (2, 0, -1, 0)
            and table.get(1, -1) == 1 and rep.passed and rep.charge == 1
            and adhm.framing_check(C).framed)


def _non_sheaf():
    C = monads.hyperplane_monad()
    return (monads.verify_complex(C) and tuple(monads.complex_character(C)) == (0, 0, -3, 0)
            and monads.hypercohomology(C, 0) == {1: 6})


def _q3_monad():
    return walls.quadric_monad_counts(4, Fraction(1, 2)) == (0, 1, 0)


def _quiver():
    if tuple(quiver.theta_vector(-1, 1, 2, 1)) != tuple(quiver.THETA0):
        return False
    for seed in range(20):
        C = adhm.build_monad(adhm.random_adhm(3, 1 + seed % 2, 2, seed))
        if quiver.from_monad(C, check=False).relations_hold() != monads.verify_complex(C):
            return False
    return True


def _cross_validation():
    for C in (monads.null_correlation_monad(), monads.hyperplane_monad()):
        for t in range(-3, 2):
            if monads.hypercohomology(C, t) != cech_hypercohomology(C, t):
                return False
    return True


def _slope_chains():
    pts = {fano.P3: (Fraction(1, 2), Fraction(1, 3)), fano.Q3: (Fraction(1, 8), Fraction(1, 2))}
    return all(stability.slope_chain_check(X, a2, s) for X, (a2, s) in pts.items())


CHECKS = [
    ("spinor wall on Q3", _spinor_wall),
    ("no walls for ideal sheaves of lines (index 2)", _ideal_sheaf),
    ("Q3 lattice conditions", _lattice),
    ("Euler identity chi = D - R/H^3", _euler),
    ("twisted character of O(q)", _line_bundle_vector),
    ("duality involutions", _duality),
    ("ADHM charge-one pipeline", _adhm_pipeline),
    ("non-sheaf monad", _non_sheaf),
    ("Q3 monad multiplicities", _q3_monad),
    ("quiver theta and relations", _quiver),
    ("spectral vs Cech hypercohomology", _cross_validation),
    ("slope chains", _slope_chains),
]


def run(out=print) -> bool:
    ok_all = True
    for name, fn in CHECKS:
        try:
            ok = bool(fn())
        except Exception as exc:  # report and keep going
            ok = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        ok_all &= ok
        out(f"{'PASS' if ok else 'FAIL'}  {name}")
    return ok_all
