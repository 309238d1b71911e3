"""Slopes and central charges on the (alpha, s)-slice, and the slice regions.

Only ``alpha**2`` is ever stored so every quantity stays rational.  A region
condition written as ``alpha < c`` is tested as ``alpha2 < c**2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .exact import fmt, frac
from .fano import (FanoThreefold, IntegratedVector, ChernCharacter, line_bundle, shift,
                   twist_character, UnsupportedVariety)


@total_ordering
class _PlusInfinity:
    """The ``+inf`` value a slope takes when its denominator vanishes."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("+inf")

    def __repr__(self):
        return "+inf"

    __str__ = __repr__


INFINITY = _PlusInfinity()
SlopeValue = Fraction | _PlusInfinity


def slope_str(x) -> str:
    return str(x) if x is INFINITY else fmt(x)


@dataclass(frozen=True)
class SliceParams:
    beta: Fraction
    alpha2: Fraction
    s: Fraction

    def __init__(self, beta, alpha2, s):
        object.__setattr__(self, "beta", frac(beta))
        object.__setattr__(self, "alpha2", frac(alpha2))
        object.__setattr__(self, "s", frac(s))
        if self.alpha2 <= 0 or self.s <= 0:
            raise ValueError("alpha^2 and s must be positive")

    @property
    def k(self) -> Fraction:
        """Wall level ``(s + 1/6) alpha^2``."""
        return (self.s + Fraction(1, 6)) * self.alpha2


def _check_beta(v: IntegratedVector, beta):
    if beta is not None and frac(beta) != v.beta:
        raise ValueError(f"vector is twisted by {fmt(v.beta)}, not {fmt(beta)}")


def mu_slope(X: FanoThreefold, v: IntegratedVector) -> SlopeValue:
    if v[0] == 0:
        return INFINITY
    return v[1] / v[0]


def nu_slope(X: FanoThreefold, v: IntegratedVector, alpha2) -> SlopeValue:
    alpha2 = frac(alpha2)
    if v[1] == 0:
        return INFINITY
    return (v[2] - alpha2 / 2 * v[0]) / v[1]


def lambda_slope(X: FanoThreefold, v: IntegratedVector, alpha2, s) -> SlopeValue:
    alpha2, s = frac(alpha2), frac(s)
    den = v[2] - alpha2 / 2 * v[0]
    if den == 0:
        return INFINITY
    return (v[3] - (s + Fraction(1, 6)) * alpha2 * v[1]) / den


def central_charge(X: FanoThreefold, v: IntegratedVector, alpha2, s) -> tuple[Fraction, Fraction]:
    alpha2, s = frac(alpha2), frac(s)
    re = -v[3] + (s + Fraction(1, 6)) * v[1]
    im = v[2] - alpha2 / 2 * v[0]
    return re, im


def u_bound(X: FanoThreefold) -> Fraction:
    """Level ``(1/6)(i_X/2)^2`` bounding the region U."""
    return Fraction(1, 6) * Fraction(X.index, 2) ** 2


def in_region_U(X: FanoThreefold, alpha2, s) -> bool:
    alpha2, s = frac(alpha2), frac(s)
    if alpha2 <= 0 or s <= 0:
        return False
    return (s + Fraction(1, 6)) * alpha2 < u_bound(X)


def _is(X: FanoThreefold, degree: int, index: int) -> bool:
    return (X.degree, X.index) == (degree, index)


def v_at_beta0(X: FanoThreefold, ch: ChernCharacter) -> IntegratedVector:
    return twist_character(X, ch, X.beta0)


def spinor_minus_one() -> ChernCharacter:
    """``ch(S(-1))`` on the quadric, from ``0 -> S(-1) -> O^4 -> S -> 0``."""
    return ChernCharacter(2, -1, 0, Fraction(1, 12))


def _lam(X, ch, alpha2, s):
    return lambda_slope(X, v_at_beta0(X, ch), alpha2, s)


def in_quiver_region(X: FanoThreefold, alpha2, s) -> bool:
    alpha2, s = frac(alpha2), frac(s)
    if alpha2 <= 0 or s <= 0:
        return False
    w = (6 * s + 1) * alpha2
    if _is(X, 1, 4):
        if alpha2 >= 1:
            return False
        return 1 < w < (4 - 3 * alpha2) / (2 - alpha2)
    if _is(X, 2, 3):
        if alpha2 >= Fraction(1, 4):
            return False
        if not Fraction(1, 4) < w < Fraction(9, 4):
            return False
        # R_0: lambda(O(-1)[2]) < lambda(O(1))
        return _lam(X, shift(line_bundle(-1), 2), alpha2, s) < _lam(X, line_bundle(1), alpha2, s)
    raise UnsupportedVariety("quiver regions are only known for P3 and Q3")


class OutsideRegion(ValueError):
    pass


def chain_slopes(X: FanoThreefold, alpha2, s) -> dict[str, SlopeValue]:
    """The Bridgeland slopes entering the displayed chain for P3 / Q3."""
    if _is(X, 1, 4):
        objs = {
            "O(-2)[2]": shift(line_bundle(-2), 2),
            "O(1)": line_bundle(1),
            "O[1]": shift(line_bundle(0), 1),
            "O(-1)[2]": shift(line_bundle(-1), 2),
        }
    elif _is(X, 2, 3):
        objs = {
            "O": line_bundle(0),
            "S(-1)[1]": shift(spinor_minus_one(), 1),
            "O(-1)[2]": shift(line_bundle(-1), 2),
            "O(1)": line_bundle(1),
        }
    else:
        raise UnsupportedVariety("slope chains are only known for P3 and Q3")
    return {name: _lam(X, ch, alpha2, s) for name, ch in objs.items()}


def slope_chain_check(X: FanoThreefold, alpha2, s, strict_region: bool = True) -> bool:
    """Verify the ordering of Bridgeland slopes of the exceptional objects.

    P3: ``l(O(-2)[2]) < l(O(1)) <= 0 = l(O[1]) <= l(O(-1)[2])``.
    Q3: ``l(O) < l(S(-1)[1]) = 0 < l(O(-1)[2])`` and ``l(O(1)) > 0``.
    """
    if strict_region and not in_quiver_region(X, alpha2, s):
        raise OutsideRegion(f"(alpha^2, s) = ({fmt(frac(alpha2))}, {fmt(frac(s))}) is not in the quiver region")
    lam = chain_slopes(X, alpha2, s)
    if _is(X, 1, 4):
        return lam["O(-2)[2]"] < lam["O(1)"] <= 0 == lam["O[1]"] and lam["O[1]"] <= lam["O(-1)[2]"]
    return lam["O"] < lam["S(-1)[1]"] == 0 and 0 < lam["O(-1)[2]"] and lam["O(1)"] > 0
