"""Fano threefolds of Picard rank one and exact Chern-character calculus.

A character is stored by its coefficients ``a_i`` with ``ch_i = a_i H^i``;
the integrated vector ``v_beta = (ch0^b H^3, ch1^b H^2, ch2^b H, ch3^b)`` is
computed on demand.  The Todd data needed for Riemann-Roch is derived from the
degree and index alone: ``c1 = i H`` and ``c2 . H = 24 / i`` (forced by
``chi(O_X) = 1``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .exact import fmt, frac

# index-1 Fano threefolds of Picard rank one: H^3 = 2g - 2
INDEX_ONE_DEGREES = (2, 4, 6, 8, 10, 12, 14, 16, 18, 22)


class UnsupportedVariety(ValueError):
    pass


@dataclass(frozen=True)
class FanoThreefold:
    degree: int
    index: int
    name: str = ""

    def __post_init__(self):
        if self.degree <= 0:
            raise UnsupportedVariety("degree must be positive")
        if self.index not in (1, 2, 3, 4):
            raise UnsupportedVariety(f"index {self.index} is not in 1..4")

    @property
    def q(self) -> int:
        return self.index // 2

    @property
    def e(self) -> int:
        return self.index % 2

    @property
    def beta0(self) -> Fraction:
        return Fraction(-self.e, 2)

    @property
    def known(self) -> bool:
        """False for (degree, index) pairs that are not a rank-one Fano threefold."""
        return (self.degree, self.index) in _KNOWN

    @property
    def label(self) -> str:
        return self.name or f"X(d={self.degree},i={self.index})"

    def to_json(self) -> dict:
        return {"degree": self.degree, "index": self.index}


P3 = FanoThreefold(1, 4, "P3")
Q3 = FanoThreefold(2, 3, "Q3")
PRESETS: dict[str, FanoThreefold] = {"P3": P3, "Q3": Q3}
for _d in range(1, 6):
    PRESETS[f"V{_d}"] = FanoThreefold(_d, 2, f"V{_d}")
for _d in INDEX_ONE_DEGREES:
    PRESETS[f"X{_d}"] = FanoThreefold(_d, 1, f"X{_d}")
_KNOWN = {(X.degree, X.index) for X in PRESETS.values()}


def variety(name: str | None = None, degree: int | None = None, index: int | None = None) -> FanoThreefold:
    """Look up a preset by name, or build one from (degree, index)."""
    if name is not None:
        key = name.strip().upper().replace("^", "").replace("³", "3")
        if key not in PRESETS:
            raise UnsupportedVariety(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
        return PRESETS[key]
    if degree is None or index is None:
        raise UnsupportedVariety("need a preset name or both degree and index")
    for X in PRESETS.values():
        if (X.degree, X.index) == (degree, index):
            return X
    return FanoThreefold(degree, index)


@dataclass(frozen=True)
class ChernCharacter:
    """Coefficients of ``ch`` in powers of the hyperplane class."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, *coeffs):
        if len(coeffs) == 1 and not isinstance(coeffs[0], (int, Fraction, str)):
            coeffs = tuple(coeffs[0])
        object.__setattr__(self, "coeffs", tuple(frac(c) for c in coeffs))

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    @property
    def a0(self):
        return self.coeffs[0]

    @property
    def a1(self):
        return self.coeffs[1]

    @property
    def a2(self):
        return self.coeffs[2]

    @property
    def a3(self):
        return self.coeffs[3]

    def __add__(self, other: "ChernCharacter") -> "ChernCharacter":
        return ChernCharacter(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: "ChernCharacter") -> "ChernCharacter":
        return ChernCharacter(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return ChernCharacter(-a for a in self.coeffs)

    def __mul__(self, k) -> "ChernCharacter":
        k = frac(k)
        return ChernCharacter(a * k for a in self.coeffs)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {f"a{i}": fmt(a) for i, a in enumerate(self.coeffs)}

    @classmethod
    def from_json(cls, data) -> "ChernCharacter":
        if isinstance(data, dict):
            keys = sorted(data, key=lambda k: int(k[1:]))
            return cls(data[k] for k in keys)
        return cls(data)

    def __str__(self):
        return "(" + ", ".join(fmt(a) for a in self.coeffs) + ")"


@dataclass(frozen=True)
class IntegratedVector:
    """``(ch0^b H^3, ch1^b H^2, ch2^b H, ch3^b)`` for a fixed twist ``beta``."""

    v: tuple[Fraction, Fraction, Fraction, Fraction]
    beta: Fraction = Fraction(0)

    def __init__(self, v: Sequence, beta=0):
        vals = tuple(frac(x) for x in v)
        if len(vals) != 4:
            raise ValueError("an integrated vector has four entries")
        object.__setattr__(self, "v", vals)
        object.__setattr__(self, "beta", frac(beta))

    def __getitem__(self, i):
        return self.v[i]

    def __iter__(self):
        return iter(self.v)

    def __add__(self, other: "IntegratedVector") -> "IntegratedVector":
        if self.beta != other.beta:
            raise ValueError("vectors twisted by different beta")
        return IntegratedVector([a + b for a, b in zip(self.v, other.v)], self.beta)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, k) -> "IntegratedVector":
        k = frac(k)
        return IntegratedVector([a * k for a in self.v], self.beta)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __str__(self):
        return "(" + ", ".join(fmt(a) for a in self.v) + ")"


def _exp_series(k, length: int) -> list[Fraction]:
    k = Fraction(k)
    return [k ** j / factorial(j) for j in range(length)]


def _times_exp(coeffs: Sequence[Fraction], k) -> list[Fraction]:
    """Coefficients of ``ch * e^{kH}`` truncated to the same length."""
    e = _exp_series(k, len(coeffs))
    return [sum(coeffs[j] * e[i - j] for j in range(i + 1)) for i in range(len(coeffs))]


def tensor_line_bundle(ch: ChernCharacter, k) -> ChernCharacter:
    """Character of ``E (x) O(k)``."""
    return ChernCharacter(_times_exp(ch.coeffs, k))


def line_bundle(k, length: int = 4) -> ChernCharacter:
    return ChernCharacter(_exp_series(k, length))


def shift(ch: ChernCharacter, m: int) -> ChernCharacter:
    return ch * (-1) ** (m % 2)


def _require4(ch: ChernCharacter):
    if len(ch) != 4:
        raise ValueError("threefold characters have four coefficients")


def twist_character(X: FanoThreefold, ch: ChernCharacter, beta=0) -> IntegratedVector:
    _require4(ch)
    beta = frac(beta)
    b = _times_exp(ch.coeffs, -beta)
    return IntegratedVector([c * X.degree for c in b], beta)


def untwist(X: FanoThreefold, v: IntegratedVector) -> ChernCharacter:
    """Inverse of :func:`twist_character`."""
    a = [c / X.degree for c in v.v]
    return ChernCharacter(_times_exp(a, v.beta))


def retwist(X: FanoThreefold, v: IntegratedVector, beta) -> IntegratedVector:
    return twist_character(X, untwist(X, v), beta)


def dual_character(v: IntegratedVector) -> IntegratedVector:
    """Sign flip on odd entries; the result describes the derived dual at ``-beta``."""
    return IntegratedVector([v[0], -v[1], v[2], -v[3]], -v.beta)


def derived_dual(ch: ChernCharacter) -> ChernCharacter:
    return ChernCharacter(a if i % 2 == 0 else -a for i, a in enumerate(ch.coeffs))


def D_functor_character(X: FanoThreefold, ch: ChernCharacter) -> ChernCharacter:
    """Character of ``RHom(E, O(-e_X))[2]``; the even shift does not change it."""
    return tensor_line_bundle(derived_dual(ch), -X.e)


def euler_characteristic(X: FanoThreefold, ch: ChernCharacter, k: int = 0) -> Fraction:
    """Riemann-Roch for ``chi(E(k))``."""
    _require4(ch)
    b = tensor_line_bundle(ch, k)
    d, i = X.degree, X.index
    return (d * b[3] + Fraction(i, 2) * d * b[2]
            + b[1] * (i * i * d + Fraction(24, i)) / 12 + b[0])


def is_instanton_shape(v: IntegratedVector) -> tuple[bool, Fraction, Fraction]:
    """Whether ``v = (-R, 0, D, 0)`` with ``R >= 0`` and ``D > 0``; returns the flag, R and D."""
    R, D = -v[0], v[2]
    ok = v[1] == 0 and v[3] == 0 and R >= 0 and D > 0
    return ok, R, D


def instanton_vector(X: FanoThreefold, R, D) -> IntegratedVector:
    return IntegratedVector([-frac(R), 0, frac(D), 0], X.beta0)


def acyclic_extension_character(X: FanoThreefold, v: IntegratedVector) -> IntegratedVector:
    """Character of the cone of the evaluation map from ``O_X[1]`` (index two only)."""
    if X.index != 2:
        raise UnsupportedVariety("acyclic extensions are defined for index two")
    ok, R, D = is_instanton_shape(v)
    if v.beta != X.beta0:
        raise ValueError("vector must be twisted by beta0 = 0")
    if not ok:
        # rank-0 sheaves like O_line have R = 0; that is allowed by the shape test
        raise ValueError(f"{v} is not of the form (-R, 0, D, 0)")
    mult = D - R / X.degree
    if mult < 0:
        raise ValueError(f"negative multiplicity D - R/H^3 = {fmt(mult)}")
    shifted_o = twist_character(X, shift(line_bundle(0), 1), X.beta0)
    return v + shifted_o * mult


def parse_vector(text: str) -> list[Fraction]:
    """Parse ``"a,b,c,d"`` (also accepts surrounding brackets) into rationals."""
    parts = [p for p in re.split(r"[,\s]+", text.strip().strip("()[]")) if p]
    return [frac(p) for p in parts]
