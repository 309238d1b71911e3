"""Representations of the three-vertex quiver with n+1 arrows per gap.

A linear monad ``O(-1)^a -> O^b -> O(1)^c`` on P^n is the same thing as
matrices ``A_i`` (a -> b) and ``B_i`` (b -> c), one per coordinate, with
``alpha = sum A_i x_i`` and ``beta = sum B_i x_i``.  ``beta alpha = 0`` is
equivalent to the relations ``B_j A_i + B_i A_j = 0``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exact import HomogPoly, PolyMatrix, fmt, frac, mat_mul, rref
from .monads import LineBundleComplex, ShapeMismatch, monad


class RelationFailure(ValueError):
    pass


Matrix = list[list[Fraction]]


def _zeros(r, c) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


@dataclass
class QuiverRep:
    n: int
    dims: tuple[int, int, int]
    A: list[Matrix]  # A[i] is dims[1] x dims[0]
    B: list[Matrix]  # B[i] is dims[2] x dims[1]

    def relations_hold(self) -> bool:
        for i in range(self.n + 1):
            for j in range(i, self.n + 1):
                S = mat_mul(self.B[j], self.A[i]) if self.dims[0] and self.dims[2] else []
                T = mat_mul(self.B[i], self.A[j]) if self.dims[0] and self.dims[2] else []
                for r1, r2 in zip(S, T):
                    if any(a + b for a, b in zip(r1, r2)):
                        return False
        return True

    def to_monad(self) -> LineBundleComplex:
        nv = self.n + 1
        a, b, c = self.dims

        def assemble(mats, rows, cols):
            ent = [[HomogPoly.linear([mats[k][i][j] for k in range(nv)]) for j in range(cols)]
                   for i in range(rows)]
            return PolyMatrix(ent, n_vars=nv, shape=(rows, cols))

        return monad(self.n, a, b, c, assemble(self.A, b, a), assemble(self.B, c, b))

    def to_json(self) -> dict:
        return {"n": self.n, "dims": list(self.dims),
                "A": [[[fmt(x) for x in row] for row in M] for M in self.A],
                "B": [[[fmt(x) for x in row] for row in M] for M in self.B]}

    @classmethod
    def from_json(cls, data: dict) -> "QuiverRep":
        n = int(data["n"])
        dims = tuple(int(x) for x in data["dims"])
        A = [[[frac(x) for x in row] for row in M] for M in data["A"]]
        B = [[[frac(x) for x in row] for row in M] for M in data["B"]]
        if len(A) != n + 1 or len(B) != n + 1:
            raise ValueError(f"need {n + 1} matrices per gap")
        for M in A:
            if len(M) != dims[1] or any(len(r) != dims[0] for r in M):
                raise ValueError("A matrices must be dims[1] x dims[0]")
        for M in B:
            if len(M) != dims[2] or any(len(r) != dims[1] for r in M):
                raise ValueError("B matrices must be dims[2] x dims[1]")
        return cls(n, dims, A, B)


def zero_rep(n: int, dims: Sequence[int]) -> QuiverRep:
    a, b, c = dims
    return QuiverRep(n, (a, b, c), [_zeros(b, a) for _ in range(n + 1)], [_zeros(c, b) for _ in range(n + 1)])


def from_monad(C: LineBundleComplex, check: bool = True) -> QuiverRep:
    """Coefficient extraction from a linear monad in degrees -1, 0, 1."""
    expected = {-1: -1, 0: 0, 1: 1}
    for p in C.degrees():
        if p not in expected or any(k != expected[p] for k, _ in C.terms[p]):
            raise ShapeMismatch("need twists -1, 0, 1 in degrees -1, 0, 1")
    nv = C.n + 1
    a, b, c = C.rank(-1), C.rank(0), C.rank(1)
    alpha, beta = C.map(-1), C.map(0)

    def coeffs(M):
        out = []
        for k in range(nv):
            e = tuple(int(i == k) for i in range(nv))
            out.append([[M[i, j].coefficient(e) for j in range(M.cols)] for i in range(M.rows)])
        return out

    rep = QuiverRep(C.n, (a, b, c), coeffs(alpha), coeffs(beta))
    if check and not rep.relations_hold():
        raise RelationFailure("B_j A_i + B_i A_j != 0: the maps do not form a complex")
    return rep


# ---------------------------------------------------------------------------
# King stability


@dataclass(frozen=True)
class ThetaVector:
    values: tuple[Fraction, Fraction, Fraction]

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def to_json(self) -> list:
        return [fmt(x) for x in self.values]

    def __str__(self):
        return "(" + ", ".join(fmt(x) for x in self.values) + ")"


THETA0 = ThetaVector((Fraction(-1), Fraction(0), Fraction(1)))


def theta_vector(alpha, gamma, r: int, c: int) -> ThetaVector:
    """``(alpha, -(alpha + gamma) c / (r + 2c), gamma)``; pairs to zero with (c, r+2c, c)."""
    alpha, gamma = frac(alpha), frac(gamma)
    if r + 2 * c <= 0:
        raise ValueError("need r + 2c > 0")
    return ThetaVector((alpha, -(alpha + gamma) * c / (r + 2 * c), gamma))


def theta_pairing(theta, dims: Sequence[int]) -> Fraction:
    return sum((frac(t) * d for t, d in zip(theta, dims)), Fraction(0))


def _span(vecs: list[list[Fraction]]) -> list[list[Fraction]]:
    vecs = [v for v in vecs if any(v)]
    if not vecs:
        return []
    R, piv = rref(vecs)
    return [R[i] for i in range(len(piv))]


def _apply(M: Matrix, v: list[Fraction]) -> list[Fraction]:
    return [sum((M[i][k] * v[k] for k in range(len(v))), Fraction(0)) for i in range(len(M))]


def generated_subrep(rep: QuiverRep, seeds: Sequence[Sequence[list[Fraction]]]) -> tuple[list, list, list]:
    """Smallest subrepresentation containing the given vectors at each vertex."""
    S0 = _span([list(v) for v in seeds[0]])
    S1 = _span([list(v) for v in seeds[1]] + [_apply(A, v) for A in rep.A for v in S0])
    S2 = _span([list(v) for v in seeds[2]] + [_apply(B, v) for B in rep.B for v in S1])
    return S0, S1, S2


@dataclass
class SearchReport:
    witness: tuple[int, int, int] | None
    pairing: Fraction | None
    convention: str
    tried: int
    subspaces: tuple | None = None
    note: str = "no witness found; this does not prove stability"

    def to_json(self) -> dict:
        out = {"convention": self.convention, "tried": self.tried}
        if self.witness is None:
            out.update({"witness": None, "note": self.note})
        else:
            out.update({"witness": list(self.witness), "theta": fmt(self.pairing)})
        return out


def _violates(value: Fraction, convention: str) -> bool:
    # "ge": semistable subobjects pair to >= 0 (King), so a negative value is a witness
    if convention == "ge":
        return value < 0
    if convention == "le":
        return value > 0
    raise ValueError("convention must be 'le' or 'ge'")


def _coordinate_seeds(dim: int):
    for size in range(1, dim + 1):
        for idx in combinations(range(dim), size):
            yield [[Fraction(int(i == j)) for i in range(dim)] for j in idx]


def subrep_search(rep: QuiverRep, theta, budget: int = 200, seed: int = 0,
                  convention: str = "ge") -> SearchReport:
    """Look for a subrepresentation violating the chosen sign convention.

    Seeds are coordinate subspaces (exhaustively, up to the budget) and then
    seeded random vectors, placed at each of the three vertices and closed
    under the arrows.  Only a found witness is a certificate.
    """
    theta = [frac(t) for t in theta]
    _violates(Fraction(0), convention)
    if not any(theta):
        return SearchReport(None, None, convention, 0, note="theta = 0: no witness possible")
    dims = rep.dims
    rng = random.Random(seed)
    tried = 0
    seen = set()

    def test(seeds):
        nonlocal tried
        tried += 1
        subs = generated_subrep(rep, seeds)
        key = tuple(len(s) for s in subs)
        sig = (key, tuple(tuple(map(tuple, s)) for s in subs))
        if sig in seen:
            return None
        seen.add(sig)
        if key == tuple(dims) or key == (0, 0, 0):
            return None
        value = theta_pairing(theta, key)
        if _violates(value, convention):
            return SearchReport(key, value, convention, tried, subs)
        return None

    empty = [[], [], []]
    for vertex in range(3):
        for vecs in _coordinate_seeds(dims[vertex]):
            if tried >= budget:
                break
            seeds = list(empty)
            seeds[vertex] = vecs
            found = test(seeds)
            if found:
                return found
    while tried < budget and any(dims):
        vertex = rng.choice([v for v in range(3) if dims[v]])
        k = rng.randint(1, dims[vertex])
        vecs = [[Fraction(rng.randint(-3, 3)) for _ in range(dims[vertex])] for _ in range(k)]
        seeds = list(empty)
        seeds[vertex] = vecs
        found = test(seeds)
        if found:
            return found
    return SearchReport(None, None, convention, tried)
