"""Numerical destabilizing walls for characters ``v_beta0 = (-R, 0, D, 0)``.

A candidate subobject ``A`` with ``v_beta0(A) = (r, c, d, e)`` must satisfy

    0 < d < D
    0 < c (6e) <= min{(2d)^2, (2D - 2d)^2}
    -(c / 6e)(2D - 2d) - R <= r <= (c / 6e) 2d

and be the character of an object, i.e. lie in the Chern lattice of the
variety.  Since ``lambda(E)`` vanishes identically, the wall of ``A`` is the
level set ``(s + 1/6) alpha^2 = e / c``.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, ceil, gcd
from typing import Sequence

from .exact import fmt, frac, rat_gcd
from .fano import (FanoThreefold, ChernCharacter, IntegratedVector, euler_characteristic,
                   twist_character, untwist, instanton_vector)
from .stability import u_bound, lambda_slope

DEFAULT_CHI_TWISTS = (0, 1, 2, 3)


class InvalidShape(ValueError):
    pass


class OnWall(ValueError):
    def __init__(self, k, kind="wall"):
        self.k = Fraction(k)
        self.kind = kind
        super().__init__(f"(s+1/6)alpha^2 = {fmt(k)} lies on a {kind}")


# ---------------------------------------------------------------------------
# integer lattice helpers


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _impose_congruence(basis: list[list[int]], a: Sequence[int], m: int) -> list[list[int]]:
    """Sublattice of span(basis) on which ``a . x = 0 (mod m)``."""
    B = [list(b) for b in basis]
    t = [sum(ai * bi for ai, bi in zip(a, b)) % m for b in B]
    # unimodular row operations to collect gcd(t) in row 0
    for j in range(1, len(B)):
        if t[j] == 0:
            continue
        g, x, y = _xgcd(t[0], t[j])
        u, w = t[0] // g, t[j] // g
        b0 = [x * p + y * q for p, q in zip(B[0], B[j])]
        bj = [-w * p + u * q for p, q in zip(B[0], B[j])]
        B[0], B[j] = b0, bj
        t[0], t[j] = g, 0
    mult = m // gcd(t[0], m)
    B[0] = [mult * p for p in B[0]]
    return B


def hermite(basis: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form (upper triangular, positive pivots)."""
    A = [list(r) for r in basis if any(r)]
    n = len(A[0]) if A else 0
    out = []
    row = 0
    for c in range(n):
        rows = [i for i in range(row, len(A)) if A[i][c]]
        if not rows:
            continue
        while len([i for i in range(row, len(A)) if A[i][c]]) > 1:
            nz = [i for i in range(row, len(A)) if A[i][c]]
            p = min(nz, key=lambda i: abs(A[i][c]))
            for i in nz:
                if i != p:
                    q = A[i][c] // A[p][c]
                    A[i] = [x - q * y for x, y in zip(A[i], A[p])]
        p = next(i for i in range(row, len(A)) if A[i][c])
        A[row], A[p] = A[p], A[row]
        if A[row][c] < 0:
            A[row] = [-x for x in A[row]]
        for i in range(row):
            q = A[i][c] // A[row][c]
            A[i] = [x - q * y for x, y in zip(A[i], A[row])]
        row += 1
    out = [r for r in A if any(r)]
    return out


# ---------------------------------------------------------------------------
# Chern lattice


@dataclass(frozen=True)
class ChernLattice:
    """Allowed untwisted integrated vectors ``(ch0 H^3, ch1 H^2, ch2 H, ch3)``.

    ``scales`` is the coarse per-entry grid; a vector is in the lattice when
    every entry is an integer multiple of its scale and ``chi(E(k))`` is an
    integer for every ``k`` in ``chi_twists``.
    """

    X: FanoThreefold
    scales: tuple[Fraction, Fraction, Fraction, Fraction]
    chi_twists: tuple[int, ...]
    basis: tuple[tuple[Fraction, ...], ...]

    def contains(self, u: Sequence) -> bool:
        u = [Fraction(x) for x in u]
        for x, s in zip(u, self.scales):
            if (x / s).denominator != 1:
                return False
        ch = untwist(self.X, IntegratedVector(u, 0))
        return all(euler_characteristic(self.X, ch, k).denominator == 1 for k in self.chi_twists)

    def contains_twisted(self, v: IntegratedVector) -> bool:
        return self.contains(twist_character(self.X, untwist(self.X, v), 0).v)

    def twisted_basis(self, beta) -> list[IntegratedVector]:
        return [twist_character(self.X, untwist(self.X, IntegratedVector(b, 0)), beta) for b in self.basis]

    def steps(self, beta) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """Generators of the projections of the twisted lattice to each entry."""
        tb = self.twisted_basis(beta)
        return tuple(rat_gcd(v[i] for v in tb) for i in range(4))

    def untwisted_steps(self) -> tuple[Fraction, ...]:
        return tuple(rat_gcd(b[i] for b in self.basis) for i in range(4))


def lattice_constraints(X: FanoThreefold, scales: Sequence | None = None,
                        chi_twists: Sequence[int] = DEFAULT_CHI_TWISTS) -> ChernLattice:
    """Chern lattice of ``X``.

    Default coarse grid: ``ch0 in Z, ch1 H^2 in H^3 Z, 2 ch2 H in Z, 6 ch3 in Z``,
    refined by integrality of ``chi(E(k))``.
    """
    if scales is None:
        scales = (X.degree, X.degree, Fraction(1, 2), Fraction(1, 6))
    scales = tuple(frac(s) for s in scales)
    basis = [[int(i == j) for j in range(4)] for i in range(4)]
    for k in chi_twists:
        # chi(E(k)) as a rational linear form in the integer coordinates
        w = []
        for i in range(4):
            u = [Fraction(0)] * 4
            u[i] = scales[i]
            w.append(euler_characteristic(X, untwist(X, IntegratedVector(u, 0)), k))
        m = 1
        for x in w:
            m = m * x.denominator // gcd(m, x.denominator)
        a = [int(x * m) for x in w]
        basis = _impose_congruence(basis, a, m)
    basis = hermite(basis)
    ubasis = tuple(tuple(scales[i] * b[i] for i in range(4)) for b in basis)
    return ChernLattice(X, scales, tuple(chi_twists), ubasis)


def quadric_conditions(lat: ChernLattice) -> dict[str, Fraction]:
    """Integrality steps of the lattice seen through ``v_beta0 = (r, c, d, e)``.

    Each entry ``name -> g`` means the quantity ranges over exactly ``g Z``.
    """
    r, c, d, e = lat.steps(lat.X.beta0)
    u = lat.untwisted_steps()
    return {"ch1H2": u[1], "ch2H": u[2], "r": r, "c": c, "d": d, "e": e}


def describe_conditions(steps: dict[str, Fraction]) -> list[str]:
    out = []
    names = {"ch1H2": "ch1(A)H^2", "ch2H": "ch2(A)H"}
    for key in ("ch1H2", "ch2H", "r", "d", "e"):
        g = steps[key]
        name = names.get(key, key)
        if g.denominator == 1:
            out.append(f"{name} in {'' if g == 1 else g}Z")
        else:
            mult = g.denominator if g.numerator == 1 else f"{g.denominator}/{g.numerator}"
            out.append(f"{mult}{name} in Z")
    return out


# ---------------------------------------------------------------------------
# candidates and walls


@dataclass(frozen=True, order=True)
class CandidateCharacter:
    d: Fraction
    c: Fraction
    e: Fraction
    r: Fraction
    wall_k: Fraction = field(compare=False)
    inside_U: bool = field(compare=False)

    @property
    def vector(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.r, self.c, self.d, self.e)

    def to_json(self) -> dict:
        out = {}
        for name in ("r", "c", "d", "e"):
            x = getattr(self, name)
            out[name] = x.numerator if x.denominator == 1 else fmt(x)
        return out


def _candidate_for_d(args):
    X, lat_basis, scales, chi_twists, R, D, d, steps = args
    lat = ChernLattice(X, scales, chi_twists, lat_basis)
    g_r, g_c, g_d, g_e = steps
    kU = u_bound(X)
    found = []
    m = min((2 * d) ** 2, (2 * D - 2 * d) ** 2)
    # c * 6e <= m with e >= g_e
    c_max = m / (6 * g_e)
    j = 1
    while j * g_c <= c_max:
        c = j * g_c
        e_max = m / (6 * c)
        i = 1
        while i * g_e <= e_max:
            e = i * g_e
            ratio = c / (6 * e)
            lo = -ratio * (2 * D - 2 * d) - R
            hi = ratio * 2 * d
            for t in range(ceil(lo / g_r), floor(hi / g_r) + 1):
                r = t * g_r
                v = IntegratedVector([r, c, d, e], X.beta0)
                if lat.contains_twisted(v):
                    k = e / c
                    found.append(CandidateCharacter(d, c, e, r, k, k < kU))
            i += 1
        j += 1
    return found


def _worker_count(workers):
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("INSTANTON_KIT_THREADS")
    return max(1, int(env)) if env else 1


def enumerate_candidates(X: FanoThreefold, R, D, lattice: ChernLattice | None = None,
                         workers: int | None = None) -> list[CandidateCharacter]:
    """All lattice points satisfying the three wall inequalities, with ``c > 0``."""
    R, D = frac(R), frac(D)
    if R < 0 or D <= 0:
        raise InvalidShape("need R >= 0 and D > 0")
    lat = lattice or lattice_constraints(X)
    if not lat.contains_twisted(instanton_vector(X, R, D)):
        raise InvalidShape(f"(-{fmt(R)}, 0, {fmt(D)}, 0) is not in the Chern lattice of {X.label}")
    steps = lat.steps(X.beta0)
    g_d = steps[2]
    ds = []
    j = 1
    while j * g_d < D:
        ds.append(j * g_d)
        j += 1
    jobs = [(X, lat.basis, lat.scales, lat.chi_twists, R, D, d, steps) for d in ds]
    n = _worker_count(workers)
    if n > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n) as pool:
            parts = list(pool.map(_candidate_for_d, jobs))
    else:
        parts = [_candidate_for_d(job) for job in jobs]
    return sorted(c for part in parts for c in part)


def involution(cand: CandidateCharacter, R, D, X: FanoThreefold) -> CandidateCharacter:
    """Quotient side of a candidate, dualized: ``(r,c,d,e) -> (-R-r, c, D-d, e)``."""
    r, c, d, e = -frac(R) - cand.r, cand.c, frac(D) - cand.d, cand.e
    k = e / c
    return CandidateCharacter(d, c, e, r, k, k < u_bound(X))


def closed_under_involution(cands: Sequence[CandidateCharacter], R, D, X: FanoThreefold) -> bool:
    keys = {c.vector for c in cands}
    return all(involution(c, R, D, X).vector in keys for c in cands)


@dataclass(frozen=True)
class Wall:
    k: Fraction
    candidates: tuple[CandidateCharacter, ...]
    inside_U: bool

    def to_json(self) -> dict:
        return {"k": fmt(self.k), "inside_U": self.inside_U,
                "candidates": [c.to_json() for c in self.candidates]}


@dataclass(frozen=True)
class Chamber:
    index: int
    lower: Fraction
    upper: Fraction | None  # None: unbounded
    meets_U: bool

    def __str__(self):
        hi = "inf" if self.upper is None else fmt(self.upper)
        return f"({fmt(self.lower)}, {hi})"


@dataclass(frozen=True)
class WallSet:
    X: FanoThreefold
    R: Fraction
    D: Fraction
    walls: tuple[Wall, ...]
    k_U: Fraction

    @property
    def candidates(self) -> list[CandidateCharacter]:
        return [c for w in self.walls for c in w.candidates]

    def breakpoints(self) -> list[Fraction]:
        return sorted({w.k for w in self.walls} | {self.k_U})

    def chambers(self) -> list[Chamber]:
        pts = self.breakpoints()
        lows = [Fraction(0)] + pts
        highs = pts + [None]
        return [Chamber(i, lo, hi, lo < self.k_U) for i, (lo, hi) in enumerate(zip(lows, highs))]

    def to_json(self) -> dict:
        return {
            "variety": self.X.to_json(),
            "R": fmt(self.R),
            "D": fmt(self.D),
            "k_U": fmt(self.k_U),
            "walls": [w.to_json() for w in self.walls],
        }

    def to_csv(self) -> str:
        lines = ["k,inside_U,r,c,d,e"]
        for w in self.walls:
            for c in w.candidates:
                lines.append(",".join([fmt(w.k), str(w.inside_U).lower(), fmt(c.r), fmt(c.c), fmt(c.d), fmt(c.e)]))
        return "\n".join(lines) + "\n"


def walls(X: FanoThreefold, R, D, lattice: ChernLattice | None = None,
          workers: int | None = None, check_involution: bool = True) -> WallSet:
    R, D = frac(R), frac(D)
    cands = enumerate_candidates(X, R, D, lattice, workers)
    if check_involution and not closed_under_involution(cands, R, D, X):
        raise AssertionError("candidate set is not closed under the sub/quotient involution")
    kU = u_bound(X)
    groups: dict[Fraction, list] = {}
    for c in cands:
        groups.setdefault(c.wall_k, []).append(c)
    ws = tuple(Wall(k, tuple(sorted(groups[k], key=lambda c: (c.r, c.c, c.d, c.e))), k < kU)
               for k in sorted(groups))
    return WallSet(X, R, D, ws, kU)


def chamber_of(X: FanoThreefold, wallset: WallSet, alpha2, s) -> Chamber:
    alpha2, s = frac(alpha2), frac(s)
    if alpha2 <= 0 or s <= 0:
        raise ValueError("alpha^2 and s must be positive")
    k = (s + Fraction(1, 6)) * alpha2
    if any(w.k == k for w in wallset.walls):
        raise OnWall(k, "wall")
    if k == wallset.k_U:
        raise OnWall(k, "U boundary")
    for ch in wallset.chambers():
        if ch.lower < k and (ch.upper is None or k < ch.upper):
            return ch
    raise AssertionError("chambers do not cover the slice")


def instanton_wall_constant(X: FanoThreefold) -> Fraction:
    return u_bound(X)


def lambda_vanishes_on_wall(X: FanoThreefold, cand: CandidateCharacter, R, D, alpha2) -> bool:
    """Check ``lambda(A) = lambda(E) = 0`` at the point of the wall above ``alpha2``."""
    alpha2 = frac(alpha2)
    s = cand.wall_k / alpha2 - Fraction(1, 6)
    if s <= 0:
        return True
    vA = IntegratedVector(cand.vector, X.beta0)
    vE = instanton_vector(X, R, D)
    return lambda_slope(X, vA, alpha2, s) in (0,) and lambda_slope(X, vE, alpha2, s) == 0


# ---------------------------------------------------------------------------
# monad multiplicities on the quadric


def quadric_monad_counts(R, D) -> tuple[Fraction, Fraction, Fraction]:
    """Multiplicities ``(a, b, c)`` of ``O(-1)^a -> S(-1)^b -> O^c`` on Q3.

    Obtained by solving ``v(E) = a v(O(-1)) - b v(S(-1)) + c v(O)`` in
    the beta0-twisted integrated vectors; there is no ``O(1)`` term.
    """
    R, D = frac(R), frac(D)
    c = D - R / 8
    return c, c + R / 4, c


def solve_quadric_monad(R, D) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Independent check: solve the 4x4 system including an ``O(1)`` term ``n``."""
    from .exact import solve
    from .fano import line_bundle
    from .stability import spinor_minus_one, v_at_beta0
    from .fano import Q3

    cols = [v_at_beta0(Q3, line_bundle(-1)).v,
            (-v_at_beta0(Q3, spinor_minus_one())).v,
            v_at_beta0(Q3, line_bundle(0)).v,
            (-v_at_beta0(Q3, line_bundle(1))).v]
    M = [[cols[j][i] for j in range(4)] for i in range(4)]
    a, b, c, n = solve(M, list(instanton_vector(Q3, R, D).v))
    return n, a, b, c
