"""ADHM data ``(A, B, I, J)`` of linear forms and the monads they define.

Coordinates on P^n are ``[z0 : ... : z_{n-2} : x : y]``; the data lives in the
first ``n - 1`` variables and the distinguished line is ``{z = 0}``.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exact import (HomogPoly, PolyMatrix, determinant, fmt, frac, interpolate, mat_mul, rank,
                    rank_kernel, upoly_gcd, upoly_trim)
from .monads import LineBundleComplex, monad, perverse_shape_check, ShapeMismatch


class InvalidADHM(ValueError):
    pass


class NotFiberwiseExact(ValueError):
    pass


class SamplingWarning(UserWarning):
    pass


def _coeff_matrices(M: PolyMatrix, n_lin: int) -> list[list[list[Fraction]]]:
    """Split a matrix of linear forms into one constant matrix per variable."""
    out = []
    for k in range(n_lin):
        e = tuple(int(i == k) for i in range(n_lin))
        out.append([[M[i, j].coefficient(e) for j in range(M.cols)] for i in range(M.rows)])
    return out


def _from_coeffs(mats: Sequence[Sequence[Sequence]], rows: int, cols: int, n_lin: int) -> PolyMatrix:
    ent = []
    for i in range(rows):
        row = []
        for j in range(cols):
            row.append(HomogPoly.linear([Fraction(mats[k][i][j]) for k in range(n_lin)]))
        ent.append(row)
    return PolyMatrix(ent, n_vars=n_lin, shape=(rows, cols))


@dataclass
class ADHMData:
    n: int
    c: int
    r: int
    A: PolyMatrix
    B: PolyMatrix
    I: PolyMatrix
    J: PolyMatrix

    def __post_init__(self):
        if self.n < 2:
            raise InvalidADHM("ADHM data needs n >= 2")
        nl = self.n_lin
        shapes = {"A": (self.c, self.c), "B": (self.c, self.c), "I": (self.c, self.r), "J": (self.r, self.c)}
        for name, shape in shapes.items():
            M = getattr(self, name)
            if (M.rows, M.cols) != shape:
                raise InvalidADHM(f"{name} has shape {M.rows}x{M.cols}, expected {shape[0]}x{shape[1]}")
            if M.n_vars != nl:
                raise InvalidADHM(f"{name} must use {nl} variables z0..z{nl - 1}")
            for i, j in M.nonzero_positions():
                if M[i, j].degree != 1:
                    raise InvalidADHM(f"{name}[{i},{j}] is not a linear form")

    @property
    def n_lin(self) -> int:
        return self.n - 1

    @classmethod
    def from_coefficients(cls, n: int, c: int, r: int, A, B, I, J) -> "ADHMData":
        """Build from nested lists ``M[i][j] = [coeff of z0, coeff of z1, ...]``."""
        nl = n - 1

        def conv(M, rows, cols):
            mats = [[[Fraction(0)] * cols for _ in range(rows)] for _ in range(nl)]
            for i in range(rows):
                for j in range(cols):
                    vec = M[i][j]
                    if len(vec) != nl:
                        raise InvalidADHM(f"linear form {vec} needs {nl} coefficients")
                    for k in range(nl):
                        mats[k][i][j] = frac(vec[k])
            return _from_coeffs(mats, rows, cols, nl)

        return cls(n, c, r, conv(A, c, c), conv(B, c, c), conv(I, c, r), conv(J, r, c))

    def coefficient_form(self) -> dict:
        def conv(M):
            return [[[fmt(M[i, j].coefficient(tuple(int(a == k) for a in range(self.n_lin))))
                      for k in range(self.n_lin)] for j in range(M.cols)] for i in range(M.rows)]
        return {"n": self.n, "c": self.c, "r": self.r,
                "A": conv(self.A), "B": conv(self.B), "I": conv(self.I), "J": conv(self.J)}

    def act(self, g: Sequence[Sequence]) -> "ADHMData":
        """``g . (A, B, I, J) = (g A g^-1, g B g^-1, g I, J g^-1)`` for constant invertible g."""
        from .exact import solve
        c = self.c
        g = [[Fraction(x) for x in row] for row in g]
        ginv_cols = []
        for j in range(c):
            col = solve(g, [Fraction(int(i == j)) for i in range(c)])
            if col is None:
                raise ValueError("g is not invertible")
            ginv_cols.append(col)
        ginv = [[ginv_cols[j][i] for j in range(c)] for i in range(c)]
        nl = self.n_lin

        def conj(M, left, right):
            mats = _coeff_matrices(M, nl)
            new = []
            for Mk in mats:
                X = Mk
                if left is not None:
                    X = mat_mul(left, X)
                if right is not None:
                    X = mat_mul(X, right)
                new.append(X)
            rows = len(left) if left is not None else M.rows
            cols = len(right[0]) if right is not None else M.cols
            return _from_coeffs(new, rows, cols, nl)

        return ADHMData(self.n, c, self.r, conj(self.A, g, ginv), conj(self.B, g, ginv),
                        conj(self.I, g, None), conj(self.J, None, ginv))


def check_adhm(data: ADHMData) -> bool:
    """Exact test of ``[A, B] + I J = 0`` as quadratic forms."""
    if data.c == 0:
        return True
    AB = data.A @ data.B
    BA = data.B @ data.A
    IJ = data.I @ data.J
    for i in range(data.c):
        for j in range(data.c):
            if (AB[i, j] - BA[i, j] + IJ[i, j]).terms:
                return False
    return True


def git_closure(data: ADHMData) -> list[list[Fraction]]:
    """Basis of the smallest subspace containing the images of I and stable under A, B."""
    c, nl = data.c, data.n_lin
    if c == 0:
        return []
    As = _coeff_matrices(data.A, nl) + _coeff_matrices(data.B, nl)
    vecs = []
    for Ik in _coeff_matrices(data.I, nl):
        for j in range(data.r):
            vecs.append([Ik[i][j] for i in range(c)])

    def basis_of(vs):
        if not vs:
            return []
        from .exact import rref
        R, piv = rref(vs)
        return [R[i] for i in range(len(piv))]

    S = basis_of(vecs)
    while True:
        new = list(S)
        for M in As:
            for v in S:
                new.append([sum(M[i][k] * v[k] for k in range(c)) for i in range(c)])
        T = basis_of(new)
        if len(T) == len(S):
            return S
        S = T


def git_stable(data: ADHMData) -> bool:
    return len(git_closure(data)) == data.c


def build_monad(data: ADHMData, check: bool = True) -> LineBundleComplex:
    """``V(-1) -> V + V + W -> V(1)`` with alpha = (A + x, B + y, J)^t, beta = (-B - y, A + x, I)."""
    if check and not check_adhm(data):
        raise InvalidADHM("[A,B] + IJ != 0")
    n, c, r = data.n, data.c, data.r
    nv = n + 1
    pos = list(range(n - 1))
    if c == 0:
        return LineBundleComplex(n, {0: [(0, r)]})
    x = HomogPoly.var(nv, n - 1)
    y = HomogPoly.var(nv, n)
    zero = HomogPoly.zero(nv)

    def emb(M):
        return [[M[i, j].embed(nv, pos) if M[i, j].terms else zero for j in range(M.cols)] for i in range(M.rows)]

    A, B, I, J = emb(data.A), emb(data.B), emb(data.I), emb(data.J)

    def plus_diag(M, v, sign=1):
        out = []
        for i in range(c):
            row = []
            for j in range(c):
                e = M[i][j] * sign if M[i][j].terms else zero
                if i == j:
                    e = e + v * sign
                row.append(e)
            out.append(row)
        return out

    alpha = plus_diag(A, x) + plus_diag(B, y) + J
    top = plus_diag(B, y, -1)
    mid = plus_diag(A, x)
    beta = [top[i] + mid[i] + I[i] for i in range(c)]
    return monad(n, c, 2 * c + r, c, PolyMatrix(alpha, n_vars=nv, shape=(2 * c + r, c)),
                 PolyMatrix(beta, n_vars=nv, shape=(c, 2 * c + r)))


# ---------------------------------------------------------------------------
# pointwise checks


@dataclass
class FiberReport:
    passed: bool
    checked: int
    failures: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"pass": self.passed, "checked": self.checked, "failures": self.failures}


def _random_point(rng: random.Random, nv: int) -> list[Fraction]:
    while True:
        p = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(nv)]
        if any(p):
            return p


def fiberwise_check(C: LineBundleComplex, points: Sequence[Sequence] = (), samples: int = 0,
                    seed: int = 0, data: ADHMData | None = None) -> FiberReport:
    """Check that alpha is injective and beta surjective at each given point."""
    nv = C.n + 1
    pts = [[Fraction(x) for x in p] for p in points]
    rng = random.Random(seed)
    pts += [_random_point(rng, nv) for _ in range(samples)]
    alpha, beta = C.map(-1), C.map(0)
    failures = []
    for p in pts:
        if len(p) != nv or not any(p):
            raise ValueError(f"{p} is not a point of P^{C.n}")
        ra = rank(alpha.evaluate(p)) if alpha.rows and alpha.cols else 0
        rb = rank(beta.evaluate(p)) if beta.rows and beta.cols else 0
        bad = []
        if ra < alpha.cols:
            bad.append("alpha not injective")
        if rb < beta.rows:
            bad.append("beta not surjective")
        if bad:
            failures.append({"point": [fmt(x) for x in p], "alpha_rank": ra, "beta_rank": rb,
                             "reason": bad})
    report = FiberReport(not failures, len(pts), failures)
    if data is not None and report.passed and pts and not git_stable(data):
        warnings.warn("sampled fibers are exact but the data fails the GIT closure test",
                      SamplingWarning, stacklevel=2)
    return report


# ---------------------------------------------------------------------------
# framing on the distinguished line


def restrict_to_line(C: LineBundleComplex) -> LineBundleComplex:
    """Set ``z0 = ... = z_{n-2} = 0``; the result lives on P^1 with coordinates (x, y)."""
    n = C.n
    keep = [n - 1, n]
    maps = {p: M.map(lambda f: f.drop_vars(keep)) for p, M in C.maps.items()}
    return LineBundleComplex(1, dict(C.terms), maps)


def _binary_minors(M: PolyMatrix, size: int) -> list[tuple[list[Fraction], Fraction]]:
    """Maximal minors of a matrix of binary forms as (dehomogenized poly, value at [1:0])."""
    degs = [p.degree for p in (M[i, j] for i in range(M.rows) for j in range(M.cols)) if p.terms]
    bound = size * (max(degs) if degs else 0)
    xs = [Fraction(k) for k in range(bound + 1)]
    out = []
    rows_all = range(M.rows)
    cols_all = range(M.cols)
    if M.rows >= M.cols:
        choices = [(rs, tuple(cols_all)) for rs in combinations(rows_all, size)]
    else:
        choices = [(tuple(rows_all), cs) for cs in combinations(cols_all, size)]
    for rs, cs in choices:
        def minor_at(pt):
            return determinant([[M[i, j].evaluate(pt) for j in cs] for i in rs])
        ys = [minor_at([x, Fraction(1)]) for x in xs]
        out.append((upoly_trim(interpolate(xs, ys)), minor_at([Fraction(1), Fraction(0)])))
    return out


def _full_rank_everywhere(M: PolyMatrix) -> bool:
    size = min(M.rows, M.cols)
    if size == 0:
        return True
    minors = _binary_minors(M, size)
    at_infinity_bad = all(inf == 0 for _, inf in minors)
    g: list[Fraction] = []
    for poly, _ in minors:
        g = upoly_gcd(g, poly) if g else upoly_trim(poly)
    affine_bad = not g or len(upoly_trim(g)) > 1
    return not (at_infinity_bad or affine_bad)


@dataclass
class FramingReport:
    framed: bool
    rank: int
    h0: int
    h0_minus1: int
    restricted: LineBundleComplex | None = None

    def to_json(self) -> dict:
        return {"framed": self.framed, "r": self.rank, "h0(E|l)": self.h0, "h0(E|l(-1))": self.h0_minus1}


def framing_check(C: LineBundleComplex) -> FramingReport:
    """Trivial framing on ``l = {z = 0}``: ``h0(E|l) = r`` and ``h0(E|l(-1)) = 0``."""
    from .cech import cech_hypercohomology
    try:
        shape = perverse_shape_check(C)
        r = shape.r
    except ShapeMismatch:
        r = C.rank(0) - C.rank(-1) - C.rank(1)
    L = restrict_to_line(C)
    if not _full_rank_everywhere(L.map(-1)) or not _full_rank_everywhere(L.map(0)):
        raise NotFiberwiseExact("the restricted monad is not fiberwise exact on the line")
    h0 = cech_hypercohomology(L, 0).get(0, 0)
    h0m = cech_hypercohomology(L, -1).get(0, 0)
    return FramingReport(h0 == r and h0m == 0, r, h0, h0m, L)


# ---------------------------------------------------------------------------
# examples and random data


def charge_one_data(n: int = 3) -> ADHMData:
    """``c = 1, r = 2``: A = B = 0, I = (z0, z1), J = (z1, -z0)^t."""
    if n != 3:
        raise ValueError("the charge-one example uses two z-variables (n = 3)")
    return ADHMData.from_coefficients(3, 1, 2, A=[[[0, 0]]], B=[[[0, 0]]],
                                      I=[[[1, 0], [0, 1]]], J=[[[0, 1]], [[-1, 0]]])


def jumping_monad() -> LineBundleComplex:
    """alpha = (x, y, z1, -z0)^t, beta = (-z1, z0, x, y): restricts to O(1) + O(-1) on the line."""
    nv = 4
    z0, z1, x, y = (HomogPoly.var(nv, i) for i in range(4))
    alpha = PolyMatrix([[x], [y], [z1], [-z0]])
    beta = PolyMatrix([[-z1, z0, x, y]])
    return monad(3, 1, 4, 1, alpha, beta)


def _rand_frac(rng: random.Random, lo: int = -3, hi: int = 3) -> Fraction:
    return Fraction(rng.randint(lo, hi))


def random_adhm(n: int, c: int, r: int, seed: int) -> ADHMData:
    """Seeded valid data: A, B polynomials in one matrix M; I J = 0 through complementary blocks of W."""
    rng = random.Random(seed)
    nl = n - 1
    M = [[_rand_frac(rng) for _ in range(c)] for _ in range(c)]
    powers = [[[Fraction(int(i == j)) for j in range(c)] for i in range(c)]]
    for _ in range(1, max(c, 1)):
        powers.append(mat_mul(powers[-1], M))

    def poly_in_M():
        mats = []
        for _ in range(nl):
            coeffs = [_rand_frac(rng) for _ in powers]
            mats.append([[sum(coeffs[d] * powers[d][i][j] for d in range(len(powers)))
                          for j in range(c)] for i in range(c)])
        return mats

    A = poly_in_M()
    B = poly_in_M()
    r1 = rng.randint(0, r)
    I = [[[(_rand_frac(rng) if j < r1 else Fraction(0)) for j in range(r)] for _ in range(c)] for _ in range(nl)]
    J = [[[(_rand_frac(rng) if i >= r1 else Fraction(0)) for _ in range(c)] for i in range(r)] for _ in range(nl)]
    # hide the block structure with an invertible change of basis on W
    if r:
        while True:
            g = [[_rand_frac(rng, -2, 2) for _ in range(r)] for _ in range(r)]
            if determinant(g) != 0:
                break
        from .exact import solve
        ginv_cols = [solve(g, [Fraction(int(i == j)) for i in range(r)]) for j in range(r)]
        ginv = [[ginv_cols[j][i] for j in range(r)] for i in range(r)]
        I = [mat_mul(Ik, g) if c else Ik for Ik in I]
        J = [mat_mul(ginv, Jk) if c else Jk for Jk in J]
    data = ADHMData(n, c, r, _from_coeffs(A, c, c, nl), _from_coeffs(B, c, c, nl),
                    _from_coeffs(I, c, r, nl), _from_coeffs(J, r, c, nl))
    return data
