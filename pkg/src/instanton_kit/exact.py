"""Exact rational arithmetic helpers, homogeneous polynomials and matrix rank.

Rationals are :class:`fractions.Fraction` throughout; nothing in this package
ever touches a float except the SVG/figure coordinates in :mod:`render`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, gcd
from typing import Iterable, Sequence


class DegreeMismatch(ValueError):
    pass


def frac(x) -> Fraction:
    """Parse an exact rational from an int, a Fraction or a ``"p/q"`` string.

    Floats are rejected on purpose.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational")
        if any(ch in s for ch in ".eE") and "/" not in s:
            raise ValueError(f"decimal input {x!r} is not accepted; use p/q")
        return Fraction(s)
    raise TypeError(f"cannot read {x!r} as an exact rational")


def fmt(q) -> str:
    """Print a rational as ``p/q`` (or ``p`` when integral)."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rat_gcd(values: Iterable[Fraction]) -> Fraction:
    """Positive generator of the subgroup of Q spanned by ``values`` (0 if all zero)."""
    num, den = 0, 1
    for v in values:
        v = Fraction(v)
        if v == 0:
            continue
        # gcd(a/b, c/d) = gcd(ad, cb) / bd, reduced
        l = den * v.denominator // gcd(den, v.denominator)
        num = gcd(num * (l // den), v.numerator * (l // v.denominator))
        den = l
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# monomials and homogeneous polynomials


def monomials(n_vars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples of the given degree, in descending lexicographic order.

    For two variables and degree 2 this is ``[(2,0), (1,1), (0,2)]``, i.e.
    x0^2, x0*x1, x1^2.
    """
    if degree < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(n_vars), degree):
        e = [0] * n_vars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def count_monomials(n_vars: int, degree: int) -> int:
    if degree < 0:
        return 0
    return comb(n_vars - 1 + degree, degree)


class HomogPoly:
    """Homogeneous polynomial with rational coefficients.

    ``terms`` maps exponent tuples to nonzero coefficients.  The zero
    polynomial keeps whatever degree it was created with and is compatible with
    every degree under addition.
    """

    __slots__ = ("n_vars", "degree", "terms")

    def __init__(self, n_vars: int, degree: int, terms: dict | None = None):
        if degree < 0:
            raise ValueError("negative degree")
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(a) for a in e)
            if len(e) != n_vars:
                raise ValueError(f"exponent {e} does not have {n_vars} entries")
            if min(e, default=0) < 0 or sum(e) != degree:
                raise ValueError(f"exponent {e} is not of degree {degree}")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.n_vars = n_vars
        self.degree = degree
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def zero(cls, n_vars: int, degree: int = 0) -> "HomogPoly":
        return cls(n_vars, degree)

    @classmethod
    def const(cls, n_vars: int, c) -> "HomogPoly":
        return cls(n_vars, 0, {(0,) * n_vars: c})

    @classmethod
    def var(cls, n_vars: int, i: int, c=1) -> "HomogPoly":
        e = [0] * n_vars
        e[i] = 1
        return cls(n_vars, 1, {tuple(e): c})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "HomogPoly":
        n = len(coeffs)
        return cls(n, 1, {tuple(int(j == i) for j in range(n)): c for i, c in enumerate(coeffs)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other: "HomogPoly"):
        if self.n_vars != other.n_vars:
            raise ValueError(f"variable count mismatch: {self.n_vars} vs {other.n_vars}")

    def __add__(self, other: "HomogPoly") -> "HomogPoly":
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.degree != other.degree:
            raise DegreeMismatch(f"cannot add degrees {self.degree} and {other.degree}")
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return HomogPoly(self.n_vars, self.degree, t)

    def __neg__(self) -> "HomogPoly":
        return HomogPoly(self.n_vars, self.degree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "HomogPoly") -> "HomogPoly":
        return self + (-other)

    def __mul__(self, other) -> "HomogPoly":
        if isinstance(other, HomogPoly):
            return poly_mul(self, other)
        c = Fraction(other)
        return HomogPoly(self.n_vars, self.degree, {e: c * v for e, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, HomogPoly):
            return NotImplemented
        if self.n_vars != other.n_vars or self.terms != other.terms:
            return False
        return not self.terms or self.degree == other.degree

    def __hash__(self):
        return hash((self.n_vars, frozenset(self.terms.items())))

    def __call__(self, point: Sequence) -> Fraction:
        return self.evaluate(point)

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, a in zip(point, e):
                if a:
                    term *= Fraction(x) ** a
            total += term
        return total

    def substitute_zero(self, indices: Iterable[int]) -> "HomogPoly":
        """Set the listed variables to zero (restriction to a coordinate subspace)."""
        idx = set(indices)
        return HomogPoly(self.n_vars, self.degree,
                         {e: c for e, c in self.terms.items() if not any(e[i] for i in idx)})

    def drop_vars(self, keep: Sequence[int]) -> "HomogPoly":
        """Restrict to the variables in ``keep``; terms involving other variables are dropped."""
        keep = list(keep)
        t = {}
        for e, c in self.terms.items():
            if sum(e[i] for i in keep) == self.degree:
                t[tuple(e[i] for i in keep)] = c
        return HomogPoly(len(keep), self.degree, t)

    def embed(self, n_vars: int, positions: Sequence[int]) -> "HomogPoly":
        """Rename variable i to ``positions[i]`` inside a ring with ``n_vars`` variables."""
        t = {}
        for e, c in self.terms.items():
            f = [0] * n_vars
            for i, a in enumerate(e):
                f[positions[i]] += a
            t[tuple(f)] = c
        return HomogPoly(n_vars, self.degree, t)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def to_json(self) -> list:
        return [{"coeff": fmt(c), "exps": list(e)} for e, c in sorted(self.terms.items(), reverse=True)]

    @classmethod
    def from_json(cls, data: list, n_vars: int, degree: int | None = None) -> "HomogPoly":
        terms = {}
        for item in data:
            e = tuple(int(a) for a in item["exps"])
            terms[e] = terms.get(e, 0) + frac(item["coeff"])
        if degree is None:
            degs = {sum(e) for e in terms}
            if len(degs) > 1:
                raise DegreeMismatch(f"polynomial is not homogeneous: degrees {sorted(degs)}")
            degree = degs.pop() if degs else 0
        return cls(n_vars, degree, terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{i}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a)
            if not mono:
                parts.append(fmt(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{fmt(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_mul(a: HomogPoly, b: HomogPoly) -> HomogPoly:
    if a.n_vars != b.n_vars:
        raise ValueError(f"variable count mismatch: {a.n_vars} vs {b.n_vars}")
    t: dict = {}
    for e1, c1 in a.terms.items():
        for e2, c2 in b.terms.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            t[e] = t.get(e, 0) + c1 * c2
    return HomogPoly(a.n_vars, a.degree + b.degree, t)


def multiplication_matrix(f: HomogPoly, n: int, d_from: int, d_to: int) -> list[list[Fraction]]:
    """Matrix of ``g -> f*g`` from degree ``d_from`` to ``d_to`` forms on P^n.

    Rows are indexed by the target monomial basis and columns by the source
    basis, both in :func:`monomials` order.
    """
    if f.n_vars != n + 1:
        raise ValueError(f"polynomial has {f.n_vars} variables, P^{n} needs {n + 1}")
    if d_from < 0 or d_to < 0:
        raise DegreeMismatch("negative degree")
    if f.terms and d_to - d_from != f.degree:
        raise DegreeMismatch(f"multiplying by a degree {f.degree} form cannot map {d_from} -> {d_to}")
    src = monomials(n + 1, d_from)
    tgt = monomials(n + 1, d_to)
    row_of = {m: i for i, m in enumerate(tgt)}
    M = [[Fraction(0)] * len(src) for _ in tgt]
    for j, m in enumerate(src):
        for e, c in f.terms.items():
            M[row_of[tuple(x + y for x, y in zip(m, e))]][j] += c
    return M


# ---------------------------------------------------------------------------
# polynomial matrices


class PolyMatrix:
    """Matrix of homogeneous forms in a fixed number of variables."""

    __slots__ = ("rows", "cols", "n_vars", "entries")

    def __init__(self, entries: Sequence[Sequence[HomogPoly]], n_vars: int | None = None,
                 shape: tuple[int, int] | None = None):
        ent = [list(r) for r in entries]
        if shape is None:
            shape = (len(ent), len(ent[0]) if ent else 0)
        self.rows, self.cols = shape
        if len(ent) != self.rows or any(len(r) != self.cols for r in ent):
            raise ValueError("ragged polynomial matrix")
        if n_vars is None:
            if not ent or not ent[0]:
                raise ValueError("n_vars needed for an empty matrix")
            n_vars = ent[0][0].n_vars
        for r in ent:
            for p in r:
                if p.n_vars != n_vars:
                    raise ValueError("entries live in different polynomial rings")
        self.n_vars = n_vars
        self.entries = ent

    @classmethod
    def zeros(cls, rows: int, cols: int, n_vars: int) -> "PolyMatrix":
        return cls([[HomogPoly.zero(n_vars) for _ in range(cols)] for _ in range(rows)],
                   n_vars=n_vars, shape=(rows, cols))

    @property
    def degree(self) -> int | None:
        degs = {p.degree for r in self.entries for p in r if p.terms}
        if len(degs) > 1:
            raise DegreeMismatch(f"entries have mixed degrees {sorted(degs)}")
        return degs.pop() if degs else None

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = HomogPoly.zero(self.n_vars)
                for k in range(self.cols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a.terms and b.terms:
                        acc = acc + poly_mul(a, b)
                row.append(acc)
            out.append(row)
        return PolyMatrix(out, n_vars=self.n_vars, shape=(self.rows, other.cols))

    def is_zero(self) -> bool:
        return all(not p.terms for r in self.entries for p in r)

    def nonzero_positions(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.entries) for j, p in enumerate(r) if p.terms]

    def evaluate(self, point: Sequence) -> list[list[Fraction]]:
        return [[p.evaluate(point) for p in r] for r in self.entries]

    def map(self, fn) -> "PolyMatrix":
        out = [[fn(p) for p in r] for r in self.entries]
        nv = out[0][0].n_vars if out and out[0] else self.n_vars
        return PolyMatrix(out, n_vars=nv, shape=(self.rows, self.cols))

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
                          n_vars=self.n_vars, shape=(self.cols, self.rows))

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.entries == other.entries

    def to_json(self) -> list:
        return [[p.to_json() for p in r] for r in self.entries]

    def __repr__(self):
        return "PolyMatrix(" + repr(self.entries) + ")"


# ---------------------------------------------------------------------------
# dense and sparse linear algebra over Q


def rref(M: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns.

    Within a column the pivot row is the candidate with the largest absolute
    numerator; the reduced form itself is unique so this only affects speed.
    """
    A = [[Fraction(x) for x in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        best = None
        for i in range(r, rows):
            v = A[i][c]
            if v and (best is None or abs(v.numerator) > abs(A[best][c].numerator)):
                best = i
        if best is None:
            continue
        A[r], A[best] = A[best], A[r]
        p = A[r][c]
        if p != 1:
            A[r] = [x / p for x in A[r]]
        pr = A[r]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                Ai = A[i]
                for k in range(c, cols):
                    if pr[k]:
                        Ai[k] -= f * pr[k]
        pivots.append(c)
        r += 1
    return A, pivots


def rank_kernel(M: Sequence[Sequence], cols: int | None = None) -> tuple[int, list[list[Fraction]]]:
    """Rank of ``M`` and a canonical kernel basis read off its reduced row echelon form.

    ``cols`` is needed when ``M`` has no rows.
    """
    if not M:
        n = cols or 0
        return 0, [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    R, piv = rref(M)
    n = len(R[0])
    free = [c for c in range(n) if c not in set(piv)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, pc in enumerate(piv):
            v[pc] = -R[i][f]
        basis.append(v)
    return len(piv), basis


def rank(M: Sequence[Sequence]) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(M)[1])


def mat_vec(M: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    return [sum((Fraction(a) * b for a, b in zip(row, v)), Fraction(0)) for row in M]


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list[Fraction]]:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum((Fraction(A[i][k]) * B[k][j] for k in range(inner)), Fraction(0)) for j in range(cols)]
            for i in range(len(A))]


def transpose(M: Sequence[Sequence]) -> list[list]:
    return [list(c) for c in zip(*M)] if M else []


def solve(M: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of ``M x = b`` (free variables set to 0), or None."""
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    R, piv = rref(aug)
    n = len(M[0])
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, pc in enumerate(piv):
        x[pc] = R[i][n]
    return x


def sparse_rank(rows: Iterable[dict]) -> int:
    """Rank of a sparse matrix given as ``{col: value}`` row dictionaries.

    Incremental elimination on leading columns; rows are consumed.
    """
    pivots: dict[int, dict] = {}
    for row in rows:
        row = {c: Fraction(v) for c, v in row.items() if v}
        while row:
            lead = min(row)
            p = pivots.get(lead)
            if p is None:
                inv = 1 / row[lead]
                pivots[lead] = {c: v * inv for c, v in row.items()}
                break
            f = row[lead]
            for c, v in p.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
    return len(pivots)


# ---------------------------------------------------------------------------
# univariate helpers (coefficient lists, lowest degree first)


def upoly_trim(p: list[Fraction]) -> list[Fraction]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def upoly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = upoly_trim(a)
    b = upoly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    while len(a) >= len(b):
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a = upoly_trim(a)
    return a


def upoly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = upoly_trim(a), upoly_trim(b)
    while b:
        a, b = b, upoly_rem(a, b)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients (lowest first) of the polynomial through the given points."""
    n = len(xs)
    V = [[Fraction(x) ** k for k in range(n)] for x in xs]
    sol = solve(V, ys)
    assert sol is not None
    return upoly_trim(sol)


def determinant(M: Sequence[Sequence]) -> Fraction:
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] / A[c][c]
                for k in range(c, n):
                    A[i][k] -= f * A[c][k]
    return det
