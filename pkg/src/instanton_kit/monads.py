"""Complexes of sums of line bundles on P^n and their hypercohomology.

The default method for ``n >= 2`` reads the hypercohomology off the first page
of the spectral sequence of the stupid filtration.  A line bundle on P^n only
has cohomology in degrees 0 and n, and for a complex spanning at most three
adjacent degrees no differential past the second page can be nonzero, so the
answer is a handful of ranks of multiplication matrices.  ``n = 1`` and the
cross-check path go through :mod:`cech`.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .exact import (DegreeMismatch, HomogPoly, PolyMatrix, fmt, frac, multiplication_matrix,
                    rank, transpose)
from .fano import ChernCharacter, line_bundle, tensor_line_bundle


class UnsupportedComplex(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class InsufficientWindow(ValueError):
    pass


def bott_line(n: int, k: int) -> tuple[int, ...]:
    """``(h^0, ..., h^n)`` of ``O_{P^n}(k)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    h = [0] * (n + 1)
    if k >= 0:
        h[0] = comb(n + k, n)
    if k <= -n - 1:
        h[n] = comb(-k - 1, n)
    return tuple(h)


def chi_line(n: int, k: int) -> int:
    """``chi(O_{P^n}(k))`` as the binomial polynomial, valid for all integers k."""
    num = 1
    for j in range(1, n + 1):
        num *= k + j
    den = 1
    for j in range(1, n + 1):
        den *= j
    return num // den


@dataclass
class LineBundleComplex:
    """``terms[p]`` lists ``(twist, multiplicity)``; ``maps[p]`` goes from degree p to p+1."""

    n: int
    terms: dict[int, list[tuple[int, int]]]
    maps: dict[int, PolyMatrix] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {int(p): [(int(k), int(m)) for k, m in ts if int(m) > 0]
                      for p, ts in self.terms.items()}
        self.terms = {p: ts for p, ts in self.terms.items() if ts}
        for p, M in self.maps.items():
            if M.n_vars != self.n + 1:
                raise ValueError(f"map {p}->{p + 1} lives in {M.n_vars} variables, expected {self.n + 1}")
            if (M.rows, M.cols) != (self.rank(p + 1), self.rank(p)):
                raise ValueError(f"map {p}->{p + 1} has shape {M.rows}x{M.cols}, "
                                 f"expected {self.rank(p + 1)}x{self.rank(p)}")

    def degrees(self) -> list[int]:
        return sorted(self.terms)

    def twists(self, p: int) -> list[int]:
        out = []
        for k, m in self.terms.get(p, []):
            out.extend([k] * m)
        return out

    def rank(self, p: int) -> int:
        return sum(m for _, m in self.terms.get(p, []))

    def map(self, p: int) -> PolyMatrix:
        """The differential out of degree ``p`` (zero when absent)."""
        if p in self.maps:
            return self.maps[p]
        return PolyMatrix.zeros(self.rank(p + 1), self.rank(p), self.n + 1)

    def check_degrees(self):
        """Raise :class:`DegreeMismatch` naming the first badly graded entry."""
        for p, M in sorted(self.maps.items()):
            src, tgt = self.twists(p), self.twists(p + 1)
            for i in range(M.rows):
                for j in range(M.cols):
                    f = M[i, j]
                    if f.terms and f.degree != tgt[i] - src[j]:
                        raise DegreeMismatch(
                            f"map {p}->{p + 1} entry ({i},{j}) has degree {f.degree}, "
                            f"expected {tgt[i] - src[j]}")

    def shape_ok(self) -> bool:
        degs = self.degrees()
        return len(degs) <= 3 and (not degs or degs[-1] - degs[0] == len(degs) - 1)

    def twisted(self, t: int) -> "LineBundleComplex":
        return LineBundleComplex(self.n, {p: [(k + t, m) for k, m in ts] for p, ts in self.terms.items()},
                                 dict(self.maps))


def monad(n: int, a: int, b: int, c: int, alpha: PolyMatrix | None = None,
          beta: PolyMatrix | None = None) -> LineBundleComplex:
    """``O(-1)^a -> O^b -> O(1)^c`` in degrees -1, 0, 1."""
    maps = {}
    if alpha is not None:
        maps[-1] = alpha
    if beta is not None:
        maps[0] = beta
    return LineBundleComplex(n, {-1: [(-1, a)], 0: [(0, b)], 1: [(1, c)]}, maps)


def verify_complex(C: LineBundleComplex) -> bool:
    C.check_degrees()
    for p in C.degrees():
        if p in C.maps and p + 1 in C.maps:
            if not (C.maps[p + 1] @ C.maps[p]).is_zero():
                return False
    return True


def complex_character(C: LineBundleComplex) -> ChernCharacter:
    total = ChernCharacter([0] * (C.n + 1))
    for p, ts in C.terms.items():
        for k, m in ts:
            total = total + line_bundle(k, C.n + 1) * (m * (-1) ** (p % 2))
    return total


def euler_pn(n: int, ch: ChernCharacter, t: int = 0) -> Fraction:
    """Riemann-Roch on P^n: write ``ch(E(t))`` in the basis ``ch(O(j))``, j = 0..n."""
    if len(ch) != n + 1:
        raise ValueError(f"P^{n} characters have {n + 1} coefficients")
    from .exact import solve
    target = list(tensor_line_bundle(ch, t).coeffs)
    basis = [line_bundle(j, n + 1).coeffs for j in range(n + 1)]
    M = [[basis[j][i] for j in range(n + 1)] for i in range(n + 1)]
    coeffs = solve(M, target)
    return sum(c * chi_line(n, j) for j, c in enumerate(coeffs))


# ---------------------------------------------------------------------------
# spectral method


def _block_matrix(C: LineBundleComplex, p: int, t: int, q: int) -> list[list[Fraction]]:
    """Matrix of ``H^q(C^p(t)) -> H^q(C^{p+1}(t))`` on monomial bases."""
    n = C.n
    src, tgt = C.twists(p), C.twists(p + 1)

    def dim(a):
        return bott_line(n, a)[q]

    col_off, off = [], 0
    for k in src:
        col_off.append(off)
        off += dim(k + t)
    ncols = off
    row_off, off = [], 0
    for k in tgt:
        row_off.append(off)
        off += dim(k + t)
    nrows = off
    M = [[Fraction(0)] * ncols for _ in range(nrows)]
    if nrows == 0 or ncols == 0:
        return M
    D = C.map(p)
    for i, kt in enumerate(tgt):
        for j, ks in enumerate(src):
            f = D[i, j]
            if not f.terms or dim(kt + t) == 0 or dim(ks + t) == 0:
                continue
            if q == 0:
                block = multiplication_matrix(f, n, ks + t, kt + t)
            else:
                # dual of multiplication H^0(O(-kt-t-n-1)) -> H^0(O(-ks-t-n-1))
                block = transpose(multiplication_matrix(f, n, -kt - t - n - 1, -ks - t - n - 1))
            for a, row in enumerate(block):
                for b, x in enumerate(row):
                    if x:
                        M[row_off[i] + a][col_off[j] + b] = x
    return M


def _spectral(C: LineBundleComplex, t: int) -> dict[int, int]:
    n = C.n
    degs = C.degrees()
    out: dict[int, int] = {}
    if not degs:
        return out
    lo, hi = degs[0], degs[-1]
    for q in (0, n):
        ranks = {}
        for p in range(lo - 1, hi + 1):
            M = _block_matrix(C, p, t, q)
            ranks[p] = rank(M) if M and M[0] else 0
        for p in range(lo, hi + 1):
            e1 = sum(bott_line(n, k + t)[q] for k in C.twists(p))
            e2 = e1 - ranks[p] - ranks[p - 1]
            if e2:
                out[p + q] = out.get(p + q, 0) + e2
    return out


def hypercohomology(C: LineBundleComplex, t: int, method: str = "auto") -> dict[int, int]:
    """Dimensions ``{m: dim H^m(C(t))}``; degrees with zero dimension are omitted."""
    if method == "auto":
        method = "cech" if C.n == 1 else "spectral"
    if method == "cech":
        from .cech import cech_hypercohomology
        return cech_hypercohomology(C, t)
    if method != "spectral":
        raise ValueError(f"unknown method {method!r}")
    if C.n < 2:
        raise UnsupportedComplex("the spectral method needs n >= 2")
    if not C.shape_ok():
        raise UnsupportedComplex("spectral method supports at most three terms in adjacent degrees")
    C.check_degrees()
    return _spectral(C, t)


# ---------------------------------------------------------------------------
# tables


@dataclass
class CohomologyTable:
    """``h[i][t]``; a ``None`` entry is unknown (only in pattern-derived tables)."""

    n: int
    ts: list[int]
    h: dict[int, dict[int, int | None]]

    def get(self, i: int, t: int):
        if t not in self.ts:
            raise InsufficientWindow(f"twist {t} is outside the table window {self.ts[0]}..{self.ts[-1]}")
        return self.h.get(i, {}).get(t, 0)

    def degrees(self) -> list[int]:
        return sorted(self.h)

    def euler(self, t: int) -> int:
        return sum((-1) ** (i % 2) * (self.get(i, t) or 0) for i in self.degrees())

    def rows(self) -> list[int]:
        lo = min([0] + self.degrees())
        hi = max([self.n] + self.degrees())
        return list(range(hi, lo - 1, -1))

    def to_json(self) -> dict:
        return {"n": self.n, "t": self.ts,
                "h": {str(i): [self.get(i, t) for t in self.ts] for i in self.rows()}}

    def to_csv(self) -> str:
        lines = ["i," + ",".join(str(t) for t in self.ts)]
        for i in self.rows():
            lines.append(f"h{i}," + ",".join("*" if self.get(i, t) is None else str(self.get(i, t))
                                               for t in self.ts))
        return "\n".join(lines) + "\n"

    def render(self) -> str:
        width = max(4, *(len(str(t)) for t in self.ts)) + 1
        head = "t".ljust(8) + "".join(str(t).rjust(width) for t in self.ts)
        lines = [head]
        for i in self.rows():
            vals = ["*" if self.get(i, t) is None else str(self.get(i, t)) for t in self.ts]
            lines.append(f"h^{i}".ljust(8) + "".join(v.rjust(width) for v in vals))
        return "\n".join(lines)


def _column(args):
    C, t, method = args
    return hypercohomology(C, t, method)


def cohomology_table(C: LineBundleComplex, ts: Iterable[int], method: str = "auto",
                     workers: int | None = None, check_euler: bool = True) -> CohomologyTable:
    ts = list(ts)
    if workers is None:
        env = os.environ.get("INSTANTON_KIT_THREADS")
        workers = int(env) if env else 1
    jobs = [(C, t, method) for t in ts]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cols = list(pool.map(_column, jobs))
    else:
        cols = [_column(j) for j in jobs]
    h: dict[int, dict[int, int]] = {i: {} for i in range(C.n + 1)}
    for t, col in zip(ts, cols):
        for m, d in col.items():
            h.setdefault(m, {})[t] = d
    table = CohomologyTable(C.n, ts, h)
    if check_euler:
        ch = complex_character(C)
        for t in ts:
            if table.euler(t) != euler_pn(C.n, ch, t):
                raise AssertionError(f"Euler characteristic mismatch at t={t}")
    return table


def line_bundle_table(n: int, k: int, ts: Iterable[int], mult: int = 1) -> CohomologyTable:
    ts = list(ts)
    h = {i: {t: mult * bott_line(n, k + t)[i] for t in ts} for i in range(n + 1)}
    return CohomologyTable(n, ts, h)


def index_two_instanton_table(X, charge: int, ts: Iterable[int] = range(-3, 2)) -> CohomologyTable:
    """Cohomology table of a rank-2 instanton of the given charge on an index-2 threefold.

    Uses only the vanishings ``h^0(E(t)) = 0`` for ``t <= 0``, ``h^1(E(t)) = 0``
    for ``t <= -1``, Serre duality ``h^i(E(t)) = h^{3-i}(E(-2-t))`` and
    Riemann-Roch; entries not forced by these are ``None``.
    """
    from .fano import euler_characteristic
    if X.index != 2:
        raise ValueError("index-two varieties only")
    ts = list(ts)
    ch = ChernCharacter(2, 0, Fraction(-charge, X.degree), 0)
    h: dict[int, dict[int, int | None]] = {i: {} for i in range(4)}

    def known_zero(i, t):
        if i == 0:
            return t <= 0
        if i == 1:
            return t <= -1
        return known_zero(3 - i, -2 - t) if i in (2, 3) else False

    for t in ts:
        unknown = [i for i in range(4) if not known_zero(i, t)]
        for i in range(4):
            h[i][t] = 0 if i not in unknown else None
        if len(unknown) == 1:
            i = unknown[0]
            val = euler_characteristic(X, ch, t) * (-1) ** i
            h[i][t] = int(val)
        elif not unknown and euler_characteristic(X, ch, t) != 0:
            raise AssertionError(f"vanishing pattern contradicts Riemann-Roch at t={t}")
    return CohomologyTable(3, ts, h)


# ---------------------------------------------------------------------------
# instanton conditions


@dataclass
class InstantonReport:
    flavor: str
    passed: bool
    conditions: dict[str, bool]
    charge: int | None = None
    delta: int | None = None
    deltas_passing: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def failing(self) -> list[str]:
        return [k for k, v in self.conditions.items() if not v]

    def to_json(self) -> dict:
        return {"flavor": self.flavor, "pass": self.passed, "charge": self.charge,
                "delta": self.delta, "conditions": self.conditions, "failing": self.failing,
                "notes": self.notes}


def _zero(table, i, t):
    # unknown entries (None) do not count as vanishing
    return table.get(i, t) == 0


def _pn_conditions(table: CohomologyTable, ch: ChernCharacter) -> dict[str, bool]:
    n = table.n
    cond = {"c1=0": ch[1] == 0}
    if n >= 2:
        cond["h0(E(-1))=0"] = _zero(table, 0, -1)
        cond[f"h{n}(E(-{n}))=0"] = _zero(table, n, -n)
    if n >= 3:
        cond["h1(E(-2))=0"] = _zero(table, 1, -2)
        cond[f"h{n - 1}(E({1 - n}))=0"] = _zero(table, n - 1, 1 - n)
    if n >= 4:
        cond[f"h^p(E(k))=0 for 2<=p<={n - 2}, k in window"] = all(
            _zero(table, p, t) for p in range(2, n - 1) for t in table.ts)
    return cond


def _h_conditions(table: CohomologyTable, ch: ChernCharacter, delta: int) -> tuple[dict[str, bool], int | None]:
    n = table.n
    cond = {
        "(1) h0(E(-1))=0": _zero(table, 0, -1),
        f"(1) h{n}(E({delta - n}))=0": _zero(table, n, delta - n),
    }
    for i in range(1, n - 1):
        cond[f"(2) h{i}(E({-(i + 1)}))=0"] = _zero(table, i, -(i + 1))
        cond[f"(2) h{n - 1}(E({delta - n + i}))=0"] = _zero(table, n - 1, delta - n + i)
    for i in range(2, n - 1):
        cond[f"(3) delta*h{i}(E({-i}))=0"] = delta * table.get(i, -i) == 0
    k1, k2 = table.get(1, -1), table.get(n - 1, delta - n)
    cond["(4) h1(E(-1))=h{0}(E({1}))".format(n - 1, delta - n)] = k1 == k2
    cond["(5) delta*(chi(E)-(-1)^n chi(E(-n)))=0"] = \
        delta * (euler_pn(n, ch, 0) - (-1) ** n * euler_pn(n, ch, -n)) == 0
    return cond, k1


def instanton_predicate(table: CohomologyTable, ch: ChernCharacter, flavor: str = "Pn-instanton") -> InstantonReport:
    """Check the cohomological instanton conditions against a table on P^n.

    Flavors: ``Pn-instanton`` (c1 = 0 plus the vanishings in degrees 0, 1, n-1,
    n and the middle range), ``h-ordinary`` / ``h-nonordinary`` (defect 0 / 1
    conditions relative to O(1)) and ``h`` (try both defects).
    """
    n = table.n
    if flavor == "Pn-instanton":
        cond = _pn_conditions(table, ch)
        charge = table.get(1, -1)
        notes = []
        if n >= 4:
            notes.append("middle vanishing checked only over the table window")
        if -ch[2] != charge and ch[1] == 0:
            notes.append(f"h1(E(-1)) = {charge} differs from c2 = {fmt(-ch[2])}")
            cond["charge=c2"] = False
        return _with_unknown_note(InstantonReport(flavor, all(cond.values()), cond, charge, None, [], notes), table)
    if flavor in ("h-ordinary", "h-nonordinary"):
        delta = 0 if flavor == "h-ordinary" else 1
        cond, k = _h_conditions(table, ch, delta)
        ok = all(cond.values())
        return _with_unknown_note(InstantonReport(flavor, ok, cond, k, delta, [delta] if ok else []), table)
    if flavor == "h":
        results = {}
        errors = []
        for delta in (0, 1):
            try:
                results[delta] = _h_conditions(table, ch, delta)
            except InsufficientWindow as exc:
                errors.append(str(exc))
        if not results:
            raise InsufficientWindow("; ".join(errors))
        passing = [d for d, (c, _) in results.items() if all(c.values())]
        delta = passing[0] if passing else None
        chosen = results[delta if delta is not None else min(results)]
        cond = dict(chosen[0])
        notes = [f"delta={d} branch not testable: window too small" for d in (0, 1) if d not in results]
        return _with_unknown_note(InstantonReport(flavor, bool(passing), cond, chosen[1], delta, passing, notes), table)
    raise ValueError(f"unknown flavor {flavor!r}")


def _with_unknown_note(report: InstantonReport, table: CohomologyTable) -> InstantonReport:
    if any(v is None for row in table.h.values() for v in row.values()) and not report.passed:
        report.notes.append("table has unknown entries; conditions on them are reported as failing")
    return report


@dataclass
class PerverseShape:
    r: int
    c: int
    torsion_free: str = "not decided"

    def to_json(self) -> dict:
        return {"r": self.r, "c": self.c, "torsion_free": self.torsion_free}


def perverse_shape_check(C: LineBundleComplex) -> PerverseShape:
    """Read ``(r, c)`` off a monad ``O(-1)^c -> O^{r+2c} -> O(1)^c``."""
    expected = {-1: -1, 0: 0, 1: 1}
    for p in C.degrees():
        if p not in expected or any(k != expected[p] for k, _ in C.terms[p]):
            raise ShapeMismatch("need twists -1, 0, 1 in degrees -1, 0, 1")
    a, b, c = C.rank(-1), C.rank(0), C.rank(1)
    if a != c or b < 2 * c:
        raise ShapeMismatch(f"multiplicities ({a},{b},{c}) are not of the form (c, r+2c, c)")
    ch = complex_character(C)
    assert ch[1] == 0, "a balanced monad must have c1 = 0"
    return PerverseShape(b - 2 * c, c)


# ---------------------------------------------------------------------------
# named examples


def _v(n_vars, i, c=1):
    return HomogPoly.var(n_vars, i, c)


def null_correlation_monad(n: int = 3) -> LineBundleComplex:
    """Charge-one rank-two monad with alpha = (x, y, z1, -z0)^t, beta = (-y, x, z0, z1).

    Coordinates are ``[z0 : ... : z_{n-2} : x : y]``.
    """
    if n != 3:
        raise ValueError("the null-correlation example lives on P^3")
    nv = n + 1
    z0, z1, x, y = (_v(nv, i) for i in range(4))
    alpha = PolyMatrix([[x], [y], [z1], [-z0]])
    beta = PolyMatrix([[-y, x, z0, z1]])
    return monad(n, 1, 4, 1, alpha, beta)


def hyperplane_monad() -> LineBundleComplex:
    """``O(-1)^3 -> O^6 -> O(1)^3`` on P^3 whose cohomology is a shifted sheaf on ``{x3 = 0}``.

    beta is ``x3 * id`` on the first three summands and the Koszul map of
    ``(x0, x1, x2)`` on the other three; alpha is the matching syzygy.
    """
    nv = 4
    x = [_v(nv, i) for i in range(4)]
    o = HomogPoly.zero(nv)
    beta = PolyMatrix([
        [x[3], o, o, x[1], x[2], o],
        [o, x[3], o, -x[0], o, x[2]],
        [o, o, x[3], o, -x[0], -x[1]],
    ])
    alpha = PolyMatrix([
        [x[1], x[2], o],
        [-x[0], o, x[2]],
        [o, -x[0], -x[1]],
        [-x[3], o, o],
        [o, -x[3], o],
        [o, o, -x[3]],
    ])
    return monad(3, 3, 6, 3, alpha, beta)


def trivial_complex(n: int, r: int, k: int = 0) -> LineBundleComplex:
    return LineBundleComplex(n, {0: [(k, r)]})
