"""Hypercohomology from the full Cech double complex of the standard cover.

Sections of ``O(a)`` over the chart ``U_I = {x_i != 0 for i in I}`` are Laurent
monomials of degree ``a`` whose negative exponents sit inside ``I``.  Keeping
only exponents ``>= -N`` gives a subcomplex stable under the Cech maps and under
multiplication by forms; once ``N >= -a - n`` for every twist ``a`` in play it
already carries all of ``H^n(O(a))``, so the truncation is exact.

This is deliberately independent from the spectral shortcut in :mod:`monads`
and is used to cross-check it.
"""

from __future__ import annotations

from itertools import combinations

from .exact import sparse_rank


def _laurent_monomials(n_vars: int, degree: int, lower: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Exponent vectors with ``e_i >= lower[i]`` summing to ``degree``."""
    shifted = degree - sum(lower)
    if shifted < 0:
        return []
    out = []

    def rec(i, left, acc):
        if i == n_vars - 1:
            out.append(tuple(acc + [left + lower[i]]))
            return
        for x in range(left, -1, -1):
            rec(i + 1, left - x, acc + [x + lower[i]])

    rec(0, shifted, [])
    return out


def truncation_bound(C, t: int) -> int:
    twists = [k + t for p in C.degrees() for k in C.twists(p)]
    return max([0] + [-a - C.n for a in twists])


def cech_hypercohomology(C, t: int, N: int | None = None) -> dict[int, int]:
    """``{m: dim}`` for the complex ``C`` twisted by ``O(t)``; zero entries omitted."""
    C.check_degrees()
    n = C.n
    nv = n + 1
    if N is None:
        N = truncation_bound(C, t)
    degs = C.degrees()
    if not degs:
        return {}
    charts = {j: list(combinations(range(nv), j + 1)) for j in range(nv)}

    # basis of each cochain group C^{p,j}: (summand s, chart I, monomial)
    index: dict[tuple[int, int], dict[tuple, int]] = {}
    for p in degs:
        tw = C.twists(p)
        for j in range(nv):
            idx = {}
            for s, k in enumerate(tw):
                for I in charts[j]:
                    lower = tuple(-N if i in I else 0 for i in range(nv))
                    for m in _laurent_monomials(nv, k + t, lower):
                        idx[(s, I, m)] = len(idx)
            index[(p, j)] = idx

    def total_offsets(m):
        offs, off = {}, 0
        for p in degs:
            j = m - p
            if 0 <= j < nv:
                offs[(p, j)] = off
                off += len(index[(p, j)])
        return offs, off

    dims, ranks = {}, {}
    lo, hi = degs[0], degs[-1] + n
    for m in range(lo, hi + 1):
        src_offs, dim = total_offsets(m)
        dims[m] = dim
        tgt_offs, _ = total_offsets(m + 1)
        rows = []
        for (p, j), off in src_offs.items():
            D = C.map(p) if (p + 1, j) in tgt_offs else None
            sign = -1 if j % 2 else 1
            for (s, I, mono), col in index[(p, j)].items():
                img: dict[int, object] = {}
                # differential of the complex, applied chartwise
                if D is not None:
                    tidx, toff = index[(p + 1, j)], tgt_offs[(p + 1, j)]
                    for r in range(D.rows):
                        f = D[r, s]
                        for e, c in f.terms.items():
                            key = (r, I, tuple(a + b for a, b in zip(mono, e)))
                            pos = toff + tidx[key]
                            img[pos] = img.get(pos, 0) + sign * c
                # Cech differential into charts J = I + {i}
                if (p, j + 1) in tgt_offs:
                    tidx, toff = index[(p, j + 1)], tgt_offs[(p, j + 1)]
                    for i in range(nv):
                        if i in I:
                            continue
                        J = tuple(sorted(I + (i,)))
                        pos_in_J = J.index(i)
                        pos = toff + tidx[(s, J, mono)]
                        img[pos] = img.get(pos, 0) + (-1) ** pos_in_J
                img = {k: v for k, v in img.items() if v}
                if img:
                    rows.append(img)
        ranks[m] = sparse_rank(rows)
    out = {}
    for m in range(lo, hi + 1):
        h = dims[m] - ranks[m] - ranks.get(m - 1, 0)
        if h:
            out[m] = h
    return out


def cech_line_bundle(n: int, a: int) -> tuple[int, ...]:
    """Cohomology of ``O_{P^n}(a)`` through the same machinery (used in tests)."""
    from .monads import LineBundleComplex
    C = LineBundleComplex(n, {0: [(a, 1)]})
    h = cech_hypercohomology(C, 0)
    return tuple(h.get(i, 0) for i in range(n + 1))
