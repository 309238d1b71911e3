"""Command-line entry point ``instanton-kit``.

Exit codes: 0 success, 1 a mathematical check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction

from . import adhm, fano, monads, quiver, render, stability
from . import wall_engine as walls
from .exact import fmt, frac
from .io import (InputError, adhm_from_json, complex_from_json, complex_to_json, dumps, read_json,
                 rep_from_json)


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return frac(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not an exact rational (use p/q)") from exc


def _integer(text: str) -> int:
    q = _rational(text)
    if q.denominator != 1:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    return int(q)


def _vector(text: str) -> list[Fraction]:
    try:
        return fano.parse_vector(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"bad vector {text!r}: {exc}") from exc


def _range(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..")
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; use a..b") from exc
    if hi < lo:
        raise argparse.ArgumentTypeError("empty range")
    return list(range(lo, hi + 1))


def _variety(args) -> fano.FanoThreefold:
    if getattr(args, "variety", None):
        return fano.variety(args.variety)
    if args.degree is None or args.index is None:
        raise UsageError("give --variety or both --degree and --index")
    return fano.variety(degree=args.degree, index=args.index)


class Output:
    def __init__(self, args):
        self.path = getattr(args, "out", None)
        self.chunks: list[str] = []

    def write(self, text: str):
        if not text.endswith("\n"):
            text += "\n"
        self.chunks.append(text)

    def flush(self):
        data = "".join(self.chunks)
        if self.path:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(data)
        else:
            sys.stdout.write(data)


def _vec_str(v) -> str:
    return "(" + ", ".join(fmt(x) for x in v) + ")"


def _character_arg(args, X) -> fano.ChernCharacter:
    if getattr(args, "ch", None) is not None:
        ch = fano.ChernCharacter(args.ch)
    elif getattr(args, "line", None) is not None:
        ch = fano.line_bundle(args.line)
    elif getattr(args, "R", None) is not None and getattr(args, "D", None) is not None:
        ch = fano.untwist(X, fano.instanton_vector(X, args.R, args.D))
    elif getattr(args, "vector", None) is not None:
        beta = args.beta if getattr(args, "beta", None) is not None else X.beta0
        ch = fano.untwist(X, fano.IntegratedVector(args.vector, beta))
    else:
        raise UsageError("give --ch, --line, --vector or --R/--D")
    if len(ch) != 4:
        raise UsageError("characters on a threefold have four entries")
    return ch


# ---------------------------------------------------------------------------
# commands


def cmd_chi(args, out):
    X = _variety(args)
    ch = _character_arg(args, X)
    val = fano.euler_characteristic(X, ch, args.k)
    if args.format == "json":
        out.write(dumps({"variety": X.to_json(), "ch": ch.to_json(), "k": args.k, "chi": fmt(val)}))
    else:
        out.write(fmt(val))
    return 0


def cmd_twist(args, out):
    X = _variety(args)
    ch = _character_arg(args, X)
    beta = args.beta if args.beta is not None else X.beta0
    v = fano.twist_character(X, ch, beta)
    if args.format == "json":
        out.write(dumps({"beta": fmt(beta), "v": [fmt(x) for x in v]}))
    else:
        out.write(_vec_str(v))
    return 0


def cmd_dual(args, out):
    X = _variety(args)
    ch = _character_arg(args, X)
    d = fano.D_functor_character(X, ch)
    if args.format == "json":
        out.write(dumps({"ch": ch.to_json(), "D(ch)": d.to_json(),
                         "involution": fano.D_functor_character(X, d) == ch}))
    else:
        out.write(str(d))
    return 0


def cmd_slope(args, out):
    X = _variety(args)
    ch = _character_arg(args, X)
    beta = args.beta if args.beta is not None else X.beta0
    v = fano.twist_character(X, ch, beta)
    mu = stability.mu_slope(X, v)
    nu = stability.nu_slope(X, v, args.alpha2)
    lam = stability.lambda_slope(X, v, args.alpha2, args.s)
    z = stability.central_charge(X, v, args.alpha2, args.s)
    res = {"v": [fmt(x) for x in v], "mu": stability.slope_str(mu), "nu": stability.slope_str(nu),
           "lambda": stability.slope_str(lam), "Z": [fmt(z[0]), fmt(z[1])]}
    if args.format == "json":
        out.write(dumps(res))
    else:
        for k, val in res.items():
            out.write(f"{k}\t{val if isinstance(val, str) else '(' + ', '.join(val) + ')'}")
    return 0


def cmd_region(args, out):
    X = _variety(args)
    res = {"k": fmt((args.s + Fraction(1, 6)) * args.alpha2), "k_U": fmt(stability.u_bound(X)),
           "in_U": stability.in_region_U(X, args.alpha2, args.s)}
    code = 0
    if (X.degree, X.index) in ((1, 4), (2, 3)):
        inside = stability.in_quiver_region(X, args.alpha2, args.s)
        res["in_quiver_region"] = inside
        lam = stability.chain_slopes(X, args.alpha2, args.s)
        res["slopes"] = {name: stability.slope_str(v) for name, v in lam.items()}
        if inside:
            res["chain_ok"] = stability.slope_chain_check(X, args.alpha2, args.s)
            code = 0 if res["chain_ok"] else 1
    if args.format == "json":
        out.write(dumps(res))
    else:
        for k, v in res.items():
            if isinstance(v, dict):
                for name, val in v.items():
                    out.write(f"lambda({name})\t{val}")
            else:
                out.write(f"{k}\t{str(v).lower() if isinstance(v, bool) else v}")
    return code


def _wallset(args):
    X = _variety(args)
    return walls.walls(X, args.R, args.D, workers=args.workers)


def cmd_walls(args, out):
    ws = _wallset(args)
    if args.format == "json":
        out.write(dumps(ws.to_json()))
    elif args.format == "csv":
        out.write(ws.to_csv())
    elif args.format == "svg":
        out.write(render.render_walls_svg(ws, render.parse_bounds(args.bounds, ws.X)))
    else:
        out.write(f"# {ws.X.label}  R={fmt(ws.R)}  D={fmt(ws.D)}  k_U={fmt(ws.k_U)}")
        if not ws.walls:
            out.write("no walls")
        for w in ws.walls:
            tag = "inside U" if w.inside_U else "outside U"
            out.write(f"wall k={fmt(w.k)} ({tag})")
            for c in w.candidates:
                out.write(f"  {_vec_str(c.vector)}")
    if args.figure:
        render.plot_walls(ws, args.figure, render.parse_bounds(args.bounds, ws.X))
    return 0


def cmd_chamber(args, out):
    ws = _wallset(args)
    try:
        ch = walls.chamber_of(ws.X, ws, args.alpha2, args.s)
    except walls.OnWall as exc:
        if args.format == "json":
            out.write(dumps({"on_wall": True, "kind": exc.kind, "k": fmt(exc.k)}))
        else:
            out.write(f"on {exc.kind} k={fmt(exc.k)}")
        return 1
    res = {"on_wall": False, "index": ch.index, "interval": [fmt(ch.lower), "inf" if ch.upper is None else fmt(ch.upper)],
           "meets_U": ch.meets_U}
    if args.format == "json":
        out.write(dumps(res))
    else:
        out.write(f"chamber {ch.index} k in {ch}{' (meets U)' if ch.meets_U else ''}")
    return 0


def _load_complex(path):
    data = read_json(path)
    if "terms" in data:
        return complex_from_json(data)
    if {"A", "B", "I", "J"} <= set(data):
        return adhm.build_monad(adhm_from_json(data))
    raise InputError(f"{path}: neither a complex nor ADHM data")


def cmd_monad_verify(args, out):
    C = _load_complex(args.file)
    ok = monads.verify_complex(C)
    ch = monads.complex_character(C)
    if args.format == "json":
        out.write(dumps({"complex": ok, "ch": [fmt(x) for x in ch]}))
    else:
        out.write(f"complex\t{str(ok).lower()}")
        out.write(f"ch\t{ch}")
    return 0 if ok else 1


def _table_output(args, out, C, table):
    pred = None
    if args.predicate:
        try:
            pred = monads.instanton_predicate(table, monads.complex_character(C), args.predicate)
        except monads.InsufficientWindow as exc:
            raise UsageError(str(exc))
    if args.format == "json":
        res = table.to_json()
        if pred:
            res["predicate"] = pred.to_json()
        out.write(dumps(res))
    elif args.format == "csv":
        out.write(table.to_csv())
    else:
        out.write(table.render())
        if pred:
            out.write(f"{pred.flavor}: {'pass' if pred.passed else 'fail'}"
                      + (f", charge {pred.charge}" if pred.charge is not None else "")
                      + (f", delta {pred.delta}" if pred.delta is not None else ""))
            for name in pred.failing:
                out.write(f"  failed: {name}")
    if args.figure:
        render.plot_table(table, args.figure)
    return 0 if pred is None or pred.passed else 1


def cmd_monad_table(args, out):
    C = _load_complex(args.file)
    table = monads.cohomology_table(C, args.t, method=args.method)
    return _table_output(args, out, C, table)


def cmd_adhm_check(args, out):
    data = adhm_from_json(read_json(args.file))
    ok = adhm.check_adhm(data)
    stable = adhm.git_stable(data) if ok else False
    if args.format == "json":
        out.write(dumps({"adhm_equation": ok, "git_closure_full": stable}))
    else:
        out.write(f"adhm_equation\t{str(ok).lower()}")
        out.write(f"git_closure_full\t{str(stable).lower()}")
    return 0 if ok else 1


def cmd_adhm_build(args, out):
    data = adhm_from_json(read_json(args.file))
    if not adhm.check_adhm(data):
        out.write("ADHM equation fails")
        return 1
    out.write(dumps(complex_to_json(adhm.build_monad(data))))
    return 0


def cmd_adhm_table(args, out):
    data = adhm_from_json(read_json(args.file))
    if not adhm.check_adhm(data):
        out.write("ADHM equation fails")
        return 1
    C = adhm.build_monad(data)
    table = monads.cohomology_table(C, args.t, method=args.method)
    return _table_output(args, out, C, table)


def cmd_adhm_framing(args, out):
    C = _load_complex(args.file)
    try:
        rep = adhm.framing_check(C)
    except adhm.NotFiberwiseExact as exc:
        out.write(str(exc))
        return 1
    if args.format == "json":
        out.write(dumps(rep.to_json()))
    else:
        for k, v in rep.to_json().items():
            out.write(f"{k}\t{str(v).lower() if isinstance(v, bool) else v}")
    return 0 if rep.framed else 1


def cmd_quiver_theta(args, out):
    th = quiver.theta_vector(args.alpha, args.gamma, args.r, args.c)
    dims = (args.c, args.r + 2 * args.c, args.c)
    if args.format == "json":
        out.write(dumps({"theta": th.to_json(), "dims": list(dims),
                         "pairing": fmt(quiver.theta_pairing(th, dims))}))
    else:
        out.write(str(th))
    return 0


def cmd_quiver_search(args, out):
    data = read_json(args.file)
    if "dims" in data:
        rep = rep_from_json(data)
    else:
        C = _load_complex(args.file)
        rep = quiver.from_monad(C)
    theta = args.theta
    if len(theta) != 3:
        raise UsageError("theta has three entries")
    res = quiver.subrep_search(rep, theta, args.budget, args.seed, args.convention)
    if args.format == "json":
        out.write(dumps(res.to_json()))
    elif res.witness is None:
        out.write(res.note)
    else:
        out.write(f"witness {tuple(res.witness)} theta={fmt(res.pairing)}")
    return 0 if res.witness is None else 1


def cmd_selftest(args, out):
    from . import selftest
    return 0 if selftest.run(out.write) else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="instanton-kit", description="Exact instanton computations.")
    sub = p.add_subparsers(dest="command", required=True)

    var = argparse.ArgumentParser(add_help=False)
    var.add_argument("--variety", help="preset: P3, Q3, V1..V5, X2..X22")
    var.add_argument("--degree", type=_integer)
    var.add_argument("--index", type=_integer)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv", "svg"], default="text")
    common.add_argument("--out", help="write the result to a file instead of stdout")
    common.add_argument("--seed", type=_integer, default=0)

    char = argparse.ArgumentParser(add_help=False)
    char.add_argument("--ch", type=_vector, help="ch coefficients a0,a1,a2,a3")
    char.add_argument("--line", type=_integer, help="use O(k)")
    char.add_argument("--vector", type=_vector, help="integrated vector at --beta (default beta0)")
    char.add_argument("--R", type=_rational)
    char.add_argument("--D", type=_rational)

    s = sub.add_parser("chi", parents=[var, common, char], help="Euler characteristic")
    s.add_argument("--k", type=_integer, default=0, help="twist by O(k)")
    s.add_argument("--beta", type=_rational)
    s.set_defaults(func=cmd_chi)

    s = sub.add_parser("twist", parents=[var, common, char], help="twisted integrated vector")
    s.add_argument("--beta", type=_rational)
    s.set_defaults(func=cmd_twist)

    s = sub.add_parser("dualD", parents=[var, common, char], help="character of RHom(E, O(-e))[2]")
    s.add_argument("--beta", type=_rational)
    s.set_defaults(func=cmd_dual)

    s = sub.add_parser("slope", parents=[var, common, char], help="mu, nu, lambda and Z")
    s.add_argument("--beta", type=_rational)
    s.add_argument("--alpha2", type=_rational, required=True)
    s.add_argument("--s", type=_rational, required=True)
    s.set_defaults(func=cmd_slope)

    s = sub.add_parser("region", parents=[var, common], help="region membership and slope chain")
    s.add_argument("--alpha2", type=_rational, required=True)
    s.add_argument("--s", type=_rational, required=True)
    s.set_defaults(func=cmd_region)

    wall_args = argparse.ArgumentParser(add_help=False)
    wall_args.add_argument("--R", type=_rational, required=True)
    wall_args.add_argument("--D", type=_rational, required=True)
    wall_args.add_argument("--workers", type=_integer)

    s = sub.add_parser("walls", parents=[var, common, wall_args], help="numerical walls")
    s.add_argument("--figure", help="also draw the slice with matplotlib (png/pdf/svg by suffix)")
    s.add_argument("--bounds", help="alpha_min,alpha_max,s_max for pictures")
    s.set_defaults(func=cmd_walls)

    s = sub.add_parser("chamber", parents=[var, common, wall_args], help="chamber of a slice point")
    s.add_argument("--alpha2", type=_rational, required=True)
    s.add_argument("--s", type=_rational, required=True)
    s.set_defaults(func=cmd_chamber)

    table_args = argparse.ArgumentParser(add_help=False)
    table_args.add_argument("--file", required=True)
    table_args.add_argument("--t", type=_range, default=_range("-3..1"))
    table_args.add_argument("--method", choices=["auto", "spectral", "cech"], default="auto")
    table_args.add_argument("--predicate", choices=["Pn-instanton", "h-ordinary", "h-nonordinary", "h"])
    table_args.add_argument("--figure", help="draw the table with matplotlib")

    m = sub.add_parser("monad", help="line-bundle complexes").add_subparsers(dest="action", required=True)
    s = m.add_parser("verify", parents=[common])
    s.add_argument("--file", required=True)
    s.set_defaults(func=cmd_monad_verify)
    s = m.add_parser("table", parents=[common, table_args])
    s.set_defaults(func=cmd_monad_table)

    a = sub.add_parser("adhm", help="ADHM data").add_subparsers(dest="action", required=True)
    s = a.add_parser("check", parents=[common])
    s.add_argument("--file", required=True)
    s.set_defaults(func=cmd_adhm_check)
    s = a.add_parser("build", parents=[common])
    s.add_argument("--file", required=True)
    s.set_defaults(func=cmd_adhm_build)
    s = a.add_parser("table", parents=[common, table_args])
    s.set_defaults(func=cmd_adhm_table)
    s = a.add_parser("framing", parents=[common])
    s.add_argument("--file", required=True, help="ADHM data or a built monad")
    s.set_defaults(func=cmd_adhm_framing)

    q = sub.add_parser("quiver", help="quiver representations").add_subparsers(dest="action", required=True)
    s = q.add_parser("theta", parents=[common])
    s.add_argument("--alpha", type=_rational, required=True)
    s.add_argument("--gamma", type=_rational, required=True)
    s.add_argument("--r", type=_integer, required=True)
    s.add_argument("--c", type=_integer, required=True)
    s.set_defaults(func=cmd_quiver_theta)
    s = q.add_parser("search", parents=[common])
    s.add_argument("--file", required=True, help="representation JSON or a linear monad")
    s.add_argument("--theta", type=_vector, default=_vector("-1,0,1"))
    s.add_argument("--budget", type=_integer, default=200)
    s.add_argument("--convention", choices=["le", "ge"], default="ge")
    s.set_defaults(func=cmd_quiver_search)

    s = sub.add_parser("selftest", parents=[common], help="run the pinned reference checks")
    s.set_defaults(func=cmd_selftest)
    return p


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--t -3..1`` into ``--t=-3..1`` so argparse does not read a flag."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and re.match(r"^-[0-9]", argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    out = Output(args)
    try:
        code = args.func(args, out)
    except (UsageError, InputError, fano.UnsupportedVariety, walls.InvalidShape,
            monads.ShapeMismatch, monads.UnsupportedComplex, adhm.InvalidADHM,
            quiver.RelationFailure, ValueError) as exc:
        sys.stderr.write(f"instanton-kit: error: {exc}\n")
        return 2
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
