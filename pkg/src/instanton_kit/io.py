"""JSON readers and writers for complexes, ADHM data and quiver representations."""

from __future__ import annotations

import json
import sys
from pathlib import Path

from .adhm import ADHMData
from .exact import HomogPoly, PolyMatrix
from .monads import LineBundleComplex
from .quiver import QuiverRep


class InputError(ValueError):
    pass


def read_json(path: str | Path) -> dict:
    try:
        if str(path) == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _map_key(p: int) -> str:
    return f"{p}->{p + 1}"


def complex_from_json(data: dict) -> LineBundleComplex:
    try:
        n = int(data["n"])
        terms = {int(p): [(int(k), int(m)) for k, m in ts] for p, ts in data["terms"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed complex: {exc}") from exc
    C = LineBundleComplex(n, terms)
    maps = {}
    for key, rows in data.get("maps", {}).items():
        try:
            src, tgt = (int(x) for x in key.split("->"))
        except ValueError as exc:
            raise InputError(f"map key {key!r} is not of the form 'p->p+1'") from exc
        if tgt != src + 1:
            raise InputError(f"map {key} does not raise the degree by one")
        ent = [[HomogPoly.from_json(p, n + 1) for p in row] for row in rows]
        maps[src] = PolyMatrix(ent, n_vars=n + 1, shape=(C.rank(tgt), C.rank(src)))
    return LineBundleComplex(n, terms, maps)


def complex_to_json(C: LineBundleComplex) -> dict:
    return {
        "n": C.n,
        "terms": {str(p): [[k, m] for k, m in C.terms[p]] for p in C.degrees()},
        "maps": {_map_key(p): C.maps[p].to_json() for p in sorted(C.maps)},
    }


def adhm_from_json(data: dict) -> ADHMData:
    try:
        return ADHMData.from_coefficients(int(data["n"]), int(data["c"]), int(data["r"]),
                                          data["A"], data["B"], data["I"], data["J"])
    except (KeyError, TypeError, IndexError) as exc:
        raise InputError(f"malformed ADHM data: {exc}") from exc


def adhm_to_json(data: ADHMData) -> dict:
    return data.coefficient_form()


def rep_from_json(data: dict) -> QuiverRep:
    try:
        return QuiverRep.from_json(data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed representation: {exc}") from exc
