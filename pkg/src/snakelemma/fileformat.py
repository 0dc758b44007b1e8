"""Reading and writing diagram files.

A diagram file is a JSON document::

    {"groups":  {"Z":  {"gens": 1, "relations": []},
                 "Z2": {"gens": 1, "relations": [[2]]}},
     "maps":    {"p": {"from": "Z", "to": "Z2", "matrix": [[1]]}, ...},
     "diagram": {"kind": "ring", "alpha": "...", "beta": "p"}}

Relations are columns (each of length ``gens``); matrices are row-major with
shape ``to.gens x from.gens``.  Integers may be given as decimal strings when
they do not fit comfortably in a JSON number.
"""

from __future__ import annotations

import json
import re
from typing import Dict, Union

from .abgroup import FpAbGroup, Hom, make_group
from .errors import ContractError, IllDefined, ParseError
from .four import FOUR_ROLES, FourDiagram
from .linalg import IntMatrix
from .snake import SNAKE_ROLES, RingPair, SnakeDiagram

KINDS = {"snake": SNAKE_ROLES, "four": FOUR_ROLES, "ring": ("alpha", "beta")}
_INT_RE = re.compile(r"[+-]?\d+\Z")


Diagram = Union[SnakeDiagram, FourDiagram, RingPair]


def _reject_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ParseError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _int(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ParseError("expected an integer", where)
    if isinstance(x, str):
        if not _INT_RE.match(x.strip()):
            raise ParseError(f"not a decimal integer: {x!r}", where)
        return int(x)
    return x


def _obj(x, where):
    if not isinstance(x, dict):
        raise ParseError("expected an object", where)
    return x


def _list(x, where):
    if not isinstance(x, list):
        raise ParseError("expected a list", where)
    return x


def _keys(obj, required, where, optional=()):
    for k in required:
        if k not in obj:
            raise ParseError(f"missing key {k!r}", where)
    extra = set(obj) - set(required) - set(optional)
    if extra:
        raise ParseError(f"unexpected key {sorted(extra)[0]!r}", where)


def parse_text(text: str) -> Diagram:
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    except RecursionError:
        raise ParseError("document nested too deeply") from None
    return parse_document(doc)


def parse_file(path) -> Diagram:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return parse_text(text)


def parse_document(doc) -> Diagram:
    _obj(doc, "$")
    _keys(doc, ("groups", "maps", "diagram"), "$")

    groups: Dict[str, FpAbGroup] = {}
    for name, spec in _obj(doc["groups"], "$.groups").items():
        where = f"$.groups.{name}"
        _obj(spec, where)
        _keys(spec, ("gens",), where, optional=("relations",))
        n = _int(spec["gens"], where + ".gens")
        if n < 0:
            raise ParseError("gens must be non-negative", where + ".gens")
        cols = []
        for j, col in enumerate(_list(spec.get("relations", []), where + ".relations")):
            cw = f"{where}.relations[{j}]"
            _list(col, cw)
            if len(col) != n:
                raise ParseError(f"relation has length {len(col)}, expected {n}", cw)
            cols.append([_int(x, f"{cw}[{i}]") for i, x in enumerate(col)])
        groups[name] = make_group(n, cols)

    maps: Dict[str, Hom] = {}
    for name, spec in _obj(doc["maps"], "$.maps").items():
        where = f"$.maps.{name}"
        _obj(spec, where)
        _keys(spec, ("from", "to", "matrix"), where)
        ends = []
        for key in ("from", "to"):
            g = spec[key]
            if not isinstance(g, str) or g not in groups:
                raise ParseError(f"unknown group {g!r}", f"{where}.{key}")
            ends.append(groups[g])
        src, tgt = ends
        rows = _list(spec["matrix"], where + ".matrix")
        if len(rows) != tgt.n_gens:
            raise ParseError(f"matrix has {len(rows)} rows, expected {tgt.n_gens}", where + ".matrix")
        data = []
        for i, row in enumerate(rows):
            rw = f"{where}.matrix[{i}]"
            _list(row, rw)
            if len(row) != src.n_gens:
                raise ParseError(f"row has {len(row)} entries, expected {src.n_gens}", rw)
            data.append([_int(x, f"{rw}[{j}]") for j, x in enumerate(row)])
        try:
            maps[name] = Hom(src, tgt, IntMatrix(data, rows=tgt.n_gens, cols=src.n_gens))
        except IllDefined as exc:
            raise IllDefined(f"map {name!r}: {exc}") from None

    dspec = _obj(doc["diagram"], "$.diagram")
    kind = dspec.get("kind")
    if kind not in KINDS:
        raise ParseError(f"unknown diagram kind {kind!r}", "$.diagram.kind")
    roles = KINDS[kind]
    _keys(dspec, ("kind",) + roles, "$.diagram")
    bound = {}
    for r in roles:
        name = dspec[r]
        if not isinstance(name, str) or name not in maps:
            raise ParseError(f"unknown map {name!r}", f"$.diagram.{r}")
        bound[r] = maps[name]
    if kind == "snake":
        return SnakeDiagram(**bound)
    if kind == "four":
        return FourDiagram(**bound)
    if bound["alpha"].target != bound["beta"].source:
        raise ContractError("alpha and beta are not composable")
    return RingPair(**bound)


def kind_of(d: Diagram) -> str:
    if isinstance(d, SnakeDiagram):
        return "snake"
    if isinstance(d, FourDiagram):
        return "four"
    return "ring"


def group_to_json(g: FpAbGroup) -> dict:
    return {"gens": g.n_gens, "relations": [list(c) for c in g.relations.vectors()]}


def matrix_to_json(m: IntMatrix) -> list:
    return [list(r) for r in m.tolist()]


def to_document(d: Diagram) -> dict:
    """Serialize a diagram.  Groups are named by first use, maps by role."""
    kind = kind_of(d)
    homs = d.homs()
    groups, names = {}, {}

    def name_of(g):
        for n, h in names.items():
            if h == g:
                return n
        n = f"G{len(names)}"
        names[n] = g
        groups[n] = group_to_json(g)
        return n

    maps = {}
    for role in KINDS[kind]:
        h = homs[role]
        maps[role] = {"from": name_of(h.source), "to": name_of(h.target),
                      "matrix": matrix_to_json(h.matrix)}
    diagram = {"kind": kind}
    diagram.update({r: r for r in KINDS[kind]})
    return {"groups": groups, "maps": maps, "diagram": diagram}


def dumps(d: Diagram) -> str:
    return json.dumps(to_document(d), indent=1, sort_keys=True)
