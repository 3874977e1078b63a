"""JSON document formats for every object the command line consumes.

One object per file.  Terms and formulas use the fields `kind`, `node`,
`children`, `var`, `bound` (plus `name`/`value` payloads); flows, programs,
games and reductions are tagged by `kind` and carry their components under
named fields.  Ordinals travel as their canonical text form.
"""

from __future__ import annotations

import json
from typing import Any

from . import ordinals as o
from .errors import OrdflowError
from .flows import KFlow, OrdinalFlow
from .formulas import Formula
from .games import Game, Reduction1, Reduction2
from .search import LSProgram, PLS1Program, PLS2Program
from .terms import Term


class FormatError(OrdflowError):
    """Malformed document."""


def term_to_obj(t: Term) -> dict:
    out: dict[str, Any] = {"kind": "term", "node": t.op}
    if t.op == "var":
        out["var"] = t.name
    elif t.op == "const":
        out["value"] = t.value
    else:
        if t.name is not None:
            out["name"] = t.name
        out["children"] = [term_to_obj(a) for a in t.args]
    return out


def term_from_obj(obj) -> Term:
    _expect(obj, "term")
    node = obj.get("node")
    try:
        if node == "var":
            return Term("var", name=_field(obj, "var"))
        if node == "const":
            return Term("const", value=int(_field(obj, "value")))
        args = tuple(term_from_obj(c) for c in obj.get("children", []))
        return Term(node, args, name=obj.get("name"))
    except (OrdflowError, TypeError, ValueError) as e:
        raise FormatError(f"bad term node {node!r}: {e}") from None


def formula_to_obj(f: Formula) -> dict:
    out: dict[str, Any] = {"kind": "formula", "node": f.node}
    if f.terms:
        out["children"] = [term_to_obj(t) for t in f.terms]
    elif f.children:
        out["children"] = [formula_to_obj(c) for c in f.children]
    if f.var is not None:
        out["var"] = f.var
    if f.bound is not None:
        out["bound"] = term_to_obj(f.bound)
    return out


def formula_from_obj(obj) -> Formula:
    _expect(obj, "formula")
    node = obj.get("node")
    kids = obj.get("children", [])
    try:
        if node in ("eq", "le", "not_eq", "not_le"):
            return Formula(node, terms=tuple(term_from_obj(c) for c in kids))
        children = tuple(formula_from_obj(c) for c in kids)
        bound = term_from_obj(obj["bound"]) if "bound" in obj else None
        return Formula(node, children, var=obj.get("var"), bound=bound)
    except (OrdflowError, TypeError, ValueError, KeyError) as e:
        raise FormatError(f"bad formula node {node!r}: {e}") from None


def _expect(obj, kind):
    if not isinstance(obj, dict) or obj.get("kind") != kind:
        raise FormatError(f"expected a {kind} object")


def _field(obj, name):
    try:
        return obj[name]
    except (KeyError, TypeError):
        raise FormatError(f"missing field {name!r}") from None


def flow_to_obj(F) -> dict:
    if isinstance(F, OrdinalFlow):
        return {
            "kind": "ordinal_flow",
            "H": formula_to_obj(F.H),
            "step_var": F.gamma_var,
            "beta": o.print_ordinal(F.beta),
            "source": formula_to_obj(F.source),
            "target": formula_to_obj(F.target),
        }
    return {
        "kind": "k_flow",
        "H": formula_to_obj(F.H),
        "step_var": F.step_var,
        "length": term_to_obj(F.length),
        "k": F.k,
        "source": formula_to_obj(F.source),
        "target": formula_to_obj(F.target),
    }


def flow_from_obj(obj):
    kind = obj.get("kind") if isinstance(obj, dict) else None
    if kind == "ordinal_flow":
        try:
            beta = o.parse_ordinal(_field(obj, "beta"))
        except OrdflowError as e:
            raise FormatError(f"bad beta: {e}") from None
        return _build(OrdinalFlow,
                      H=formula_from_obj(_field(obj, "H")),
                      gamma_var=_field(obj, "step_var"),
                      beta=beta,
                      source=formula_from_obj(_field(obj, "source")),
                      target=formula_from_obj(_field(obj, "target")))
    if kind == "k_flow":
        return _build(KFlow,
                      H=formula_from_obj(_field(obj, "H")),
                      step_var=_field(obj, "step_var"),
                      length=term_from_obj(_field(obj, "length")),
                      k=int(_field(obj, "k")),
                      source=formula_from_obj(_field(obj, "source")),
                      target=formula_from_obj(_field(obj, "target")))
    raise FormatError(f"not a flow document: kind={kind!r}")


def _build(cls, **kwargs):
    try:
        return cls(**kwargs)
    except (OrdflowError, ValueError, TypeError) as e:
        raise FormatError(f"invalid {cls.__name__}: {e}") from None


def game_to_obj(G: Game) -> dict:
    return {
        "kind": "game",
        "phi": formula_to_obj(G.phi),
        "bound": term_to_obj(G.bound),
        "x_vars": list(G.x_vars),
        "move_vars": list(G.move_vars),
        "turns": G.turns,
    }


def game_from_obj(obj) -> Game:
    _expect(obj, "game")
    return _build(Game,
                  phi=formula_from_obj(_field(obj, "phi")),
                  bound=term_from_obj(_field(obj, "bound")),
                  x_vars=tuple(_field(obj, "x_vars")),
                  move_vars=tuple(_field(obj, "move_vars")),
                  turns=int(_field(obj, "turns")))


def reduction_to_obj(R) -> dict:
    if isinstance(R, Reduction1):
        return {"kind": "reduction1", "f": term_to_obj(R.f), "y_var": R.y_var}
    return {
        "kind": "reduction2",
        "f_list": [term_to_obj(f) for f in R.f_list],
        "g": term_to_obj(R.g),
        "y_var": R.y_var,
        "w_vars": list(R.w_vars),
    }


def reduction_from_obj(obj):
    kind = obj.get("kind") if isinstance(obj, dict) else None
    if kind == "reduction1":
        return _build(Reduction1, f=term_from_obj(_field(obj, "f")),
                      y_var=_field(obj, "y_var"))
    if kind == "reduction2":
        return _build(Reduction2,
                      f_list=tuple(term_from_obj(f) for f in _field(obj, "f_list")),
                      g=term_from_obj(_field(obj, "g")),
                      y_var=_field(obj, "y_var"),
                      w_vars=tuple(_field(obj, "w_vars")))
    raise FormatError(f"not a reduction document: kind={kind!r}")


def program_to_obj(P) -> dict:
    if isinstance(P, LSProgram):
        return {
            "kind": "ls",
            "A": formula_to_obj(P.A),
            "x_vars": list(P.x_vars),
            "y_vars": list(P.y_vars),
            "z_vars": list(P.z_vars),
            "gamma_var": P.gamma_var,
            "init": [term_to_obj(t) for t in P.init],
            "G": formula_to_obj(P.G),
            "step": [term_to_obj(t) for t in P.step],
            "clock": term_to_obj(P.clock),
            "project": [term_to_obj(t) for t in P.project],
            "beta": o.print_ordinal(P.beta),
        }
    if isinstance(P, PLS1Program):
        return {
            "kind": "pls1",
            "A": formula_to_obj(P.A),
            "x_vars": list(P.x_vars),
            "y_var": P.y_var,
            "u_var": P.u_var,
            "z_var": P.z_var,
            "bound": term_to_obj(P.bound),
            "init": term_to_obj(P.init),
            "G": formula_to_obj(P.G),
            "step": term_to_obj(P.step),
            "project": term_to_obj(P.project),
            "length": term_to_obj(P.length),
            "out_bound": term_to_obj(P.out_bound),
            "k": P.k,
        }
    return {
        "kind": "pls2",
        "game": game_to_obj(P.game),
        "u_var": P.u_var,
        "init": reduction_to_obj(P.init),
        "step": reduction_to_obj(P.step),
        "final": reduction_to_obj(P.final),
        "length": term_to_obj(P.length),
        "target_A": formula_to_obj(P.target_A),
        "target_bound": term_to_obj(P.target_bound),
        "target_move_vars": list(P.target_move_vars),
        "k": P.k,
    }


def program_from_obj(obj):
    kind = obj.get("kind") if isinstance(obj, dict) else None
    if kind == "ls":
        try:
            beta = o.parse_ordinal(_field(obj, "beta"))
        except OrdflowError as e:
            raise FormatError(f"bad beta: {e}") from None
        return _build(LSProgram,
                      A=formula_from_obj(_field(obj, "A")),
                      x_vars=tuple(_field(obj, "x_vars")),
                      y_vars=tuple(_field(obj, "y_vars")),
                      z_vars=tuple(_field(obj, "z_vars")),
                      gamma_var=_field(obj, "gamma_var"),
                      init=tuple(term_from_obj(t) for t in _field(obj, "init")),
                      G=formula_from_obj(_field(obj, "G")),
                      step=tuple(term_from_obj(t) for t in _field(obj, "step")),
                      clock=term_from_obj(_field(obj, "clock")),
                      project=tuple(term_from_obj(t) for t in _field(obj, "project")),
                      beta=beta)
    if kind == "pls1":
        return _build(PLS1Program,
                      A=formula_from_obj(_field(obj, "A")),
                      x_vars=tuple(_field(obj, "x_vars")),
                      y_var=_field(obj, "y_var"),
                      u_var=_field(obj, "u_var"),
                      z_var=_field(obj, "z_var"),
                      bound=term_from_obj(_field(obj, "bound")),
                      init=term_from_obj(_field(obj, "init")),
                      G=formula_from_obj(_field(obj, "G")),
                      step=term_from_obj(_field(obj, "step")),
                      project=term_from_obj(_field(obj, "project")),
                      length=term_from_obj(_field(obj, "length")),
                      out_bound=term_from_obj(_field(obj, "out_bound")),
                      k=int(_field(obj, "k")))
    if kind == "pls2":
        return _build(PLS2Program,
                      game=game_from_obj(_field(obj, "game")),
                      u_var=_field(obj, "u_var"),
                      init=reduction_from_obj(_field(obj, "init")),
                      step=reduction_from_obj(_field(obj, "step")),
                      final=reduction_from_obj(_field(obj, "final")),
                      length=term_from_obj(_field(obj, "length")),
                      target_A=formula_from_obj(_field(obj, "target_A")),
                      target_bound=term_from_obj(_field(obj, "target_bound")),
                      target_move_vars=tuple(_field(obj, "target_move_vars")),
                      k=int(_field(obj, "k")))
    raise FormatError(f"not a program document: kind={kind!r}")


_DISPATCH = {
    "term": term_from_obj,
    "formula": formula_from_obj,
    "ordinal_flow": flow_from_obj,
    "k_flow": flow_from_obj,
    "game": game_from_obj,
    "reduction1": reduction_from_obj,
    "reduction2": reduction_from_obj,
    "ls": program_from_obj,
    "pls1": program_from_obj,
    "pls2": program_from_obj,
}


def to_obj(x) -> dict:
    if isinstance(x, Term):
        return term_to_obj(x)
    if isinstance(x, Formula):
        return formula_to_obj(x)
    if isinstance(x, (OrdinalFlow, KFlow)):
        return flow_to_obj(x)
    if isinstance(x, Game):
        return game_to_obj(x)
    if isinstance(x, (Reduction1, Reduction2)):
        return reduction_to_obj(x)
    if isinstance(x, (LSProgram, PLS1Program, PLS2Program)):
        return program_to_obj(x)
    raise FormatError(f"no document form for {type(x).__name__}")


def from_obj(obj):
    kind = obj.get("kind") if isinstance(obj, dict) else None
    if kind not in _DISPATCH:
        raise FormatError(f"unknown document kind {kind!r}")
    return _DISPATCH[kind](obj)


def dumps(x) -> str:
    return json.dumps(to_obj(x), indent=2, sort_keys=True)


def loads(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"not valid JSON: {e}") from None
    return from_obj(obj)


def load_path(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e}") from None
    return loads(text)


def dump_path(x, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(x) + "\n")
