"""Term AST and evaluation for a small bounded-arithmetic language.

Terms denote natural numbers.  All function symbols are total: subtraction
truncates, division by zero yields zero, and the ordinal-code primitives
treat invalid codes as the code of the zero ordinal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import ordinals as o
from .errors import ArityError, BoundViolation, UnboundVariable, UnknownFunction

ARITIES = {
    "var": 0,
    "const": 0,
    "succ": 1,
    "add": 2,
    "mul": 2,
    "monus": 2,
    "floor_half": 1,
    "bitlen": 1,
    "exp2": 1,
    "shr": 2,
    "div": 2,
    "pair": 2,
    "proj1": 1,
    "proj2": 1,
    "cond_eq_zero": 3,
    "call": None,  # checked against the registry at evaluation time
    "ocmp_less": 2,
    "oadd": 2,
    "omul": 2,
    "omonus": 2,
    "odiv": 2,
    "o_embed": 1,
    "ocode_valid": 1,
}


@dataclass(frozen=True, slots=True)
class Term:
    op: str
    args: tuple["Term", ...] = ()
    name: str | None = None   # variable or called-function name
    value: int | None = None  # constant payload

    def __post_init__(self):
        if self.op not in ARITIES:
            raise ArityError(f"unknown term operator {self.op!r}")
        want = ARITIES[self.op]
        if want is not None and len(self.args) != want:
            raise ArityError(f"{self.op} expects {want} arguments, got {len(self.args)}")

    def __repr__(self):
        return f"Term<{term_to_text(self)}>"


def var(name: str) -> Term:
    return Term("var", name=name)


def const(n: int) -> Term:
    if n < 0:
        raise ValueError("constants are naturals")
    return Term("const", value=n)


def _mk(op):
    def build(*args: Term) -> Term:
        return Term(op, tuple(args))
    build.__name__ = op
    return build


succ = _mk("succ")
add = _mk("add")
mul = _mk("mul")
monus = _mk("monus")
floor_half = _mk("floor_half")
bitlen = _mk("bitlen")
exp2 = _mk("exp2")
shr = _mk("shr")
div = _mk("div")
pair = _mk("pair")
proj1 = _mk("proj1")
proj2 = _mk("proj2")
cond_eq_zero = _mk("cond_eq_zero")
ocmp_less = _mk("ocmp_less")
oadd = _mk("oadd")
omul = _mk("omul")
omonus = _mk("omonus")
odiv = _mk("odiv")
o_embed = _mk("o_embed")
ocode_valid = _mk("ocode_valid")


def call(name: str, *args: Term) -> Term:
    return Term("call", tuple(args), name=name)


def ord_const(a: o.Ordinal) -> Term:
    """The code of a fixed ordinal as a constant."""
    return const(o.encode(a))


def cantor_pair(x: int, y: int) -> int:
    return (x + y) * (x + y + 1) // 2 + y


def cantor_proj(z: int) -> tuple[int, int]:
    w = (math.isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


@dataclass(frozen=True, slots=True)
class DefinedFunction:
    """A registered function, either by recursion on notation or plain.

    Recursive form (step is not None): params (w, x1..xn) with
        f(0, x...) = base(x...)
        f(w, x...) = step[w, rec := f(floor(w/2), x...), x...]   for w > 0
    where `rec_var` names the recursive value inside `step`.

    Plain form (step is None): f(params) = base evaluated with the params.

    `bound` is a term over the params; registration checks result <= bound
    on a sample grid and evaluation enforces nothing further.
    """

    name: str
    params: tuple[str, ...]
    base: Term
    bound: Term
    step: Term | None = None
    rec_var: str = "rec"

    @property
    def arity(self) -> int:
        return len(self.params)


class FunctionRegistry:
    """Write-once name table for defined functions."""

    def __init__(self):
        self._fns: dict[str, DefinedFunction] = {}

    def get(self, name: str) -> DefinedFunction:
        try:
            return self._fns[name]
        except KeyError:
            raise UnknownFunction(name) from None

    def register(self, fn: DefinedFunction, check_grid: int = 8) -> DefinedFunction:
        """Add a function after checking its bound on a small grid."""
        if fn.name in self._fns:
            raise ValueError(f"{fn.name} already registered")
        probe = FunctionRegistry()
        probe._fns = dict(self._fns)
        probe._fns[fn.name] = fn
        for point in _grid_points(fn.arity, check_grid):
            env = dict(zip(fn.params, point))
            got = eval_term(call(fn.name, *[const(v) for v in point]), env, probe)
            limit = eval_term(fn.bound, env, probe)
            if got > limit:
                raise BoundViolation(
                    f"{fn.name}{point} = {got} exceeds its bound {limit}")
        self._fns[fn.name] = fn
        return fn


def _grid_points(arity, bound):
    if arity == 0:
        yield ()
        return
    for head in range(bound + 1):
        for tail in _grid_points(arity - 1, bound):
            yield (head,) + tail


DEFAULT_REGISTRY = FunctionRegistry()


def eval_term(t: Term, env: dict[str, int], registry: FunctionRegistry | None = None) -> int:
    registry = registry if registry is not None else DEFAULT_REGISTRY
    op = t.op
    if op == "var":
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    if op == "const":
        return t.value
    a = [eval_term(s, env, registry) for s in t.args]
    if op == "succ":
        return a[0] + 1
    if op == "add":
        return a[0] + a[1]
    if op == "mul":
        return a[0] * a[1]
    if op == "monus":
        return a[0] - a[1] if a[0] > a[1] else 0
    if op == "floor_half":
        return a[0] // 2
    if op == "bitlen":
        return a[0].bit_length()
    if op == "exp2":
        return 1 << a[0]
    if op == "shr":
        return a[0] >> a[1] if a[1] < a[0].bit_length() else 0
    if op == "div":
        return a[0] // a[1] if a[1] else 0
    if op == "pair":
        return cantor_pair(a[0], a[1])
    if op == "proj1":
        return cantor_proj(a[0])[0]
    if op == "proj2":
        return cantor_proj(a[0])[1]
    if op == "cond_eq_zero":
        return a[1] if a[0] == 0 else a[2]
    if op == "ocmp_less":
        return 1 if o.compare(o.decode_total(a[0]), o.decode_total(a[1])) == o.LESS else 0
    if op == "oadd":
        return o.encode(o.add(o.decode_total(a[0]), o.decode_total(a[1])))
    if op == "omul":
        return o.encode(o.mul(o.decode_total(a[0]), o.decode_total(a[1])))
    if op == "omonus":
        return o.encode(o.monus(o.decode_total(a[0]), o.decode_total(a[1])))
    if op == "odiv":
        # stays total: a zero (or invalid) divisor yields the zero code
        x, y = o.decode_total(a[0]), o.decode_total(a[1])
        return o.encode(o.div_left(x, y)) if y != o.ZERO else o.encode(o.ZERO)
    if op == "o_embed":
        return o.encode(o.from_nat(a[0]))
    if op == "ocode_valid":
        return 1 if o.is_valid_code(a[0]) else 0
    if op == "call":
        fn = registry.get(t.name)
        if len(a) != fn.arity:
            raise ArityError(f"{t.name} expects {fn.arity} arguments, got {len(a)}")
        return _eval_call(fn, a, registry)
    raise AssertionError(op)


def _eval_call(fn: DefinedFunction, args: list[int], registry: FunctionRegistry) -> int:
    if fn.step is None:
        return eval_term(fn.base, dict(zip(fn.params, args)), registry)
    w, rest = args[0], args[1:]
    rest_env = dict(zip(fn.params[1:], rest))
    if w == 0:
        return eval_term(fn.base, rest_env, registry)
    rec = _eval_call(fn, [w // 2] + rest, registry)
    env = {fn.params[0]: w, fn.rec_var: rec, **rest_env}
    return eval_term(fn.step, env, registry)


def free_vars(t: Term) -> set[str]:
    if t.op == "var":
        return {t.name}
    out: set[str] = set()
    for s in t.args:
        out |= free_vars(s)
    return out


def subst_term(t: Term, name: str, replacement: Term) -> Term:
    if t.op == "var":
        return replacement if t.name == name else t
    if not t.args:
        return t
    return Term(t.op, tuple(subst_term(s, name, replacement) for s in t.args),
                name=t.name, value=t.value)


def is_polynomial(t: Term) -> bool:
    """Syntactically a polynomial in the bit-lengths of variables: built
    from constants and bitlen(var) by addition and multiplication."""
    if t.op == "const":
        return True
    if t.op == "bitlen":
        return t.args[0].op == "var"
    if t.op in ("add", "mul"):
        return all(is_polynomial(s) for s in t.args)
    if t.op == "succ":
        return is_polynomial(t.args[0])
    return False


def bitlen_bound(t: Term, registry: FunctionRegistry | None = None) -> Term:
    """A polynomial (in the sense of is_polynomial) bounding the bit-length
    of the term's value for all natural assignments.  Raises NotPolynomial
    for operators whose growth escapes every such bound."""
    from .errors import NotPolynomial

    op = t.op
    if op == "const":
        return const(t.value.bit_length())
    if op == "var":
        return bitlen(t)
    if op == "succ":
        return add(bitlen_bound(t.args[0], registry), const(1))
    if op == "add":
        return add(add(bitlen_bound(t.args[0], registry),
                       bitlen_bound(t.args[1], registry)), const(1))
    if op == "mul":
        return add(bitlen_bound(t.args[0], registry),
                   bitlen_bound(t.args[1], registry))
    if op in ("monus", "floor_half", "shr", "div", "proj1", "proj2", "bitlen"):
        return bitlen_bound(t.args[0], registry)
    if op == "pair":
        inner = add(add(bitlen_bound(t.args[0], registry),
                        bitlen_bound(t.args[1], registry)), const(2))
        return mul(const(2), inner)
    if op == "cond_eq_zero":
        return add(bitlen_bound(t.args[1], registry),
                   bitlen_bound(t.args[2], registry))
    if op == "exp2":
        return add(value_bound(t.args[0], registry), const(1))
    if op == "call":
        reg = registry if registry is not None else DEFAULT_REGISTRY
        fn = reg.get(t.name)
        body = fn.bound
        for p, arg in zip(fn.params, t.args):
            body = subst_term(body, p, arg)
        return bitlen_bound(body, registry)
    raise NotPolynomial(f"no polynomial bit-length bound for {op}")


def value_bound(t: Term, registry: FunctionRegistry | None = None) -> Term:
    """A polynomial (in the sense of is_polynomial) bounding the value of
    the term itself; only exists for terms of polynomially bounded value,
    such as combinations of bit-lengths."""
    from .errors import NotPolynomial

    op = t.op
    if op == "const":
        return t
    if op == "bitlen":
        return bitlen_bound(t.args[0], registry)
    if op == "succ":
        return add(value_bound(t.args[0], registry), const(1))
    if op == "add":
        return add(value_bound(t.args[0], registry),
                   value_bound(t.args[1], registry))
    if op == "mul":
        return mul(value_bound(t.args[0], registry),
                   value_bound(t.args[1], registry))
    if op in ("monus", "floor_half", "shr", "div"):
        return value_bound(t.args[0], registry)
    if op == "cond_eq_zero":
        return add(value_bound(t.args[1], registry),
                   value_bound(t.args[2], registry))
    raise NotPolynomial(f"no polynomial value bound for {op}")


def term_to_text(t: Term) -> str:
    if t.op == "var":
        return t.name
    if t.op == "const":
        return str(t.value)
    infix = {"add": "+", "mul": "*", "monus": "-."}
    if t.op in infix:
        x, y = (term_to_text(s) for s in t.args)
        return f"({x} {infix[t.op]} {y})"
    head = t.name if t.op == "call" else t.op
    return f"{head}({', '.join(term_to_text(s) for s in t.args)})"
