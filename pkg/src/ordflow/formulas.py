"""Formulas in De Morgan normal form with brute-force bounded evaluation.

Negation lives only on atoms.  Bounded quantifiers carry their bound term;
unbounded quantifiers are evaluated over [0, domain_bound] and the verdict
records whether the outcome actually depended on that truncation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ArityError, UnboundVariable
from .terms import (
    FunctionRegistry,
    Term,
    eval_term,
    free_vars as term_free_vars,
    subst_term,
    var,
)

_LEAVES = ("true", "false")
_ATOMS = ("eq", "le", "not_eq", "not_le")
_BINARY = ("and", "or")
_QUANT = ("forall", "exists", "bounded_forall", "bounded_exists")


@dataclass(frozen=True, slots=True)
class Formula:
    node: str
    children: tuple["Formula", ...] = ()
    terms: tuple[Term, ...] = ()     # the two sides of an atom
    var: str | None = None           # quantified variable
    bound: Term | None = None        # bound term of a bounded quantifier

    def __post_init__(self):
        n = self.node
        if n in _LEAVES:
            ok = not self.children and not self.terms
        elif n in _ATOMS:
            ok = not self.children and len(self.terms) == 2
        elif n in _BINARY:
            ok = len(self.children) == 2 and not self.terms
        elif n in ("forall", "exists"):
            ok = len(self.children) == 1 and self.var is not None and self.bound is None
        elif n in ("bounded_forall", "bounded_exists"):
            ok = len(self.children) == 1 and self.var is not None and self.bound is not None
        else:
            raise ArityError(f"unknown formula node {n!r}")
        if not ok:
            raise ArityError(f"malformed {n} node")

    def __repr__(self):
        return f"Formula<{formula_to_text(self)}>"


TRUE = Formula("true")
FALSE = Formula("false")


def eq(t: Term, s: Term) -> Formula:
    return Formula("eq", terms=(t, s))


def le(t: Term, s: Term) -> Formula:
    return Formula("le", terms=(t, s))


def not_eq(t: Term, s: Term) -> Formula:
    return Formula("not_eq", terms=(t, s))


def not_le(t: Term, s: Term) -> Formula:
    return Formula("not_le", terms=(t, s))


def conj(a: Formula, b: Formula) -> Formula:
    return Formula("and", (a, b))


def disj(a: Formula, b: Formula) -> Formula:
    return Formula("or", (a, b))


def forall(v: str, body: Formula) -> Formula:
    return Formula("forall", (body,), var=v)


def exists(v: str, body: Formula) -> Formula:
    return Formula("exists", (body,), var=v)


def bounded_forall(v: str, bound: Term, body: Formula) -> Formula:
    return Formula("bounded_forall", (body,), var=v, bound=bound)


def bounded_exists(v: str, bound: Term, body: Formula) -> Formula:
    return Formula("bounded_exists", (body,), var=v, bound=bound)


def big_and(parts: list[Formula]) -> Formula:
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = conj(out, p)
    return out


def big_or(parts: list[Formula]) -> Formula:
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = disj(out, p)
    return out


def implies(a: Formula, b: Formula) -> Formula:
    """a -> b rendered as negate(a) v b."""
    return disj(negate(a), b)


def negate(f: Formula) -> Formula:
    """De Morgan dual; involutive on the normal form."""
    n = f.node
    if n == "true":
        return FALSE
    if n == "false":
        return TRUE
    if n == "eq":
        return Formula("not_eq", terms=f.terms)
    if n == "not_eq":
        return Formula("eq", terms=f.terms)
    if n == "le":
        return Formula("not_le", terms=f.terms)
    if n == "not_le":
        return Formula("le", terms=f.terms)
    if n == "and":
        return Formula("or", tuple(negate(c) for c in f.children))
    if n == "or":
        return Formula("and", tuple(negate(c) for c in f.children))
    if n == "forall":
        return Formula("exists", (negate(f.children[0]),), var=f.var)
    if n == "exists":
        return Formula("forall", (negate(f.children[0]),), var=f.var)
    if n == "bounded_forall":
        return Formula("bounded_exists", (negate(f.children[0]),), var=f.var, bound=f.bound)
    if n == "bounded_exists":
        return Formula("bounded_forall", (negate(f.children[0]),), var=f.var, bound=f.bound)
    raise AssertionError(n)


# -- classification ----------------------------------------------------------

QF = "QF"
FORALL1 = "Forall1"
EXISTS1 = "Exists1"


@dataclass(frozen=True, slots=True)
class ClassTags:
    """Class membership summary of a formula.

    sigma/pi are the least k with membership in the k-th existential-first /
    universal-first bounded-block class, or None when the formula has an
    unbounded quantifier and belongs to neither hierarchy.
    """

    qf: bool
    forall1: bool
    exists1: bool
    sigma: int | None
    pi: int | None

    def as_set(self) -> set[str]:
        out = set()
        if self.qf:
            out.add(QF)
        if self.forall1:
            out.add(FORALL1)
        if self.exists1:
            out.add(EXISTS1)
        if self.sigma is not None:
            out.add(f"SigmaHat({self.sigma})")
        if self.pi is not None:
            out.add(f"PiHat({self.pi})")
        return out


def _ranks(f: Formula) -> tuple[int | None, int | None]:
    n = f.node
    if n in _LEAVES or n in _ATOMS:
        return 0, 0
    if n in _BINARY:
        pairs = [_ranks(c) for c in f.children]
        if any(s is None for s, _ in pairs):
            return None, None
        return max(s for s, _ in pairs), max(p for _, p in pairs)
    if n in ("forall", "exists"):
        return None, None
    s, p = _ranks(f.children[0])
    if s is None:
        return None, None
    if n == "bounded_exists":
        s2 = max(1, s)
        return s2, s2 + 1
    p2 = max(1, p)  # bounded_forall
    return p2 + 1, p2


def classify(f: Formula) -> ClassTags:
    sigma, pi = _ranks(f)
    has_exists = _contains(f, ("exists", "bounded_exists"))
    has_forall = _contains(f, ("forall", "bounded_forall"))
    return ClassTags(
        qf=not has_exists and not has_forall,
        forall1=not has_exists,
        exists1=not has_forall,
        sigma=sigma,
        pi=pi,
    )


def _contains(f: Formula, nodes) -> bool:
    if f.node in nodes:
        return True
    return any(_contains(c, nodes) for c in f.children)


def in_pi_hat(f: Formula, k: int) -> bool:
    pi = classify(f).pi
    return pi is not None and pi <= k


# -- evaluation --------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Verdict:
    value: bool
    exact: bool

    def __bool__(self):
        return self.value


def eval_formula(
    f: Formula,
    env: dict[str, int],
    domain_bound: int,
    registry: FunctionRegistry | None = None,
) -> Verdict:
    """Truth over the naturals, with unbounded quantifiers truncated to
    [0, domain_bound].

    The verdict is exact unless its value actually rests on the truncation:
    a definite counterexample below the bound keeps a universal formula
    exactly false, while a universal formula that survived the truncated
    range is only inexactly true (dually for existentials).
    """
    n = f.node
    if n == "true":
        return Verdict(True, True)
    if n == "false":
        return Verdict(False, True)
    if n in _ATOMS:
        a = eval_term(f.terms[0], env, registry)
        b = eval_term(f.terms[1], env, registry)
        if n == "eq":
            return Verdict(a == b, True)
        if n == "not_eq":
            return Verdict(a != b, True)
        if n == "le":
            return Verdict(a <= b, True)
        return Verdict(a > b, True)
    if n == "and":
        return _combine(
            (eval_formula(c, env, domain_bound, registry) for c in f.children),
            decisive=False)
    if n == "or":
        return _combine(
            (eval_formula(c, env, domain_bound, registry) for c in f.children),
            decisive=True)
    body = f.children[0]
    if n in ("bounded_forall", "bounded_exists"):
        limit = eval_term(f.bound, env, registry)
        truncated = False
    else:
        limit = domain_bound
        truncated = True
    want = n in ("exists", "bounded_exists")
    verdicts = (
        eval_formula(body, {**env, f.var: i}, domain_bound, registry)
        for i in range(limit + 1)
    )
    out = _combine(verdicts, decisive=want)
    if truncated and out.value != want and out.exact:
        # the quantifier ranged over a truncated domain and no decisive
        # witness/counterexample appeared, so the verdict is approximate
        return Verdict(out.value, False)
    return out


def _combine(verdicts, decisive: bool) -> Verdict:
    """Fold verdicts for a conjunction (decisive=False: a False child decides)
    or disjunction (decisive=True: a True child decides)."""
    all_exact = True
    saw_inexact_decider = False
    for v in verdicts:
        if v.value == decisive:
            if v.exact:
                return Verdict(decisive, True)
            saw_inexact_decider = True
        if not v.exact:
            all_exact = False
    if saw_inexact_decider:
        return Verdict(decisive, False)
    return Verdict(not decisive, all_exact)


# -- substitution ------------------------------------------------------------


def free_vars(f: Formula) -> set[str]:
    if f.node in _ATOMS:
        return term_free_vars(f.terms[0]) | term_free_vars(f.terms[1])
    if f.node in _LEAVES:
        return set()
    out: set[str] = set()
    for c in f.children:
        out |= free_vars(c)
    if f.node in _QUANT:
        out.discard(f.var)
    if f.bound is not None:
        out |= term_free_vars(f.bound)
    return out


def fresh_name(base: str, taken: set[str]) -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}_{i}" in taken:
        i += 1
    return f"{base}_{i}"


def substitute(f: Formula, name: str, replacement: Term) -> Formula:
    """Capture-avoiding substitution of a term for a free variable."""
    n = f.node
    if n in _LEAVES:
        return f
    if n in _ATOMS:
        return Formula(n, terms=(
            subst_term(f.terms[0], name, replacement),
            subst_term(f.terms[1], name, replacement)))
    if n in _BINARY:
        return Formula(n, tuple(substitute(c, name, replacement) for c in f.children))
    bound = subst_term(f.bound, name, replacement) if f.bound is not None else None
    body = f.children[0]
    if f.var == name:
        return Formula(n, (body,), var=f.var, bound=bound)
    if f.var in term_free_vars(replacement) and name in free_vars(body):
        taken = free_vars(body) | term_free_vars(replacement) | {name}
        new_var = fresh_name(f.var, taken)
        body = substitute(body, f.var, var(new_var))
        return Formula(n, (substitute(body, name, replacement),), var=new_var, bound=bound)
    return Formula(n, (substitute(body, name, replacement),), var=f.var, bound=bound)


def rename_var(f: Formula, old: str, new: str) -> Formula:
    return substitute(f, old, var(new))


# -- prenexing of purely universal formulas ----------------------------------


def prenex_universal(f: Formula, taken: set[str] | None = None) -> tuple[list[str], Formula]:
    """Pull every universal quantifier of a Forall1 formula to the front.

    Returns the quantifier prefix (fresh, pairwise distinct names) and the
    quantifier-free matrix.  Bounded universals unfold to guarded
    disjunctions first.  Uses the classical equivalence of 'or' with
    universal quantification over disjoint variables.
    """
    from .errors import ClassViolation

    if taken is None:
        taken = set(free_vars(f))
    n = f.node
    if n in _LEAVES or n in _ATOMS:
        return [], f
    if n in _BINARY:
        lv, lm = prenex_universal(f.children[0], taken)
        taken = taken | set(lv) | free_vars(lm)
        rv, rm = prenex_universal(f.children[1], taken)
        return lv + rv, Formula(n, (lm, rm))
    if n == "forall":
        name = fresh_name(f.var, taken)
        body = rename_var(f.children[0], f.var, name) if name != f.var else f.children[0]
        inner_vars, matrix = prenex_universal(body, taken | {name})
        return [name] + inner_vars, matrix
    if n == "bounded_forall":
        guarded = disj(not_le(var(f.var), f.bound), f.children[0])
        return prenex_universal(forall(f.var, guarded), taken)
    raise ClassViolation(f"not a purely universal formula: {n}")


# -- grids -------------------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """A finite family of environments plus the truncation bound used for
    unbounded quantifiers during evaluation."""

    envs: tuple[dict[str, int], ...]
    domain_bound: int = 16

    @staticmethod
    def cube(names, bound: int, domain_bound: int | None = None) -> "Grid":
        names = list(names)
        envs = tuple(
            dict(zip(names, point))
            for point in itertools.product(range(bound + 1), repeat=len(names))
        )
        return Grid(envs, domain_bound if domain_bound is not None else bound)

    @staticmethod
    def single(env: dict[str, int] | None = None, domain_bound: int = 16) -> "Grid":
        return Grid((dict(env or {}),), domain_bound)

    def __iter__(self):
        return iter(self.envs)


def grid_equivalent(
    a: Formula,
    b: Formula,
    grid: Grid,
    registry: FunctionRegistry | None = None,
):
    """None when the two formulas agree at every grid point, else the first
    disagreeing environment (boolean agreement, tolerance zero)."""
    for env in grid:
        va = eval_formula(a, env, grid.domain_bound, registry)
        vb = eval_formula(b, env, grid.domain_bound, registry)
        if va.value != vb.value:
            return env
    return None


def grid_valid(
    f: Formula,
    grid: Grid,
    registry: FunctionRegistry | None = None,
):
    """None when the formula holds at every grid point, else the first
    failing environment."""
    for env in grid:
        if not eval_formula(f, env, grid.domain_bound, registry).value:
            return env
    return None


def formula_to_text(f: Formula) -> str:
    from .terms import term_to_text

    n = f.node
    if n == "true":
        return "T"
    if n == "false":
        return "F"
    rels = {"eq": "=", "le": "<=", "not_eq": "!=", "not_le": ">"}
    if n in rels:
        return f"{term_to_text(f.terms[0])} {rels[n]} {term_to_text(f.terms[1])}"
    if n == "and":
        return f"({formula_to_text(f.children[0])} & {formula_to_text(f.children[1])})"
    if n == "or":
        return f"({formula_to_text(f.children[0])} | {formula_to_text(f.children[1])})"
    if n == "forall":
        return f"(all {f.var}. {formula_to_text(f.children[0])})"
    if n == "exists":
        return f"(some {f.var}. {formula_to_text(f.children[0])})"
    from .terms import term_to_text as tt
    if n == "bounded_forall":
        return f"(all {f.var}<={tt(f.bound)}. {formula_to_text(f.children[0])})"
    return f"(some {f.var}<={tt(f.bound)}. {formula_to_text(f.children[0])})"
