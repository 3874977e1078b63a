"""Ordinal flows and k-flows: construction, combination, and checking.

A flow is a step formula together with a length: an ordinal for ordinal
flows (the step index is an ordinal-code variable) and a term for k-flows
(the step index is a natural-number variable).  Every combinator builds the
step formula of its output explicitly from the step formulas of its inputs;
`check_ordinal_flow` and `check_kflow` verify the endpoint equivalences and
step implications by exhaustive evaluation over a grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from . import ordinals as o
from .errors import (
    BoundViolation,
    ClassViolation,
    EndpointMismatch,
    FreeVariableViolation,
    NotPolynomial,
    ShapeViolation,
)
from .formulas import (
    FALSE,
    Formula,
    Grid,
    TRUE,
    Verdict,
    big_and,
    big_or,
    bounded_forall,
    classify,
    conj,
    disj,
    eq,
    eval_formula,
    forall,
    fresh_name,
    free_vars,
    grid_equivalent,
    implies,
    in_pi_hat,
    le,
    negate,
    not_le,
    substitute,
)
from .terms import (
    Term,
    add,
    bitlen,
    bitlen_bound,
    const,
    div,
    exp2,
    eval_term,
    is_polynomial,
    monus,
    mul,
    ocmp_less,
    ocode_valid,
    odiv,
    omonus,
    omul,
    ord_const,
    shr,
    subst_term,
    var,
)
from .terms import free_vars as term_free_vars

DEFAULT_CODE_BOUND = 200


@dataclass(frozen=True)
class OrdinalFlow:
    """Step formula H over an ordinal-code variable, with ordinal length."""

    H: Formula
    gamma_var: str
    beta: o.Ordinal
    source: Formula
    target: Formula

    def __post_init__(self):
        if o.compare(self.beta, o.ONE) == o.LESS:
            raise ValueError("flow length must be >= 1")
        for f in (self.H, self.source, self.target):
            if not classify(f).forall1:
                raise ClassViolation("ordinal flows live in the universal fragment")

    @property
    def params(self) -> set[str]:
        return free_vars(self.H) - {self.gamma_var}

    def at(self, ordinal: o.Ordinal) -> Formula:
        return substitute(self.H, self.gamma_var, ord_const(ordinal))


@dataclass(frozen=True)
class KFlow:
    """Step formula H over a natural step variable, with term length."""

    H: Formula
    step_var: str
    length: Term
    k: int
    source: Formula
    target: Formula

    def __post_init__(self):
        if not in_pi_hat(self.H, self.k):
            raise ClassViolation(f"step formula is not PiHat({self.k})")

    @property
    def polynomial(self) -> bool:
        return is_polynomial(self.length)

    @property
    def params(self) -> set[str]:
        return (free_vars(self.H) | term_free_vars(self.length)) - {self.step_var}


Flow = Union[OrdinalFlow, KFlow]


@dataclass(frozen=True)
class Counterexample:
    condition: str
    index: object  # step index: an Ordinal, an int, or None
    env: dict


@dataclass(frozen=True)
class FlowVerdict:
    valid: bool
    exact: bool
    counterexample: Optional[Counterexample] = None

    def __bool__(self):
        return self.valid


# -- checking ----------------------------------------------------------------


def check_kflow(F: KFlow, grid: Grid, registry=None) -> FlowVerdict:
    """Endpoint equivalences at u=0 and u=length, and every step implication
    H(u) -> H(u+1) for u < length, per grid environment.  Conditions are
    scanned source, target, then steps; the first failure is reported.
    """
    exact = True
    for env in grid:
        env = {k: v for k, v in env.items() if k != F.step_var}
        sv = eval_formula(F.source, env, grid.domain_bound, registry)
        hv = eval_formula(F.H, {**env, F.step_var: 0}, grid.domain_bound, registry)
        exact &= sv.exact and hv.exact
        if sv.value != hv.value:
            return FlowVerdict(False, exact, Counterexample("source", 0, env))
    for env in grid:
        env = {k: v for k, v in env.items() if k != F.step_var}
        t_val = eval_term(F.length, env, registry)
        tv = eval_formula(F.target, env, grid.domain_bound, registry)
        hv = eval_formula(F.H, {**env, F.step_var: t_val}, grid.domain_bound, registry)
        exact &= tv.exact and hv.exact
        if tv.value != hv.value:
            return FlowVerdict(False, exact, Counterexample("target", t_val, env))
    for env in grid:
        env = {k: v for k, v in env.items() if k != F.step_var}
        t_val = eval_term(F.length, env, registry)
        prev = eval_formula(F.H, {**env, F.step_var: 0}, grid.domain_bound, registry)
        for u in range(t_val):
            nxt = eval_formula(F.H, {**env, F.step_var: u + 1},
                               grid.domain_bound, registry)
            exact &= prev.exact and nxt.exact
            if prev.value and not nxt.value:
                return FlowVerdict(False, exact, Counterexample("step", u, env))
            prev = nxt
    return FlowVerdict(True, exact, None)


def _codes_fully_cover(beta: o.Ordinal, code_bound: int) -> bool:
    if o.is_limit(beta) or any(e.terms for e, _ in beta.terms):
        return False  # infinitely many ordinals below
    n = o.to_nat(beta)
    return all(o.encode(o.from_nat(i)) <= code_bound for i in range(n + 1))


def check_ordinal_flow(F: OrdinalFlow, grid: Grid,
                       code_bound: int = DEFAULT_CODE_BOUND,
                       registry=None) -> FlowVerdict:
    """Ordinal-flow conditions checked over the ordinals whose codes fit
    below `code_bound`.

    The step condition for each enumerated delta in [1, beta] (beta itself is
    always included) assumes H at every enumerated gamma < delta.  When the
    codes below the bound do not exhaust [0, beta], the verdict is inexact.
    """
    exact = _codes_fully_cover(F.beta, code_bound)
    small = o.ordinals_with_code_upto(code_bound)
    deltas = [d for d in small
              if o.compare(d, o.ZERO) == o.GREATER and o.compare(d, F.beta) != o.GREATER]
    if F.beta not in deltas:
        deltas.append(F.beta)

    for env in grid:
        env = {k: v for k, v in env.items() if k != F.gamma_var}
        sv = eval_formula(F.source, env, grid.domain_bound, registry)
        hv = eval_formula(F.at(o.ZERO), env, grid.domain_bound, registry)
        exact &= sv.exact and hv.exact
        if sv.value != hv.value:
            return FlowVerdict(False, exact, Counterexample("source", o.ZERO, env))
    for env in grid:
        env = {k: v for k, v in env.items() if k != F.gamma_var}
        tv = eval_formula(F.target, env, grid.domain_bound, registry)
        hv = eval_formula(F.at(F.beta), env, grid.domain_bound, registry)
        exact &= tv.exact and hv.exact
        if tv.value != hv.value:
            return FlowVerdict(False, exact, Counterexample("target", F.beta, env))
    for env in grid:
        env = {k: v for k, v in env.items() if k != F.gamma_var}
        cache: dict[o.Ordinal, Verdict] = {}

        def h_at(d: o.Ordinal) -> Verdict:
            if d not in cache:
                cache[d] = eval_formula(F.at(d), env, grid.domain_bound, registry)
            return cache[d]

        for delta in deltas:
            hyp = True
            for gamma in small:
                if o.compare(gamma, delta) != o.LESS:
                    continue
                v = h_at(gamma)
                exact &= v.exact
                if not v.value:
                    hyp = False
                    break
            if hyp:
                v = h_at(delta)
                exact &= v.exact
                if not v.value:
                    return FlowVerdict(False, exact,
                                       Counterexample("step", delta, env))
    return FlowVerdict(True, exact, None)


def check_flow(F: Flow, grid: Grid, code_bound: int = DEFAULT_CODE_BOUND,
               registry=None) -> FlowVerdict:
    if isinstance(F, OrdinalFlow):
        return check_ordinal_flow(F, grid, code_bound, registry)
    return check_kflow(F, grid, registry)


# -- code-comparison atoms ---------------------------------------------------


def code_le(lhs: Term, rhs: Term) -> Formula:
    """decode(lhs) <= decode(rhs), as a single atom on codes."""
    return eq(ocmp_less(rhs, lhs), const(0))


def code_less(lhs: Term, rhs: Term) -> Formula:
    return eq(ocmp_less(lhs, rhs), const(1))


def code_eq(lhs: Term, rhs: Term) -> Formula:
    return conj(code_le(lhs, rhs), code_le(rhs, lhs))


# -- basic constructors ------------------------------------------------------


def _fresh(base: str, *formulas_and_terms) -> str:
    taken: set[str] = set()
    for item in formulas_and_terms:
        if isinstance(item, Formula):
            taken |= free_vars(item)
        elif isinstance(item, Term):
            taken |= term_free_vars(item)
    return fresh_name(base, taken)


def flow_from_implication(A: Formula, B: Formula, gamma_var: str | None = None) -> OrdinalFlow:
    """The length-1 flow (g=code(0) -> A) and (g=code(1) -> B).

    The result passes its check exactly when A -> B is valid on the grid.
    """
    for f in (A, B):
        if not classify(f).forall1:
            raise ClassViolation("endpoints must be universal formulas")
    g = gamma_var or _fresh("g", A, B)
    gv = var(g)
    H = conj(implies(eq(gv, ord_const(o.ZERO)), A),
             implies(eq(gv, ord_const(o.ONE)), B))
    return OrdinalFlow(H, g, o.ONE, A, B)


def kflow_from_implication(A: Formula, B: Formula, k: int,
                           step_var: str | None = None) -> KFlow:
    """The length-1 polynomial k-flow (u=0 -> A) and (u=1 -> B)."""
    for f in (A, B):
        if not in_pi_hat(f, k):
            raise ClassViolation(f"endpoints must be PiHat({k})")
    u = step_var or _fresh("u", A, B)
    uv = var(u)
    H = conj(implies(eq(uv, const(0)), A), implies(eq(uv, const(1)), B))
    return KFlow(H, u, const(1), k, A, B)


def flow_and_context(F: Flow, C: Formula) -> Flow:
    """Conjoin a context to the step formula and both endpoints."""
    if isinstance(F, OrdinalFlow):
        if not classify(C).forall1:
            raise ClassViolation("context must be universal")
        if F.gamma_var in free_vars(C):
            raise FreeVariableViolation("context mentions the step variable")
        return OrdinalFlow(conj(F.H, C), F.gamma_var, F.beta,
                           conj(F.source, C), conj(F.target, C))
    if not in_pi_hat(C, F.k):
        raise ClassViolation(f"context must be PiHat({F.k})")
    if F.step_var in free_vars(C):
        raise FreeVariableViolation("context mentions the step variable")
    return KFlow(conj(F.H, C), F.step_var, F.length, F.k,
                 conj(F.source, C), conj(F.target, C))


def flow_or_context(F: Flow, C: Formula) -> Flow:
    """Disjoin a context to the step formula and both endpoints."""
    if isinstance(F, OrdinalFlow):
        if not classify(C).forall1:
            raise ClassViolation("context must be universal")
        if F.gamma_var in free_vars(C):
            raise FreeVariableViolation("context mentions the step variable")
        return OrdinalFlow(disj(F.H, C), F.gamma_var, F.beta,
                           disj(F.source, C), disj(F.target, C))
    if not in_pi_hat(C, F.k):
        raise ClassViolation(f"context must be PiHat({F.k})")
    if F.step_var in free_vars(C):
        raise FreeVariableViolation("context mentions the step variable")
    return KFlow(disj(F.H, C), F.step_var, F.length, F.k,
                 disj(F.source, C), disj(F.target, C))


# -- gluing ------------------------------------------------------------------


def _require_seam(a: Formula, b: Formula, grid: Grid, what: str, registry=None):
    bad = grid_equivalent(a, b, grid, registry)
    if bad is not None:
        raise EndpointMismatch(f"{what} differ at {bad}", bad)


def glue_seq_ordinal(F1: OrdinalFlow, F2: OrdinalFlow, grid: Grid,
                     registry=None) -> OrdinalFlow:
    """Sequential gluing: length beta + beta', case split at beta."""
    _require_seam(F1.target, F2.source, grid, "gluing seam endpoints", registry)
    beta2 = o.add(F1.beta, F2.beta)
    g = _fresh("g", F1.H, F2.H)
    gv = var(g)
    b1 = ord_const(F1.beta)
    b2 = ord_const(beta2)
    left = implies(code_le(gv, b1), substitute(F1.H, F1.gamma_var, gv))
    shifted = substitute(F2.H, F2.gamma_var, omonus(gv, b1))
    right = implies(conj(code_less(b1, gv), code_le(gv, b2)), shifted)
    return OrdinalFlow(conj(left, right), g, beta2, F1.source, F2.target)


def glue_seq_k(F1: KFlow, F2: KFlow, grid: Grid, registry=None) -> KFlow:
    """Sequential gluing: length t + t' + 1, case split at t."""
    _require_seam(F1.target, F2.source, grid, "gluing seam endpoints", registry)
    u = _fresh("u", F1.H, F2.H, F1.length, F2.length)
    uv = var(u)
    t1 = F1.length
    left = implies(le(uv, t1), substitute(F1.H, F1.step_var, uv))
    shifted = substitute(F2.H, F2.step_var, monus(uv, add(t1, const(1))))
    right = implies(not_le(uv, t1), shifted)
    length = add(add(t1, F2.length), const(1))
    return KFlow(conj(left, right), u, length, max(F1.k, F2.k),
                 F1.source, F2.target)


# -- transfinite iteration ---------------------------------------------------


def ordinal_progress_formula(Gamma: list[Formula], delta_var: str,
                             inner_var: str, A: Formula) -> Formula:
    """The limit-compatible shape: (and Gamma) and (for every valid code
    g < delta) A(g)."""
    gv, dv = var(inner_var), var(delta_var)
    guard_fails = disj(eq(ocode_valid(gv), const(0)),
                       eq(ocmp_less(gv, dv), const(0)))
    quantified = forall(inner_var, disj(guard_fails, A))
    if not Gamma:
        return quantified
    return conj(big_and(Gamma), quantified)


def _match_progress_shape(B: Formula, delta_var: str):
    """Recognize the exact shape produced by ordinal_progress_formula."""
    gamma_part = None
    quantified = B
    if B.node == "and":
        gamma_part, quantified = B.children
    if quantified.node != "forall":
        raise ShapeViolation("no universal bound-below-delta part")
    inner = quantified.var
    body = quantified.children[0]
    want_guard = disj(eq(ocode_valid(var(inner)), const(0)),
                      eq(ocmp_less(var(inner), var(delta_var)), const(0)))
    if body.node != "or" or body.children[0] != want_guard:
        raise ShapeViolation("universal part is not guarded by code < delta")
    if gamma_part is not None and delta_var in free_vars(gamma_part):
        raise ShapeViolation("context part depends on the stage variable")
    return gamma_part, inner, body.children[1]


def transfinite_iterate(step: OrdinalFlow, B: Formula, delta_var: str,
                        theta: o.Ordinal, grid: Grid,
                        code_bound: int = DEFAULT_CODE_BOUND,
                        registry=None) -> OrdinalFlow:
    """Iterate a flow from B(delta) to B(delta+1) through every stage below
    theta+1, producing a flow from B(0) to B(theta+1) of length
    beta*(theta+1).

    B must have the limit-compatible shape built by
    ordinal_progress_formula; the step flow's endpoints are grid-checked
    against B(delta) and B(delta+1) with delta ranging over enumerated
    codes.
    """
    _match_progress_shape(B, delta_var)
    if delta_var == step.gamma_var:
        raise ValueError("stage variable collides with the step variable")
    expect_src = B
    expect_tgt = substitute(B, delta_var, _code_succ(var(delta_var)))
    stage_grid = _extend_grid_with_codes(grid, delta_var, code_bound)
    _require_seam(step.source, expect_src, stage_grid, "iteration source", registry)
    _require_seam(step.target, expect_tgt, stage_grid, "iteration target", registry)

    beta = step.beta
    bhat = ord_const(beta)
    tau = _fresh("t", step.H, B)
    tv = var(tau)
    quotient = odiv(tv, bhat)
    remainder = omonus(tv, omul(bhat, quotient))
    H = substitute(step.H, step.gamma_var, remainder)
    H = substitute(H, delta_var, quotient)
    length = o.mul(beta, o.add(theta, o.ONE))
    source = substitute(B, delta_var, ord_const(o.ZERO))
    target = substitute(B, delta_var, ord_const(o.add(theta, o.ONE)))
    return OrdinalFlow(H, tau, length, source, target)


def _code_succ(t: Term) -> Term:
    return Term("oadd", (t, ord_const(o.ONE)))


def _extend_grid_with_codes(grid: Grid, name: str, code_bound: int,
                            cap: int = 12) -> Grid:
    codes = [o.encode(d) for d in o.ordinals_with_code_upto(code_bound)[:cap]]
    envs = tuple({**env, name: c} for env in grid.envs for c in codes)
    return Grid(envs, grid.domain_bound)


def extend_grid(grid: Grid, name: str, upper: int) -> Grid:
    envs = tuple({**env, name: v} for env in grid.envs for v in range(upper + 1))
    return Grid(envs, grid.domain_bound)


# -- padding and parameter bounding ------------------------------------------


def pad(F: KFlow, s: Term, grid: Grid, registry=None) -> KFlow:
    """Stretch a k-flow to a longer length: past the old length the step
    formula pins the target."""
    for env in grid:
        env = {k: v for k, v in env.items() if k != F.step_var}
        if eval_term(F.length, env, registry) > eval_term(s, env, registry):
            raise BoundViolation(f"new length is shorter at {env}")
    u = _fresh("u", F.H, F.length, s, F.target)
    uv = var(u)
    H = conj(implies(le(uv, F.length), substitute(F.H, F.step_var, uv)),
             implies(not_le(uv, F.length), F.target))
    return KFlow(H, u, s, F.k, F.source, F.target)


def _simplify_bitlen_exp2(t: Term) -> Term:
    """Rewrite bitlen(exp2(e)) to e+1 so substituted lengths stay
    syntactically polynomial."""
    if t.op == "bitlen" and t.args[0].op == "exp2":
        return add(_simplify_bitlen_exp2(t.args[0].args[0]), const(1))
    if not t.args:
        return t
    return Term(t.op, tuple(_simplify_bitlen_exp2(a) for a in t.args),
                name=t.name, value=t.value)


def bound_params(F: KFlow, y_var: str, s: Term, registry=None) -> tuple[Formula, Term]:
    """Make a flow's length independent of one parameter.

    Given a flow over (x, y) with a monotone length of value >= 1 (pad
    first), returns a step formula I(u, y, x) and a length term r(x) with:
    I at 0 equivalent to the source, I at r equivalent to the target for
    every y <= s, I monotone in u, and r >= 1.  r is the old length with y
    replaced by 2 to the power of a polynomial bound on the bit-length of s.
    """
    if y_var in term_free_vars(s):
        raise FreeVariableViolation("the bound may not depend on the bounded variable")
    q_s = bitlen_bound(s, registry)
    r = _simplify_bitlen_exp2(subst_term(F.length, y_var, exp2(q_s)))
    uv = var(F.step_var)
    I = conj(implies(le(uv, F.length), F.H),
             implies(not_le(uv, F.length), F.target))
    return I, r


def pad_monotone(F: KFlow, grid: Grid, registry=None) -> KFlow:
    """Normalize the length to a monotone term of value >= 1."""
    if _is_monotone_term(F.length):
        return pad(F, add(F.length, const(1)), grid, registry)
    return pad(F, exp2(bitlen_bound(F.length, registry)), grid, registry)


_MONOTONE_OPS = {"const", "var", "succ", "add", "mul", "bitlen", "exp2",
                 "floor_half", "pair"}


def _is_monotone_term(t: Term) -> bool:
    return t.op in _MONOTONE_OPS and all(_is_monotone_term(a) for a in t.args)


# -- strong gluing -----------------------------------------------------------


def halving_iteration_flow(Gamma: list[Formula], D: Formula, y_var: str,
                           stepF: KFlow, s: Term, grid: Grid,
                           registry=None) -> KFlow:
    """The core of polynomial strong gluing: iterate a flow from
    E(floor(y/2)) to E(y) down the binary expansion of s, giving a flow
    from E(0) to E(s) of length t' * bitlen(s), where E(y) = (and Gamma)
    and D(y) and t' is the y-independent length."""
    if not stepF.polynomial:
        raise NotPolynomial("polynomial strong gluing needs a polynomial step flow")
    E = big_and(Gamma + [D]) if Gamma else D
    y_grid = extend_grid(grid, y_var, grid.domain_bound)
    _require_seam(stepF.source,
                  substitute(E, y_var, Term("floor_half", (var(y_var),))),
                  y_grid, "halving source", registry)
    _require_seam(stepF.target, E, y_grid, "halving target", registry)

    padded = pad(stepF, add(stepF.length, const(1)), y_grid, registry)
    I, t_prime = bound_params(padded, y_var, mul(const(2), s), registry)

    u = _fresh("u", I, t_prime, s, E)
    uv = var(u)
    stage = div(uv, t_prime)
    y_of_u = shr(mul(const(2), s), monus(add(bitlen(s), const(1)),
                                         add(stage, const(1))))
    H = substitute(I, padded.step_var, monus(uv, mul(t_prime, stage)))
    H = substitute(H, y_var, y_of_u)
    length = mul(t_prime, bitlen(s))
    return KFlow(H, u, length, stepF.k,
                 substitute(E, y_var, const(0)), substitute(E, y_var, s))


def strong_glue_pind(Gamma: list[Formula], D: Formula, y_var: str,
                     stepF: KFlow, s: Term, grid: Grid,
                     registry=None) -> KFlow:
    """Polynomial strong gluing: from a polynomial flow from
    (and Gamma) and D(floor(y/2)) to (and Gamma) and D(y), build a
    polynomial flow from (and Gamma) and D(0) to D(s)."""
    core = halving_iteration_flow(Gamma, D, y_var, stepF, s, grid, registry)
    target = substitute(D, y_var, s)
    weaken = kflow_from_implication(core.target, target, stepF.k)
    glued = glue_seq_k(core, weaken, grid, registry)
    q_s = bitlen_bound(s, registry)
    t_prime = core.length.args[0]
    poly_len = add(add(mul(t_prime, q_s), const(1)), const(1))
    return pad(glued, poly_len, grid, registry)


def strong_glue_ind(Gamma: list[Formula], D: Formula, y_var: str,
                    stepF: KFlow, s: Term, grid: Grid,
                    registry=None) -> KFlow:
    """Strong gluing: from a flow from (and Gamma) and D(y) to
    (and Gamma) and D(y+1), build a flow from (and Gamma) and D(0) to
    D(s) by s successive gluings.  The length picks up a factor of s, so
    the polynomial marker is not preserved in general."""
    E = big_and(Gamma + [D]) if Gamma else D
    y_grid = extend_grid(grid, y_var, grid.domain_bound)
    _require_seam(stepF.source, E, y_grid, "successor source", registry)
    _require_seam(stepF.target,
                  substitute(E, y_var, Term("succ", (var(y_var),))),
                  y_grid, "successor target", registry)

    padded = pad_monotone(stepF, y_grid, registry)
    I, r = bound_params(padded, y_var, s, registry)

    u = _fresh("u", I, r, s, E)
    uv = var(u)
    stage = div(uv, r)
    H = substitute(I, padded.step_var, monus(uv, mul(r, stage)))
    H = substitute(H, y_var, stage)
    core = KFlow(H, u, mul(r, s), stepF.k,
                 substitute(E, y_var, const(0)), substitute(E, y_var, s))
    target = substitute(D, y_var, s)
    weaken = kflow_from_implication(core.target, target, stepF.k)
    return glue_seq_k(core, weaken, grid, registry)


# -- sequent-style rules -----------------------------------------------------


def _imp_flow_like(sample: Flow, A: Formula, B: Formula) -> Flow:
    if isinstance(sample, OrdinalFlow):
        return flow_from_implication(A, B)
    return kflow_from_implication(A, B, sample.k)


def _glue_like(F1: Flow, F2: Flow, grid: Grid, registry=None) -> Flow:
    if isinstance(F1, OrdinalFlow):
        return glue_seq_ordinal(F1, F2, grid, registry)
    return glue_seq_k(F1, F2, grid, registry)


def rule_conj_left(F: Flow, Gamma: list[Formula], A: Formula, B: Formula,
                   Delta: list[Formula], grid: Grid, side: str = "left",
                   registry=None) -> Flow:
    """From Gamma, A |> Delta (side="left") or Gamma, B |> Delta
    (side="right"), conclude Gamma, A and B |> Delta."""
    used = A if side == "left" else B
    pre = _imp_flow_like(F, big_and(Gamma + [conj(A, B)]), big_and(Gamma + [used]))
    return _glue_like(pre, F, grid, registry)


def rule_conj_right(F1: Flow, F2: Flow, Gamma: list[Formula], A: Formula,
                    B: Formula, Delta: list[Formula], grid: Grid,
                    registry=None) -> Flow:
    """From Gamma |> A, Delta and Gamma |> B, Delta conclude
    Gamma |> A and B, Delta."""
    G = big_and(Gamma)
    TA = big_or([A] + Delta)
    TB = big_or([B] + Delta)
    s1 = _imp_flow_like(F1, G, conj(G, G))
    s2 = flow_and_context(F1, G)
    s3 = flow_and_context(F2, TA)
    s4 = _imp_flow_like(F1, conj(TB, TA), big_or([conj(A, B)] + Delta))
    out = _glue_like(s1, s2, grid, registry)
    out = _glue_like(out, s3, grid, registry)
    return _glue_like(out, s4, grid, registry)


def rule_disj_right(F: Flow, Gamma: list[Formula], A: Formula, B: Formula,
                    Delta: list[Formula], grid: Grid, side: str = "left",
                    registry=None) -> Flow:
    """From Gamma |> A, Delta (side="left") or Gamma |> B, Delta
    (side="right"), conclude Gamma |> A or B, Delta."""
    used = A if side == "left" else B
    post = _imp_flow_like(F, big_or([used] + Delta), big_or([disj(A, B)] + Delta))
    return _glue_like(F, post, grid, registry)


def rule_disj_left(F1: Flow, F2: Flow, Gamma: list[Formula], A: Formula,
                   B: Formula, Delta: list[Formula], grid: Grid,
                   registry=None) -> Flow:
    """From Gamma, A |> Delta and Gamma, B |> Delta conclude
    Gamma, A or B |> Delta."""
    SA = big_and(Gamma + [A])
    SB = big_and(Gamma + [B])
    D = big_or(Delta)
    s1 = _imp_flow_like(F1, big_and(Gamma + [disj(A, B)]), disj(SA, SB))
    s2 = flow_or_context(F1, SB)
    s3 = flow_or_context(F2, D)
    s4 = _imp_flow_like(F1, disj(D, D), D)
    out = _glue_like(s1, s2, grid, registry)
    out = _glue_like(out, s3, grid, registry)
    return _glue_like(out, s4, grid, registry)


def neg_rule_left(F: KFlow, Gamma: list[Formula], A: Formula,
                  Delta: list[Formula], grid: Grid, registry=None) -> KFlow:
    """From Gamma, A |> Delta conclude Gamma |> not A, Delta.  Both A and
    its negation must lie in PiHat(k)."""
    notA = negate(A)
    if not (in_pi_hat(A, F.k) and in_pi_hat(notA, F.k)):
        raise ClassViolation(f"A and its negation must both be PiHat({F.k})")
    G = big_and(Gamma)
    s1 = kflow_from_implication(G, disj(big_and(Gamma + [A]), notA), F.k)
    s2 = flow_or_context(F, notA)
    s3 = kflow_from_implication(disj(big_or(Delta), notA),
                                big_or([notA] + Delta), F.k)
    out = glue_seq_k(s1, s2, grid, registry)
    return glue_seq_k(out, s3, grid, registry)


def neg_rule_right(F: KFlow, Gamma: list[Formula], A: Formula,
                   Delta: list[Formula], grid: Grid, registry=None) -> KFlow:
    """From Gamma |> A, Delta conclude Gamma, not A |> Delta."""
    notA = negate(A)
    if not (in_pi_hat(A, F.k) and in_pi_hat(notA, F.k)):
        raise ClassViolation(f"A and its negation must both be PiHat({F.k})")
    s1 = flow_and_context(F, notA)
    s2 = kflow_from_implication(conj(big_or([A] + Delta), notA),
                                big_or(Delta), F.k)
    out = glue_seq_k(s1, s2, grid, registry)
    # restate the source in canonical sequent form
    return KFlow(out.H, out.step_var, out.length, out.k,
                 big_and(Gamma + [notA]), out.target)


def bounded_forall_intro(F: KFlow, A: Formula, y_var: str, s: Term,
                         B: Formula, grid: Grid, registry=None) -> KFlow:
    """From a flow from A and (y <= s) to B(y), with A and s independent of
    y, build a flow from A to (for all y <= s) B(y)."""
    if y_var in free_vars(A):
        raise FreeVariableViolation("the context may not mention the quantified variable")
    if y_var in term_free_vars(s):
        raise FreeVariableViolation("the bound may not mention the quantified variable")
    guard = le(var(y_var), s)
    y_grid = extend_grid(grid, y_var, grid.domain_bound)
    shifted = neg_rule_left(F, [A], guard, [B], y_grid, registry)
    padded = pad(shifted, add(shifted.length, const(1)), y_grid, registry)
    I, r = bound_params(padded, y_var, s, registry)
    H = bounded_forall(y_var, s, I)
    k = max(F.k, 1)
    return KFlow(H, padded.step_var, r, k, A, bounded_forall(y_var, s, B))
