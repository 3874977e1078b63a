"""Local-search programs: ordinal-clocked, one-turn, and two-turn variants.

An ordinal program descends through ordinal levels from a starting level
beta down to zero, maintaining an invariant G and finally projecting a
solution of A.  The one-turn variant walks a fixed number of levels upward
under a state bound; the two-turn variant chains game reductions.  Each
executor re-checks every promised property as it runs and records failures
in its trace instead of assuming a validated program.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from . import ordinals as o
from .errors import (
    InvalidProgram,
    NotPolynomialLength,
    ShapeViolation,
    WitnessSearchFailed,
)
from .flows import Counterexample, FlowVerdict, Grid, OrdinalFlow
from .formulas import (
    FALSE,
    Formula,
    big_and,
    classify,
    conj,
    disj,
    eq,
    eval_formula,
    forall,
    grid_valid,
    negate,
    prenex_universal,
    substitute,
)
from .games import Game, Reduction2, check_reduction2, chi
from .terms import (
    DefinedFunction,
    FunctionRegistry,
    Term,
    add,
    bitlen,
    call,
    cond_eq_zero,
    const,
    eval_term,
    exp2,
    floor_half,
    is_polynomial,
    monus,
    mul,
    ocmp_less,
    ord_const,
    subst_term,
    var,
)
from .terms import free_vars as term_free_vars


# -- ordinal local search ------------------------------------------------------


@dataclass(frozen=True)
class LSProgram:
    """Ordinal-clocked local search for a solution of A(x, y).

    G(gamma, x, z) is the level invariant over an ordinal-code variable;
    the clock term computes the next (strictly smaller) level code and the
    step terms the next state; at level zero the projections produce y.
    """

    A: Formula
    x_vars: tuple[str, ...]
    y_vars: tuple[str, ...]
    z_vars: tuple[str, ...]
    gamma_var: str
    init: tuple[Term, ...]
    G: Formula
    step: tuple[Term, ...]
    clock: Term
    project: tuple[Term, ...]
    beta: o.Ordinal

    def __post_init__(self):
        if not classify(self.A).qf or not classify(self.G).qf:
            raise ShapeViolation("A and G must be quantifier-free")
        if len(self.init) != len(self.z_vars) or len(self.step) != len(self.z_vars):
            raise ShapeViolation("state arity mismatch")
        if len(self.project) != len(self.y_vars):
            raise ShapeViolation("projection arity mismatch")


@dataclass(frozen=True)
class DescentTrace:
    steps: tuple[tuple[o.Ordinal, tuple[int, ...]], ...]
    outcome: str                       # "success" or "violation"
    result: Optional[tuple[int, ...]] = None
    violation: Optional[tuple[str, int]] = None  # (kind, step index)

    @property
    def ok(self) -> bool:
        return self.outcome == "success"


LS_CONDITIONS = (
    "initial_invariant",      # G holds at level beta on the initial state
    "clock_descent",          # the clock strictly decreases nonzero levels
    "invariant_preservation", # the step preserves G across the clock move
    "projection_solution",    # at level zero the projection solves A
)


def _state_env(P: LSProgram, level: o.Ordinal, xs, zs) -> dict:
    env = dict(zip(P.x_vars, xs))
    env.update(zip(P.z_vars, zs))
    env[P.gamma_var] = o.encode(level)
    return env


def run_ls(P: LSProgram, xs: tuple[int, ...], domain_bound: int = 16,
           registry=None, max_steps: int = 100_000) -> DescentTrace:
    """Descend from beta to zero, checking every promise along the way."""
    level = P.beta
    state = tuple(eval_term(t, dict(zip(P.x_vars, xs)), registry) for t in P.init)
    steps = [(level, state)]
    idx = 0
    while level != o.ZERO:
        if idx >= max_steps:
            raise RuntimeError("descent exceeded the step budget")
        env = _state_env(P, level, xs, state)
        if not eval_formula(P.G, env, domain_bound, registry).value:
            return DescentTrace(tuple(steps), "violation",
                                violation=("invariant_preservation" if idx else
                                           "initial_invariant", idx))
        nxt = o.decode_total(eval_term(P.clock, env, registry))
        if o.compare(nxt, level) != o.LESS:
            return DescentTrace(tuple(steps), "violation",
                                violation=("non_descent", idx))
        state = tuple(eval_term(t, env, registry) for t in P.step)
        level = nxt
        steps.append((level, state))
        idx += 1
    env = _state_env(P, o.ZERO, xs, state)
    if not eval_formula(P.G, env, domain_bound, registry).value:
        return DescentTrace(tuple(steps), "violation",
                            violation=("invariant_preservation" if idx else
                                       "initial_invariant", idx))
    ys = tuple(eval_term(t, env, registry) for t in P.project)
    env_y = dict(zip(P.x_vars, xs))
    env_y.update(zip(P.y_vars, ys))
    if not eval_formula(P.A, env_y, domain_bound, registry).value:
        return DescentTrace(tuple(steps), "violation", violation=("solution", idx))
    return DescentTrace(tuple(steps), "success", result=ys)


def validate_ls(P: LSProgram, grid: Grid, code_bound: int = 200,
                registry=None) -> FlowVerdict:
    """Exhaustively check the four defining conditions over the grid and the
    levels up to beta whose codes fit below the bound."""
    from .flows import _codes_fully_cover

    exact = _codes_fully_cover(P.beta, code_bound)
    small = o.ordinals_with_code_upto(code_bound)
    levels = [d for d in small if o.compare(d, P.beta) != o.GREATER]
    if P.beta not in levels:
        levels.append(P.beta)
    nonzero = [d for d in levels if d != o.ZERO]

    x_envs = []
    for env in grid:
        xs = tuple(env[x] for x in P.x_vars)
        if xs not in {e for e in x_envs}:
            x_envs.append(xs)

    # condition 1: the initial state satisfies G at level beta
    for xs in x_envs:
        init_env = dict(zip(P.x_vars, xs))
        state = tuple(eval_term(t, init_env, registry) for t in P.init)
        env = _state_env(P, P.beta, xs, state)
        v = eval_formula(P.G, env, grid.domain_bound, registry)
        exact &= v.exact
        if not v.value:
            return FlowVerdict(False, exact, Counterexample(
                "initial_invariant", P.beta, dict(zip(P.x_vars, xs))))

    z_range = range(grid.domain_bound + 1)
    z_tuples = _tuples(z_range, len(P.z_vars))

    # condition 2: nonzero levels strictly descend under the clock
    for level in nonzero:
        for xs in x_envs:
            for zs in z_tuples:
                env = _state_env(P, level, xs, zs)
                nxt = o.decode_total(eval_term(P.clock, env, registry))
                if o.compare(nxt, level) != o.LESS:
                    return FlowVerdict(False, exact, Counterexample(
                        "clock_descent", level, env))

    # condition 3: the step carries G from a level to its clock successor
    for level in nonzero:
        for xs in x_envs:
            for zs in z_tuples:
                env = _state_env(P, level, xs, zs)
                g = eval_formula(P.G, env, grid.domain_bound, registry)
                exact &= g.exact
                if not g.value:
                    continue
                nxt = o.decode_total(eval_term(P.clock, env, registry))
                new_state = tuple(eval_term(t, env, registry) for t in P.step)
                env2 = _state_env(P, nxt, xs, new_state)
                g2 = eval_formula(P.G, env2, grid.domain_bound, registry)
                exact &= g2.exact
                if not g2.value:
                    return FlowVerdict(False, exact, Counterexample(
                        "invariant_preservation", level, env))

    # condition 4: at level zero the projection solves A
    for xs in x_envs:
        for zs in z_tuples:
            env = _state_env(P, o.ZERO, xs, zs)
            g = eval_formula(P.G, env, grid.domain_bound, registry)
            exact &= g.exact
            if not g.value:
                continue
            ys = tuple(eval_term(t, env, registry) for t in P.project)
            env_y = dict(zip(P.x_vars, xs))
            env_y.update(zip(P.y_vars, ys))
            a = eval_formula(P.A, env_y, grid.domain_bound, registry)
            exact &= a.exact
            if not a.value:
                return FlowVerdict(False, exact, Counterexample(
                    "projection_solution", o.ZERO, env))

    return FlowVerdict(True, exact, None)


def _tuples(rng, n):
    if n == 0:
        return [()]
    rest = _tuples(rng, n - 1)
    return [(v,) + t for v in rng for t in rest]


def ls_to_flow(P: LSProgram, grid: Grid, code_bound: int = 200,
               registry=None) -> OrdinalFlow:
    """The flow from (for all y, not A) to falsum whose step formula says
    no state satisfies G at the current level and no y solves A."""
    verdict = validate_ls(P, grid, code_bound, registry)
    if not verdict.valid:
        raise InvalidProgram(f"program fails {verdict.counterexample.condition}")
    no_state = negate(P.G)
    for z in reversed(P.z_vars):
        no_state = forall(z, no_state)
    no_solution = negate(P.A)
    for y in reversed(P.y_vars):
        no_solution = forall(y, no_solution)
    H = conj(no_state, no_solution)
    return OrdinalFlow(H, P.gamma_var, P.beta, no_solution, FALSE)


# Candidate terms tried for each missing Herbrand witness, in order.  The
# stage-dependent candidates for the clock witness additionally include the
# ordinal predecessor of the current level code.


def _witness_candidates(P_vars: list[str], code_vars: list[str]) -> list[Term]:
    out: list[Term] = [var(v) for v in P_vars]
    out.append(const(0))
    out.append(const(1))
    for v in code_vars:
        out.append(Term("omonus", (var(v), ord_const(o.ONE))))
        out.append(ord_const(o.ZERO))
    return out


def flow_to_ls(F: OrdinalFlow, grid: Grid, code_bound: int = 200,
               witnesses: dict | None = None, registry=None) -> LSProgram:
    """Extract a local-search program from a flow into falsum.

    The flow's source must be a block of universal quantifiers over the
    negation of a quantifier-free formula A; its step formula is prenexed
    into a matrix I over fresh state variables.  The construction needs
    one witness term per condition (solution witnesses Y, an initial state
    W, and a clock/state pair (Delta, Z)); absent explicit witnesses each
    is sought among a fixed candidate list and verified on the grid.
    """
    if grid_valid(negate(F.target), grid, registry) is not None:
        raise ShapeViolation("flow target is not falsum on the grid")
    y_vars, neg_matrix = prenex_universal(F.source)
    A = negate(neg_matrix)
    x_vars = sorted(F.params)

    z_vars, I = prenex_universal(F.H)
    gamma = F.gamma_var

    levels = [d for d in o.ordinals_with_code_upto(code_bound)
              if o.compare(d, F.beta) != o.GREATER]
    if F.beta not in levels:
        levels.append(F.beta)
    nonzero = [d for d in levels if d != o.ZERO]

    witnesses = dict(witnesses or {})
    cand_plain = _witness_candidates(x_vars + z_vars, [])
    cand_codes = _witness_candidates(x_vars + z_vars, [gamma])

    def search(name: str, arity: int, candidates: list[Term], test) -> tuple[Term, ...]:
        if name in witnesses:
            w = witnesses[name]
            w = tuple(w) if isinstance(w, (tuple, list)) else (w,)
            if test(w):
                return w
            raise WitnessSearchFailed(name, f"supplied witness fails {name}")
        for combo in _combos(candidates, arity):
            if test(combo):
                return combo
        raise WitnessSearchFailed(name)

    def holds(f: Formula, env) -> bool:
        return eval_formula(f, env, grid.domain_bound, registry).value

    # solution witness: not A(x, Y(x, z)) implies I(0, x, z)
    def test_Y(ws):
        cond = disj(_subst_many(A, y_vars, ws),
                    _subst_gamma(I, gamma, o.ZERO))
        return all(holds(cond, {**env, **zs})
                   for env in grid for zs in _z_envs(z_vars, grid.domain_bound))

    Y = search("solution", len(y_vars), cand_plain, test_Y)

    # initial witness: I(beta, x, W(x)) implies falsum
    def test_W(ws):
        inst = _subst_gamma(_subst_many(I, z_vars, ws), gamma, F.beta)
        return all(not holds(inst, env) for env in grid)

    W = search("initial", len(z_vars), cand_plain, test_W)

    # clock and state witnesses for the step condition
    def test_DZ(ws):
        delta_t, z_ts = ws[0], ws[1:]
        for env in grid:
            for level in nonzero:
                for zs in _z_envs(z_vars, grid.domain_bound):
                    e = {**env, **zs, gamma: o.encode(level)}
                    if holds(I, e):
                        continue
                    nxt = o.decode_total(eval_term(delta_t, e, registry))
                    if o.compare(nxt, level) != o.LESS:
                        return False
                    zvals = {z: eval_term(t, e, registry)
                             for z, t in zip(z_vars, z_ts)}
                    e2 = {**env, **zvals, gamma: o.encode(nxt)}
                    if holds(I, e2):
                        return False
        return True

    DZ = search("step", 1 + len(z_vars), cand_codes, test_DZ)
    Delta, Z = DZ[0], DZ[1:]

    G = conj(negate(I), eq(ocmp_less(ord_const(F.beta), var(gamma)), const(0)))
    clock = cond_eq_zero(chi(G), ord_const(o.ZERO), Delta)
    return LSProgram(
        A=A, x_vars=tuple(x_vars), y_vars=tuple(y_vars), z_vars=tuple(z_vars),
        gamma_var=gamma, init=W, G=G, step=Z, clock=clock, project=Y,
        beta=F.beta)


def _combos(candidates, arity):
    if arity == 0:
        yield ()
        return
    for head in candidates:
        for tail in _combos(candidates, arity - 1):
            yield (head,) + tail


def _subst_many(f: Formula, names, ts) -> Formula:
    for n, t in zip(names, ts):
        f = substitute(f, n, t)
    return f


def _subst_gamma(f: Formula, gamma: str, level: o.Ordinal) -> Formula:
    return substitute(f, gamma, ord_const(level))


def _z_envs(z_vars, bound):
    return [dict(zip(z_vars, t)) for t in _tuples(range(bound + 1), len(z_vars))]


# -- one-turn programs ---------------------------------------------------------


@dataclass(frozen=True)
class PLS1Program:
    """Level-by-level walk of a bounded state with a final projection."""

    A: Formula                 # solution predicate over (x, y)
    x_vars: tuple[str, ...]
    y_var: str
    u_var: str
    z_var: str
    bound: Term                # state bound s(x)
    init: Term
    G: Formula                 # invariant over (x, u, z)
    step: Term                 # N(x, u, z)
    project: Term              # p(x, z)
    length: Term               # t(x)
    out_bound: Term            # r(x)
    k: int

    def __post_init__(self):
        ranks = classify(self.A)
        if ranks.pi is None or ranks.pi > max(self.k - 1, 0):
            raise ShapeViolation(
                f"solution predicate must be PiHat({max(self.k - 1, 0)})")

    @property
    def polynomial(self) -> bool:
        return is_polynomial(self.length)


PLS1_CONDITIONS = (
    "init_bounded",        # i(x) <= s(x)
    "init_invariant",      # G(x, 0, i(x))
    "step_bounded",        # N stays below s on bounded states
    "step_invariant",      # G(x,u,z) -> G(x,u+1,N(x,u,z))
    "projection_bounded",  # p(x,z) <= r(x)
    "projection_solution", # G(x,t,z) -> A(x,p(x,z))
)


@dataclass(frozen=True)
class WalkTrace:
    states: tuple[int, ...]
    outcome: str
    result: Optional[int] = None
    violation: Optional[tuple[str, int]] = None

    @property
    def ok(self) -> bool:
        return self.outcome == "success"


def run_pls1(P: PLS1Program, xs: tuple[int, ...], domain_bound: int = 16,
             registry=None) -> WalkTrace:
    base = dict(zip(P.x_vars, xs))
    s = eval_term(P.bound, base, registry)
    t = eval_term(P.length, base, registry)
    z = eval_term(P.init, base, registry)
    states = [z]
    if z > s:
        return WalkTrace(tuple(states), "violation", violation=("bound", 0))
    for u in range(t + 1):
        env = {**base, P.u_var: u, P.z_var: z}
        if not eval_formula(P.G, env, domain_bound, registry).value:
            return WalkTrace(tuple(states), "violation", violation=("invariant", u))
        if u == t:
            break
        z = eval_term(P.step, env, registry)
        states.append(z)
        if z > s:
            return WalkTrace(tuple(states), "violation", violation=("bound", u + 1))
    env = {**base, P.u_var: t, P.z_var: z}
    y = eval_term(P.project, env, registry)
    if y > eval_term(P.out_bound, base, registry):
        return WalkTrace(tuple(states), "violation", violation=("output_bound", t))
    if not eval_formula(P.A, {**base, P.y_var: y}, domain_bound, registry).value:
        return WalkTrace(tuple(states), "violation", violation=("solution", t))
    return WalkTrace(tuple(states), "success", result=y)


def validate_pls1(P: PLS1Program, grid: Grid, registry=None) -> FlowVerdict:
    """Exhaustively check the six defining conditions; levels range over
    [0, t(x)] and states over [0, s(x)]."""
    exact = True
    for env in grid:
        base = {x: env[x] for x in P.x_vars}
        s = eval_term(P.bound, base, registry)
        t = eval_term(P.length, base, registry)
        r = eval_term(P.out_bound, base, registry)
        i0 = eval_term(P.init, base, registry)
        if i0 > s:
            return FlowVerdict(False, exact, Counterexample("init_bounded", 0, base))
        v = eval_formula(P.G, {**base, P.u_var: 0, P.z_var: i0},
                         grid.domain_bound, registry)
        exact &= v.exact
        if not v.value:
            return FlowVerdict(False, exact, Counterexample("init_invariant", 0, base))
        for u in range(t + 1):
            for z in range(s + 1):
                e = {**base, P.u_var: u, P.z_var: z}
                if u < t and eval_term(P.step, e, registry) > s:
                    return FlowVerdict(False, exact,
                                       Counterexample("step_bounded", u, e))
                g = eval_formula(P.G, e, grid.domain_bound, registry)
                exact &= g.exact
                if u < t and g.value:
                    z2 = eval_term(P.step, e, registry)
                    g2 = eval_formula(P.G, {**base, P.u_var: u + 1, P.z_var: z2},
                                      grid.domain_bound, registry)
                    exact &= g2.exact
                    if not g2.value:
                        return FlowVerdict(False, exact,
                                           Counterexample("step_invariant", u, e))
        for z in range(s + 1):
            e = {**base, P.u_var: t, P.z_var: z}
            y = eval_term(P.project, e, registry)
            if y > r:
                return FlowVerdict(False, exact,
                                   Counterexample("projection_bounded", t, e))
            g = eval_formula(P.G, e, grid.domain_bound, registry)
            exact &= g.exact
            if g.value:
                a = eval_formula(P.A, {**base, P.y_var: y},
                                 grid.domain_bound, registry)
                exact &= a.exact
                if not a.value:
                    return FlowVerdict(False, exact,
                                       Counterexample("projection_solution", t, e))
    return FlowVerdict(True, exact, None)


def compile_pls1(P: PLS1Program, registry: FunctionRegistry, grid: Grid,
                 name: str = "walk") -> DefinedFunction:
    """Pack a polynomial-length program into one defined function.

    Registers the recursion-on-notation walk M (M at 0 is the initial
    state; M at w applies the step at level bitlen(w)-1 to M at
    floor(w/2)), then the composed function computing the projection of M
    at floor(2^t / 2).  Returns the composed function.
    """
    if not P.polynomial:
        raise NotPolynomialLength("compilation needs a polynomial length term")
    verdict = validate_pls1(P, grid, None)
    if not verdict.valid:
        raise InvalidProgram(f"program fails {verdict.counterexample.condition}")
    w = "w" if "w" not in P.x_vars else "w0"
    m_name = f"{name}_m"
    step_body = subst_term(
        subst_term(P.step, P.u_var, monus(bitlen(var(w)), const(1))),
        P.z_var, var("rec"))
    M = DefinedFunction(
        name=m_name,
        params=(w,) + P.x_vars,
        base=P.init,
        step=step_body,
        bound=P.bound,
        rec_var="rec",
    )
    registry.register(M, check_grid=min(grid.domain_bound, 8))
    m_at_top = call(m_name, floor_half(exp2(P.length)), *[var(x) for x in P.x_vars])
    body = subst_term(subst_term(P.project, P.z_var, m_at_top),
                      P.u_var, P.length)
    f = DefinedFunction(
        name=name,
        params=P.x_vars,
        base=body,
        bound=P.out_bound,
        step=None,
    )
    registry.register(f, check_grid=min(grid.domain_bound, 8))
    return f


# -- two-turn programs ---------------------------------------------------------


@dataclass(frozen=True)
class PLS2Program:
    """A chain of two-turn game reductions from a trivially won game up to
    the target predicate."""

    game: Game                     # G(x, u, v, w) with the level u as a parameter
    u_var: str
    init: Reduction2               # from (G at level 0) to (top, s)
    step: Reduction2               # from (G at level u+1) to (G at level u)
    final: Reduction2              # from (A as a game, r) to (G at level t)
    length: Term                   # t(x)
    target_A: Formula              # A(x, y, z)
    target_bound: Term             # r(x)
    target_move_vars: tuple[str, str]
    k: int

    @property
    def polynomial(self) -> bool:
        return is_polynomial(self.length)


PLS2_CONDITIONS = ("init_reduction", "step_reduction", "final_reduction")


def _game_at_level(P: PLS2Program, level: Term) -> Game:
    phi = substitute(P.game.phi, P.u_var, level)
    return Game(phi, P.game.bound, P.game.x_vars, P.game.move_vars, P.game.turns)


def _top_game(P: PLS2Program) -> Game:
    from .formulas import TRUE
    return Game(TRUE, P.game.bound, P.game.x_vars, P.game.move_vars, 2)


def _target_game(P: PLS2Program) -> Game:
    return Game(P.target_A, P.target_bound, P.game.x_vars,
                P.target_move_vars, 2)


def validate_pls2(P: PLS2Program, grid: Grid, registry=None) -> FlowVerdict:
    """Brute-force the three reduction conditions."""
    exact = True
    v = check_reduction2(P.init, _game_at_level(P, const(0)), _top_game(P),
                         grid, registry)
    exact &= v.exact
    if not v.valid:
        return FlowVerdict(False, exact, Counterexample(
            "init_reduction", None, v.counterexample.env))
    for env in grid:
        t = eval_term(P.length, env, registry)
        for u in range(t):
            upper = _game_at_level(P, const(u + 1))
            lower = _game_at_level(P, const(u))
            v = check_reduction2(P.step, upper, lower, Grid((env,), grid.domain_bound),
                                 registry)
            exact &= v.exact
            if not v.valid:
                return FlowVerdict(False, exact, Counterexample(
                    "step_reduction", u, v.counterexample.env))
    for env in grid:
        t = eval_term(P.length, env, registry)
        v = check_reduction2(P.final, _target_game(P), _game_at_level(P, const(t)),
                             Grid((env,), grid.domain_bound), registry)
        exact &= v.exact
        if not v.valid:
            return FlowVerdict(False, exact, Counterexample(
                "final_reduction", None, v.counterexample.env))
    return FlowVerdict(True, exact, None)


Opponent = Callable[[str, Game, dict, int], int]


def adversarial_opponent(domain_bound: int = 16, registry=None) -> Opponent:
    """Answers each proposal with a falsifying second move when one exists,
    so a proposal survives exactly when it is a genuinely winning move."""

    def play(_label: str, game: Game, env: dict, first_move: int) -> int:
        limit = eval_term(game.bound, env, registry)
        v1, v2 = game.move_vars
        for w in range(limit + 1):
            verdict = eval_formula(game.phi, {**env, v1: first_move, v2: w},
                                   domain_bound, registry)
            if not verdict.value:
                return w
        return 0

    return play


@dataclass(frozen=True)
class GameTranscript:
    levels: tuple
    outcome: str
    winning_plays: tuple

    @property
    def ok(self) -> bool:
        return self.outcome == "success"


def run_pls2(P: PLS2Program, xs: tuple[int, ...],
             opponent: Opponent | None = None, domain_bound: int = 16,
             registry=None) -> GameTranscript:
    """Chain the reductions level by level against an opponent oracle.

    Every surviving first move of the current game is pushed through the
    next reduction; each proposed first move of the upper game is played
    against the opponent and kept when the played pair wins.  Against the
    default adversarial opponent the survivors are exactly the winning
    first moves, so a validated program ends with a winning play for the
    target game.
    """
    opponent = opponent or adversarial_opponent(domain_bound, registry)
    env = dict(zip(sorted(set(P.game.x_vars)), xs))
    levels = []

    def apply_reduction(red: Reduction2, upper: Game, lower: Game,
                        candidates: list[int], label: str) -> list[int]:
        survivors = []
        record = []
        for y in candidates:
            plays = red.propose_and_answer(
                upper, env, y,
                lambda v: opponent(label, upper, env, v),
                domain_bound, registry)
            for v1, w in plays:
                won = eval_formula(upper.phi,
                                   {**env, upper.move_vars[0]: v1,
                                    upper.move_vars[1]: w},
                                   domain_bound, registry).value
                record.append((y, v1, w, won))
                if won and v1 not in survivors:
                    survivors.append(v1)
        levels.append((label, tuple(record)))
        return survivors

    top = _top_game(P)
    candidates = apply_reduction(P.init, _game_at_level(P, const(0)), top,
                                 [0], "level 0")
    t = eval_term(P.length, env, registry)
    for u in range(t):
        candidates = apply_reduction(
            P.step, _game_at_level(P, const(u + 1)), _game_at_level(P, const(u)),
            candidates, f"level {u + 1}")
    target = _target_game(P)
    final = apply_reduction(P.final, target, _game_at_level(P, const(t)),
                            candidates, "target")
    wins = tuple(final)
    return GameTranscript(tuple(levels), "success" if wins else "violation", wins)
