"""One- and two-turn games, strategy search, and reductions between games.

A game is a quantifier-free win condition for the first player plus a move
bound; reductions transform winning strategies of one game into winning
strategies of another and every claimed property is checkable by brute
force over a grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import HerbrandDisjunctionFails, NotDisjoint, ShapeViolation
from .flows import Counterexample, FlowVerdict
from .formulas import (
    Formula,
    Grid,
    big_or,
    bounded_exists,
    classify,
    conj,
    disj,
    eval_formula,
    implies,
    le,
    negate,
    not_le,
    substitute,
)
from .terms import Term, add, cond_eq_zero, const, eval_term, monus, mul, var


@dataclass(frozen=True)
class Game:
    """Win condition phi(x, moves) for the first player, with all moves
    bounded by the same term."""

    phi: Formula
    bound: Term
    x_vars: tuple[str, ...]
    move_vars: tuple[str, ...]
    turns: int

    def __post_init__(self):
        if self.turns not in (1, 2):
            raise ShapeViolation("only 1- and 2-turn games are supported")
        if len(self.move_vars) != self.turns:
            raise ShapeViolation("one move variable per turn")
        if not classify(self.phi).qf:
            raise ShapeViolation("the win condition must be quantifier-free")


def has_winning_strategy(G: Game, env: dict, domain_bound: int = 16,
                         registry=None) -> bool:
    """Brute force: a first move below the bound that wins against every
    reply below the bound."""
    limit = eval_term(G.bound, env, registry)
    if G.turns == 1:
        v = G.move_vars[0]
        return any(
            eval_formula(G.phi, {**env, v: m}, domain_bound, registry).value
            for m in range(limit + 1))
    v1, v2 = G.move_vars
    for m1 in range(limit + 1):
        if all(eval_formula(G.phi, {**env, v1: m1, v2: m2},
                            domain_bound, registry).value
               for m2 in range(limit + 1)):
            return True
    return False


def strategy_formula(G: Game) -> Formula:
    """The existence of a winning strategy as a bounded formula."""
    if G.turns == 1:
        return bounded_exists(G.move_vars[0], G.bound, G.phi)
    v1, v2 = G.move_vars
    from .formulas import bounded_forall
    return bounded_exists(v1, G.bound, bounded_forall(v2, G.bound, G.phi))


@dataclass(frozen=True)
class Reduction1:
    """A single term mapping first moves of the source game to first moves
    of the destination game."""

    f: Term
    y_var: str


@dataclass(frozen=True)
class Reduction2:
    """A non-deterministic strategy transformer between two-turn games.

    The terms f0(x,y), f1(x,y,w0), ..., fm(x,y,w0..w_{m-1}) propose first
    moves of the destination game from a first move y of the source game
    and the replies w seen so far; g computes the source game's second move
    from all replies.  One proposed play must win whenever the source play
    (y, g(...)) wins.
    """

    f_list: tuple[Term, ...]
    g: Term
    y_var: str
    w_vars: tuple[str, ...]

    def __post_init__(self):
        if len(self.w_vars) != len(self.f_list):
            raise ShapeViolation("one reply variable per proposal")

    @property
    def width(self) -> int:
        return len(self.f_list)

    def propose_and_answer(self, upper: Game, env: dict, y_val: int,
                           answer, domain_bound: int = 16, registry=None):
        """Play every proposal in order against an answer oracle; returns
        the list of (first move, reply) plays of the upper game."""
        plays = []
        e = {**env, self.y_var: y_val}
        for i, f in enumerate(self.f_list):
            v = eval_term(f, e, registry)
            w = answer(v)
            plays.append((v, w))
            e[self.w_vars[i]] = w
        return plays


def check_reduction1(R: Reduction1, H: Game, G: Game, grid: Grid,
                     registry=None) -> FlowVerdict:
    """Both defining conditions of a one-turn reduction from H to G: f maps
    moves below G's bound to moves below H's bound, and winning moves to
    winning moves."""
    exact = True
    for env in grid:
        t = eval_term(G.bound, env, registry)
        s = eval_term(H.bound, env, registry)
        for y in range(t + 1):
            e = {**env, R.y_var: y}
            fv = eval_term(R.f, e, registry)
            if fv > s:
                return FlowVerdict(False, exact, Counterexample("f_bound", y, e))
            gv = eval_formula(G.phi, {**env, G.move_vars[0]: y},
                              grid.domain_bound, registry)
            exact &= gv.exact
            if not gv.value:
                continue
            hv = eval_formula(H.phi, {**env, H.move_vars[0]: fv},
                              grid.domain_bound, registry)
            exact &= hv.exact
            if not hv.value:
                return FlowVerdict(False, exact, Counterexample("transfer", y, e))
    return FlowVerdict(True, exact, None)


def check_reduction2(R: Reduction2, H: Game, G: Game, grid: Grid,
                     registry=None) -> FlowVerdict:
    """All three defining conditions of a two-turn reduction from H to G,
    over every first move of G and every tuple of replies of H."""
    exact = True
    for env in grid:
        t = eval_term(G.bound, env, registry)
        s = eval_term(H.bound, env, registry)
        for y in range(t + 1):
            for ws in _tuples(range(s + 1), R.width):
                e = {**env, R.y_var: y}
                e.update(zip(R.w_vars, ws))
                fvals = [eval_term(f, e, registry) for f in R.f_list]
                for i, fv in enumerate(fvals):
                    if fv > s:
                        return FlowVerdict(False, exact,
                                           Counterexample("f_bound", i, e))
                gv = eval_term(R.g, e, registry)
                if gv > t:
                    return FlowVerdict(False, exact,
                                       Counterexample("g_bound", y, e))
                src = eval_formula(
                    G.phi, {**env, G.move_vars[0]: y, G.move_vars[1]: gv},
                    grid.domain_bound, registry)
                exact &= src.exact
                if not src.value:
                    continue
                hit = False
                for fv, w in zip(fvals, ws):
                    dst = eval_formula(
                        H.phi, {**env, H.move_vars[0]: fv, H.move_vars[1]: w},
                        grid.domain_bound, registry)
                    exact &= dst.exact
                    if dst.value:
                        hit = True
                        break
                if not hit:
                    return FlowVerdict(False, exact,
                                       Counterexample("transfer", y, e))
    return FlowVerdict(True, exact, None)


def _tuples(rng, n):
    if n == 0:
        return [()]
    rest = _tuples(rng, n - 1)
    return [(v,) + t for v in rng for t in rest]


def embed_reduction1(R: Reduction1, w_var: str = "w0") -> Reduction2:
    """A one-proposal reduction with a constant second move."""
    return Reduction2((R.f,), const(0), R.y_var, (w_var,))


def lift_game(G: Game, dummy_var: str = "w_dummy") -> Game:
    """Read a one-turn game as a two-turn game whose reply is ignored."""
    if G.turns == 2:
        return G
    return Game(G.phi, G.bound, G.x_vars, (G.move_vars[0], dummy_var), 2)


# -- characteristic terms and clamping ----------------------------------------


def chi(f: Formula) -> Term:
    """A 0/1-valued term computing a quantifier-free formula."""
    n = f.node
    if n == "true":
        return const(1)
    if n == "false":
        return const(0)
    if n in ("eq", "not_eq"):
        a, b = f.terms
        gap = add(monus(a, b), monus(b, a))
        yes, no = (const(1), const(0)) if n == "eq" else (const(0), const(1))
        return cond_eq_zero(gap, yes, no)
    if n in ("le", "not_le"):
        a, b = f.terms
        yes, no = (const(1), const(0)) if n == "le" else (const(0), const(1))
        return cond_eq_zero(monus(a, b), yes, no)
    if n == "and":
        return mul(chi(f.children[0]), chi(f.children[1]))
    if n == "or":
        return cond_eq_zero(chi(f.children[0]), chi(f.children[1]), const(1))
    raise ShapeViolation("characteristic terms exist only for quantifier-free formulas")


def clamp(g: Term, s: Term) -> Term:
    """The term equal to g when g <= s and 0 otherwise."""
    return cond_eq_zero(monus(g, s), g, const(0))


# -- the Herbrand route to a two-turn reduction --------------------------------


def _padded_win(game: Game, first: Term, second: Term) -> Formula:
    """first <= bound and (second <= bound -> phi[first, second])."""
    v1, v2 = game.move_vars
    inst = substitute(substitute(game.phi, v1, first), v2, second)
    return conj(le(first, game.bound),
                disj(not_le(second, game.bound), inst))


def build_reduction2_from_herbrand(
    g_terms: list[Term],
    h_terms: list[Term],
    G: Game,
    H: Game,
    grid: Grid,
    y_var: str,
    w_vars: tuple[str, ...],
    registry=None,
) -> Reduction2:
    """Assemble a checkable two-turn reduction from Herbrand witness terms.

    The i-th pair (g_i, h_i) may mention y and the replies w_0..w_{i-1}.
    First the disjunction over i of

        (padded G at (y, g_i))  ->  (padded H at (h_i, w_i))

    is verified at every grid point; then the source's second move is the
    first g_i whose padded instance fails (0 when none fails), and every
    proposal h_i and the second move are clamped to their bounds.
    """
    if len(g_terms) != len(h_terms) or len(w_vars) != len(g_terms):
        raise ShapeViolation("witness lists must have equal length")
    m = len(g_terms)
    g_pads = [_padded_win(G, var(y_var), g_terms[i]) for i in range(m)]
    h_pads = [_padded_win(H, h_terms[i], var(w_vars[i])) for i in range(m)]
    disjunction = big_or([implies(g_pads[i], h_pads[i]) for i in range(m)])

    for env in grid:
        t = eval_term(G.bound, env, registry)
        s = eval_term(H.bound, env, registry)
        for y in range(t + 1):
            for ws in _tuples(range(s + 1), m):
                e = {**env, y_var: y}
                e.update(zip(w_vars, ws))
                if not eval_formula(disjunction, e, grid.domain_bound,
                                    registry).value:
                    raise HerbrandDisjunctionFails(e)

    g_prime: Term = const(0)
    for i in reversed(range(m)):
        g_prime = cond_eq_zero(chi(g_pads[i]), g_terms[i], g_prime)
    f_list = tuple(clamp(h, H.bound) for h in h_terms)
    return Reduction2(f_list, clamp(g_prime, G.bound), y_var, tuple(w_vars))


# -- separator extraction demo -------------------------------------------------


@dataclass(frozen=True)
class SeparatorReport:
    tested_range: tuple[int, int]
    separates: bool
    witness: Optional[int]
    game_formula: Formula

    def __post_init__(self):
        assert self.separates == (self.witness is None)


def separator_demo(B: Formula, C: Formula, s: Term, f: Term,
                   max_x: int = 512, x_var: str = "x", y_var: str = "y",
                   z_var: str = "z", w_vars: tuple[str, str] = ("w0", "w1"),
                   domain_bound: int = 16, registry=None) -> SeparatorReport:
    """Extract a candidate separator from a would-be deterministic
    reduction's first-move function and test it.

    B(x, y) and C(x, z) present two disjoint sets as bounded existentials
    with shared bound s; the polynomial-time set decided by f(x, 0, 1) != 0
    must contain the first set and avoid the second.  The combined game
    formula (w=0 -> not B) and (w != 0 -> not C) is reported alongside."""
    if not classify(B).qf or not classify(C).qf:
        raise ShapeViolation("set presentations must be quantifier-free")
    w = var(w_vars[0])
    game_formula = conj(
        disj(not_le(w, const(0)), negate(B)),   # w = 0  -> not B(x, y)
        disj(le(w, const(0)), negate(C)))       # w != 0 -> not C(x, z)

    def in_set(phi: Formula, witness_var: str, x: int) -> bool:
        limit = eval_term(s, {x_var: x}, registry)
        return any(
            eval_formula(phi, {x_var: x, witness_var: v}, domain_bound,
                         registry).value
            for v in range(limit + 1))

    for x in range(max_x + 1):
        if eval_term(s, {x_var: x}, registry) < 1:
            raise ShapeViolation(f"the move bound must be >= 1 (fails at x={x})")
        if in_set(B, y_var, x) and in_set(C, z_var, x):
            raise NotDisjoint(x)

    witness = None
    for x in range(max_x + 1):
        sep = eval_term(f, {x_var: x, w_vars[0]: 0, w_vars[1]: 1}, registry) != 0
        if in_set(B, y_var, x) and not sep:
            witness = x
            break
        if in_set(C, z_var, x) and sep:
            witness = x
            break
    return SeparatorReport((0, max_x), witness is None, witness, game_formula)
