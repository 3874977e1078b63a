"""Command-line front end.

Exit codes: 0 when the command succeeds and any check passes, 1 when a
counterexample or violation is found (details on stdout), 2 on parse or
usage errors (message on stderr).  With --format machine every result is a
single JSON object on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import ordinals as o
from .errors import (
    BoundViolation,
    EndpointMismatch,
    HerbrandDisjunctionFails,
    InvalidProgram,
    NotDisjoint,
    NotPolynomial,
    NotPolynomialLength,
    OrdflowError,
    ParseError,
    WitnessSearchFailed,
)
from .flows import (
    KFlow,
    OrdinalFlow,
    check_kflow,
    check_ordinal_flow,
    glue_seq_k,
    glue_seq_ordinal,
)
from .formulas import Grid
from .games import (
    Game,
    Reduction1,
    Reduction2,
    check_reduction1,
    check_reduction2,
    has_winning_strategy,
    lift_game,
    separator_demo,
)
from .search import (
    LSProgram,
    PLS1Program,
    PLS2Program,
    compile_pls1,
    run_ls,
    run_pls1,
    run_pls2,
    validate_ls,
    validate_pls1,
    validate_pls2,
)
from .serialize import FormatError, dump_path, flow_to_obj, load_path, term_to_obj
from .terms import (
    FunctionRegistry,
    cond_eq_zero,
    const,
    div,
    monus,
    mul,
    term_to_text,
    var,
)

# violations surface as exit code 1; anything malformed as exit code 2
_VIOLATIONS = (EndpointMismatch, InvalidProgram, NotPolynomialLength,
               NotPolynomial, NotDisjoint, HerbrandDisjunctionFails,
               BoundViolation, WitnessSearchFailed)


class _Output:
    def __init__(self, command: str, machine: bool):
        self.command = command
        self.machine = machine
        self.fields: dict = {}

    def say(self, line: str):
        if not self.machine:
            print(line)

    def field(self, **kv):
        self.fields.update(kv)

    def finish(self, ok: bool) -> int:
        if self.machine:
            print(json.dumps({"command": self.command, "ok": ok, **self.fields},
                             sort_keys=True))
        return 0 if ok else 1


def _header(out: _Output, args):
    out.say(f"# seed={args.seed} domain-bound={args.domain_bound} "
            f"code-bound={args.code_bound}")


def _env_text(env: dict) -> str:
    return "{" + ", ".join(f"{k}={v}" for k, v in sorted(env.items())) + "}"


def _index_text(index) -> str:
    if isinstance(index, o.Ordinal):
        return o.print_ordinal(index)
    return str(index)


def _report_verdict(out: _Output, verdict) -> bool:
    out.field(valid=verdict.valid, exact=verdict.exact)
    if verdict.valid:
        out.say("valid" + (" (exact)" if verdict.exact else " (inexact)"))
        return True
    ce = verdict.counterexample
    out.field(condition=ce.condition, index=_index_text(ce.index),
              env={k: v for k, v in sorted(ce.env.items())})
    out.say(f"counterexample: condition={ce.condition} "
            f"index={_index_text(ce.index)} env={_env_text(ce.env)}")
    return False


def _split_sum(text: str) -> list[str]:
    """Split on top-level '+' only, respecting the parentheses of exponents."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _eval_ordinal_expr(text: str) -> o.Ordinal:
    total = o.ZERO
    for chunk in _split_sum(text):
        total = o.add(total, o.parse_ordinal(chunk.strip()))
    return total


def _load_as(path: str, types: tuple, what: str):
    obj = load_path(path)
    if not isinstance(obj, types):
        raise FormatError(f"{path} is not a {what} document")
    return obj


def _param_grid(names, args) -> Grid:
    return Grid.cube(sorted(names), args.domain_bound, args.domain_bound)


def _xs_env(x_vars, values, what: str) -> dict:
    if len(values) != len(x_vars):
        raise FormatError(
            f"{what} takes {len(x_vars)} input(s) {tuple(x_vars)}, got {len(values)}")
    return dict(zip(x_vars, values))


# -- command handlers ----------------------------------------------------------


def _cmd_ord_eval(args, out: _Output) -> int:
    result = _eval_ordinal_expr(args.expr)
    text = o.print_ordinal(result)
    out.field(ordinal=text)
    out.say(text)
    return out.finish(True)


def _cmd_ord_cmp(args, out: _Output) -> int:
    a = _eval_ordinal_expr(args.left)
    b = _eval_ordinal_expr(args.right)
    word = {o.LESS: "less", o.EQUAL: "equal", o.GREATER: "greater"}[o.compare(a, b)]
    out.field(order=word)
    out.say(word)
    return out.finish(True)


def _cmd_flow_check(args, out: _Output) -> int:
    F = _load_as(args.file, (OrdinalFlow, KFlow), "flow")
    _header(out, args)
    grid = _param_grid(F.params, args)
    if isinstance(F, OrdinalFlow):
        verdict = check_ordinal_flow(F, grid, args.code_bound)
    else:
        verdict = check_kflow(F, grid)
    return out.finish(_report_verdict(out, verdict))


def _cmd_flow_glue(args, out: _Output) -> int:
    F1 = _load_as(args.first, (OrdinalFlow, KFlow), "flow")
    F2 = _load_as(args.second, (OrdinalFlow, KFlow), "flow")
    if type(F1) is not type(F2):
        raise FormatError("cannot glue flows of different kinds")
    grid = _param_grid(F1.params | F2.params, args)
    if isinstance(F1, OrdinalFlow):
        glued = glue_seq_ordinal(F1, F2, grid)
        length = o.print_ordinal(glued.beta)
    else:
        glued = glue_seq_k(F1, F2, grid)
        length = term_to_text(glued.length)
    out.field(length=length, flow=flow_to_obj(glued))
    out.say(f"glued length: {length}")
    if args.out:
        dump_path(glued, args.out)
        out.say(f"written to {args.out}")
        out.field(out=args.out)
    return out.finish(True)


def _cmd_ls_run(args, out: _Output) -> int:
    P = _load_as(args.file, (LSProgram,), "local-search program")
    _xs_env(P.x_vars, args.inputs, "program")
    trace = run_ls(P, tuple(args.inputs), args.domain_bound)
    if args.trace:
        for level, state in trace.steps:
            out.say(f"  level {o.print_ordinal(level)}: state {state}")
    if trace.ok:
        out.field(result=list(trace.result), steps=len(trace.steps) - 1)
        out.say(f"success: y={trace.result} after {len(trace.steps) - 1} step(s)")
        return out.finish(True)
    kind, idx = trace.violation
    out.field(violation=kind, step=idx)
    out.say(f"violation: {kind} at step {idx}")
    return out.finish(False)


def _cmd_ls_validate(args, out: _Output) -> int:
    P = _load_as(args.file, (LSProgram,), "local-search program")
    _header(out, args)
    grid = _param_grid(P.x_vars, args)
    verdict = validate_ls(P, grid, args.code_bound)
    return out.finish(_report_verdict(out, verdict))


def _cmd_pls_run(args, out: _Output) -> int:
    P = _load_as(args.file, (PLS1Program, PLS2Program), "program")
    if isinstance(P, PLS1Program):
        _xs_env(P.x_vars, args.inputs, "program")
        trace = run_pls1(P, tuple(args.inputs), args.domain_bound)
        if args.trace:
            for u, z in enumerate(trace.states):
                out.say(f"  level {u}: state {z}")
        if trace.ok:
            out.field(result=trace.result)
            out.say(f"success: y={trace.result}")
            return out.finish(True)
        kind, idx = trace.violation
        out.field(violation=kind, step=idx)
        out.say(f"violation: {kind} at level {idx}")
        return out.finish(False)
    xs = tuple(args.inputs)
    _xs_env(sorted(set(P.game.x_vars)), xs, "program")
    transcript = run_pls2(P, xs, domain_bound=args.domain_bound)
    if args.trace:
        for label, record in transcript.levels:
            plays = ", ".join(f"(y={y} v={v} w={w} {'win' if ok else 'lose'})"
                              for y, v, w, ok in record)
            out.say(f"  {label}: {plays}")
    out.field(winning_first_moves=list(transcript.winning_plays))
    if transcript.ok:
        out.say(f"success: winning first move(s) {list(transcript.winning_plays)}")
        return out.finish(True)
    out.say("violation: no surviving play for the target game")
    return out.finish(False)


def _cmd_pls_validate(args, out: _Output) -> int:
    P = _load_as(args.file, (PLS1Program, PLS2Program), "program")
    _header(out, args)
    if isinstance(P, PLS1Program):
        grid = _param_grid(P.x_vars, args)
        verdict = validate_pls1(P, grid)
    else:
        grid = _param_grid(set(P.game.x_vars), args)
        verdict = validate_pls2(P, grid)
    return out.finish(_report_verdict(out, verdict))


def _cmd_pls_compile(args, out: _Output) -> int:
    P = _load_as(args.file, (PLS1Program,), "one-turn program")
    registry = FunctionRegistry()
    grid = _param_grid(P.x_vars, args)
    fn = compile_pls1(P, registry, grid, name="walk")
    out.field(function=fn.name, body=term_to_obj(fn.base),
              bound=term_to_text(fn.bound))
    out.say(f"compiled {fn.name}({', '.join(fn.params)}) = {term_to_text(fn.base)}")
    out.say(f"value bound: {term_to_text(fn.bound)}")
    return out.finish(True)


def _cmd_game_strategy(args, out: _Output) -> int:
    G = _load_as(args.file, (Game,), "game")
    env = _xs_env(G.x_vars, args.inputs, "game")
    won = has_winning_strategy(G, env, args.domain_bound)
    out.field(winning_strategy=won)
    out.say("true" if won else "false")
    return out.finish(won)


def _cmd_game_check_reduction(args, out: _Output) -> int:
    R = _load_as(args.reduction, (Reduction1, Reduction2), "reduction")
    H = _load_as(args.dest, (Game,), "game")
    G = _load_as(args.source, (Game,), "game")
    _header(out, args)
    grid = _param_grid(set(H.x_vars) | set(G.x_vars), args)
    if isinstance(R, Reduction1):
        verdict = check_reduction1(R, H, G, grid)
    else:
        verdict = check_reduction2(R, lift_game(H), lift_game(G, "w_pad"), grid)
    return out.finish(_report_verdict(out, verdict))


def _separator_pair(which: str):
    from .formulas import conj, eq, negate
    x, y, z = var("x"), var("y"), var("z")
    even = eq(monus(x, mul(const(2), div(x, const(2)))), const(0))
    B = conj(eq(y, const(0)), even)
    C = conj(eq(z, const(0)), negate(even))
    parity = cond_eq_zero(monus(x, mul(const(2), div(x, const(2)))),
                          const(1), const(0))
    if which == "even-odd":
        return B, C, parity
    if which == "overlapping":
        return B, conj(eq(z, const(0)), even), parity
    return B, C, const(0)  # constant-f: not a separator


def _cmd_demo_separator(args, out: _Output) -> int:
    _header(out, args)
    B, C, f = _separator_pair(args.pair)
    report = separator_demo(B, C, const(1), f, max_x=args.max_x,
                            domain_bound=args.domain_bound)
    out.field(separates=report.separates, range=list(report.tested_range),
              witness=report.witness)
    lo, hi = report.tested_range
    if report.separates:
        out.say(f"separates=true on x in [{lo}, {hi}]")
        return out.finish(True)
    out.say(f"separates=false, witness x={report.witness}")
    return out.finish(False)


# -- argument parsing ----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> _Parser:
    p = _Parser(prog="ordflow", description=__doc__)
    p.add_argument("--domain-bound", type=int, default=16,
                   help="grid range and truncation bound for unbounded quantifiers")
    p.add_argument("--code-bound", type=int, default=200,
                   help="largest ordinal code enumerated by checks")
    p.add_argument("--seed", type=int, default=0,
                   help="seed echoed in check headers for reproducibility")
    p.add_argument("--trace", action="store_true", help="print execution traces")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    sub = p.add_subparsers(dest="group", required=True)

    g = sub.add_parser("ord", help="ordinal calculator").add_subparsers(
        dest="command", required=True)
    pe = g.add_parser("eval", help="evaluate a sum of ordinal terms")
    pe.add_argument("expr")
    pe.set_defaults(handler=_cmd_ord_eval, name="ord.eval")
    pc = g.add_parser("cmp", help="compare two ordinal expressions")
    pc.add_argument("left")
    pc.add_argument("right")
    pc.set_defaults(handler=_cmd_ord_cmp, name="ord.cmp")

    g = sub.add_parser("flow", help="flow checking and gluing").add_subparsers(
        dest="command", required=True)
    pf = g.add_parser("check", help="check a flow document")
    pf.add_argument("file")
    pf.set_defaults(handler=_cmd_flow_check, name="flow.check")
    pg = g.add_parser("glue", help="glue two flows sequentially")
    pg.add_argument("first")
    pg.add_argument("second")
    pg.add_argument("--out", help="write the glued flow here")
    pg.set_defaults(handler=_cmd_flow_glue, name="flow.glue")

    g = sub.add_parser("ls", help="ordinal local search").add_subparsers(
        dest="command", required=True)
    pr = g.add_parser("run", help="run a program on inputs")
    pr.add_argument("file")
    pr.add_argument("inputs", nargs="*", type=int)
    pr.set_defaults(handler=_cmd_ls_run, name="ls.run")
    pv = g.add_parser("validate", help="check the defining conditions")
    pv.add_argument("file")
    pv.set_defaults(handler=_cmd_ls_validate, name="ls.validate")

    g = sub.add_parser("pls", help="level-walk programs").add_subparsers(
        dest="command", required=True)
    pr = g.add_parser("run", help="run a program on inputs")
    pr.add_argument("file")
    pr.add_argument("inputs", nargs="*", type=int)
    pr.set_defaults(handler=_cmd_pls_run, name="pls.run")
    pv = g.add_parser("validate", help="check the defining conditions")
    pv.add_argument("file")
    pv.set_defaults(handler=_cmd_pls_validate, name="pls.validate")
    pk = g.add_parser("compile", help="pack a polynomial-length walk into a function")
    pk.add_argument("file")
    pk.set_defaults(handler=_cmd_pls_compile, name="pls.compile")

    g = sub.add_parser("game", help="games and reductions").add_subparsers(
        dest="command", required=True)
    ps = g.add_parser("strategy", help="decide a winning strategy by brute force")
    ps.add_argument("file")
    ps.add_argument("inputs", nargs="*", type=int)
    ps.set_defaults(handler=_cmd_game_strategy, name="game.strategy")
    pr = g.add_parser("check-reduction", help="check a reduction between two games")
    pr.add_argument("reduction")
    pr.add_argument("dest", help="destination game (whose strategy is produced)")
    pr.add_argument("source", help="source game (whose strategy is consumed)")
    pr.set_defaults(handler=_cmd_game_check_reduction, name="game.check-reduction")

    g = sub.add_parser("demo", help="demonstrations").add_subparsers(
        dest="command", required=True)
    pd = g.add_parser("separator", help="separator extraction on a toy pair")
    pd.add_argument("--pair", choices=("even-odd", "overlapping", "constant-f"),
                    default="even-odd")
    pd.add_argument("--max-x", type=int, default=512)
    pd.set_defaults(handler=_cmd_demo_separator, name="demo.separator")
    return p


def dispatch(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    out = _Output(args.name, args.format == "machine")
    try:
        return args.handler(args, out)
    except (ParseError, FormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except _VIOLATIONS as e:
        out.field(violation=type(e).__name__, detail=str(e))
        out.say(f"violation: {type(e).__name__}: {e}")
        return out.finish(False)
    except OrdflowError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
