"""Exact ordinal arithmetic below epsilon-zero, flow gluing, local-search
programs, and game reductions, with brute-force semantic checking."""

from .ordinals import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    add,
    compare,
    decode,
    div_left,
    encode,
    from_nat,
    is_limit,
    is_successor,
    is_valid_code,
    monus,
    mul,
    omega_pow,
    parse_ordinal,
    pred,
    print_ordinal,
    to_nat,
)
from .formulas import (
    ClassTags,
    Formula,
    Grid,
    Verdict,
    classify,
    eval_formula,
    negate,
    substitute,
)
from .terms import DefinedFunction, FunctionRegistry, Term, eval_term
from .flows import (
    FlowVerdict,
    KFlow,
    OrdinalFlow,
    bound_params,
    bounded_forall_intro,
    check_kflow,
    check_ordinal_flow,
    flow_and_context,
    flow_from_implication,
    flow_or_context,
    glue_seq_k,
    glue_seq_ordinal,
    kflow_from_implication,
    neg_rule_left,
    neg_rule_right,
    pad,
    rule_conj_left,
    rule_conj_right,
    rule_disj_left,
    rule_disj_right,
    strong_glue_ind,
    strong_glue_pind,
    transfinite_iterate,
)
from .games import (
    Game,
    Reduction1,
    Reduction2,
    build_reduction2_from_herbrand,
    check_reduction1,
    check_reduction2,
    clamp,
    has_winning_strategy,
    separator_demo,
)
from .search import (
    DescentTrace,
    LSProgram,
    PLS1Program,
    PLS2Program,
    compile_pls1,
    flow_to_ls,
    ls_to_flow,
    run_ls,
    run_pls1,
    run_pls2,
    validate_ls,
    validate_pls1,
    validate_pls2,
)
from . import oracle, serialize

__version__ = "0.1.0"
