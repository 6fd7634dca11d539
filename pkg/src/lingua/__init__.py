"""Lingua: a small language with structural types, integrity-constraint
yokes, McCarthy three-valued logic and error-transparent evaluation."""

from .diagnostics import LinguaParseError, ParseDiagnostic, SourceSpan
from .kernel import (
    AbstractError,
    Composite,
    LangType,
    Limits,
    Number,
    OMEGA,
    TT,
    Transfer,
    Value,
    apply_transfer,
    clan_bo_member,
    clan_ty_member,
    coherent,
    oversized,
)
from .parser import (
    parse_any,
    parse_data_expression,
    parse_program,
    parse_transfer_expression,
    parse_type_expression,
    restore_expression,
)
from .printer import ast_dump, print_concrete
from .semantics import (
    Evaluator,
    OutOfFuel,
    eval_source_expression,
    run_program,
    run_source,
)
from .state import (
    State,
    bind_variable,
    empty_state,
    is_error,
    load_error,
    lookup_procedure,
    lookup_type,
    lookup_variable,
)

__version__ = "0.1.0"
