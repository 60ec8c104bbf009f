from .ast import *  # noqa: F401,F403
from .names import (  # noqa: F401
    FreshNames, all_names, bexpr_vars, expr_vars, free_vars, is_reserved,
    rename, rename_stmt, stmt_vars, subst_bexpr, subst_expr,
)
from .ops import (  # noqa: F401
    allocated, alpha_equiv, conj, desugar, disj, exists, has_modality,
    is_core, ne, neg, not_allocated, size, subst,
)
from .parser import parse_assertion, parse_expr, parse_program  # noqa: F401
from .printer import show, show_bexpr, show_expr, show_stmt  # noqa: F401
