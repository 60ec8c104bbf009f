"""Dynamic separation logic: modal rewriting, verification conditions and a
bounded-model oracle."""

from .oracle import Inconclusive, Invalid, Valid, equiv, triple_valid, valid
from .rewrite import normalize, simplify
from .semantics import Bounds, Heap, Store, exec_stmt, sat
from .syntax import parse_assertion, parse_program, show
from .vc import Triple, sp, sp_global, verify_triple, wp

__all__ = [
    "Bounds", "Heap", "Inconclusive", "Invalid", "Store", "Triple", "Valid",
    "equiv", "exec_stmt", "normalize", "parse_assertion", "parse_program",
    "sat", "show", "simplify", "sp", "sp_global", "triple_valid", "valid",
    "verify_triple", "wp",
]
