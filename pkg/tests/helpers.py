"""Shared test utilities."""

from dynsl.oracle import Valid, equiv
from dynsl.semantics import Bounds
from dynsl.syntax import free_vars, is_reserved, parse_assertion, parse_program

B3 = Bounds(3)
B4 = Bounds(4)
A = parse_assertion
S = parse_program


def equivalent(p, q, bounds=B3):
    return isinstance(equiv(p, q, bounds), Valid)


def free_reserved(p):
    return {x for x in free_vars(p) if is_reserved(x)}
