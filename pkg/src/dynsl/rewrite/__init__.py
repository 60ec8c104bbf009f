"""Elimination of modalities over basic and pseudo instructions."""

from ..syntax import Box, Exists, FreshNames, HeapUpdate, Var
from .engine import (  # noqa: F401
    DEFAULT_STEP_LIMIT, INNERMOST, OUTERMOST, STRATEGIES, Step, Trace,
    PathOrder, normalize, prepare, rewrite_step,
)
from .rules import Rule, contract  # noqa: F401
from .simplify import resugar, simplify  # noqa: F401


def frame_for_mutation(p, x, fresh=None):
    """The frame ``exists y. [upd x := y]p`` for a mutation of ``[x]``, normalized.

    If ``{p} [x] := e {q}`` is valid then ``p -> (x |-> -) * frame`` and
    ``(x |-> e) * frame -> q`` are both valid.
    """
    if fresh is None:
        fresh = FreshNames.above(p)
    y = fresh()
    frame, _ = normalize(Exists(y, Box(HeapUpdate(x, Var(y)), p)), fresh=fresh)
    return frame
