"""Abstract syntax for expressions, programs and assertions.

All nodes are frozen dataclasses, so trees are immutable and can be shared
freely between rewriting steps.  Structural equality is dataclass equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union


# ---------------------------------------------------------------------------
# Arithmetic expressions


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul:
    left: Expr
    right: Expr


Expr = Union[IntLit, Var, Add, Sub, Mul]
ARITH = (Add, Sub, Mul)


# ---------------------------------------------------------------------------
# Boolean expressions (heap independent)


@dataclass(frozen=True)
class TrueLit:
    pass


@dataclass(frozen=True)
class FalseLit:
    pass


@dataclass(frozen=True)
class Eq:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Lt:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class NotB:
    arg: BExpr


@dataclass(frozen=True)
class AndB:
    left: BExpr
    right: BExpr


BExpr = Union[TrueLit, FalseLit, Eq, Lt, NotB, AndB]

TRUE_B = TrueLit()
FALSE_B = FalseLit()


# ---------------------------------------------------------------------------
# Statements


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr


@dataclass(frozen=True)
class Lookup:
    """``x := [e]``"""

    var: str
    addr: Expr


@dataclass(frozen=True)
class Mutate:
    """``[x] := e``"""

    var: str
    expr: Expr


@dataclass(frozen=True)
class GeneralMutate:
    """``[e] := e'``"""

    addr: Expr
    expr: Expr


@dataclass(frozen=True)
class Alloc:
    """``x := cons(e)``"""

    var: str
    expr: Expr


@dataclass(frozen=True)
class AllocMulti:
    """``x := cons(e1, ..., en)``: n consecutive cells."""

    var: str
    exprs: Tuple[Expr, ...]


@dataclass(frozen=True)
class Dispose:
    var: str


@dataclass(frozen=True)
class HeapUpdate:
    """Pseudo-instruction ``upd x := e``: writes the cell at ``x``, never fails."""

    var: str
    expr: Expr


@dataclass(frozen=True)
class HeapClear:
    """Pseudo-instruction ``clr x``: removes the cell at ``x``, never fails."""

    var: str


@dataclass(frozen=True)
class Seq:
    first: Stmt
    second: Stmt


@dataclass(frozen=True)
class If:
    cond: BExpr
    then: Stmt
    orelse: Stmt


@dataclass(frozen=True)
class While:
    cond: BExpr
    invariant: Optional[Assertion]
    body: Stmt


Stmt = Union[
    Assign, Lookup, Mutate, GeneralMutate, Alloc, AllocMulti, Dispose,
    HeapUpdate, HeapClear, Seq, If, While,
]

BASIC = (Assign, Lookup, Mutate, Alloc, Dispose)
PSEUDO = (HeapUpdate, HeapClear)
COMPOUND = (Seq, If, While)


# ---------------------------------------------------------------------------
# Assertions: core constructors


@dataclass(frozen=True)
class Bool:
    cond: BExpr


@dataclass(frozen=True)
class PointsWeak:
    """``e ~> e'``: location e is allocated and holds e'."""

    addr: Expr
    value: Expr


@dataclass(frozen=True)
class Imp:
    left: Assertion
    right: Assertion


@dataclass(frozen=True)
class Forall:
    var: str
    body: Assertion


@dataclass(frozen=True)
class SepConj:
    left: Assertion
    right: Assertion


@dataclass(frozen=True)
class SepImp:
    left: Assertion
    right: Assertion


@dataclass(frozen=True)
class Box:
    """The modality ``[S]p``."""

    stmt: Stmt
    body: Assertion


# Sugar constructors; `desugar` removes them.


@dataclass(frozen=True)
class Not:
    arg: Assertion


@dataclass(frozen=True)
class Or:
    left: Assertion
    right: Assertion


@dataclass(frozen=True)
class AndA:
    left: Assertion
    right: Assertion


@dataclass(frozen=True)
class Iff:
    left: Assertion
    right: Assertion


@dataclass(frozen=True)
class Exists:
    var: str
    body: Assertion


@dataclass(frozen=True)
class Emp:
    pass


@dataclass(frozen=True)
class PointsStrong:
    """``e |-> e'``: the heap is exactly the single cell e holding e'."""

    addr: Expr
    value: Expr


@dataclass(frozen=True)
class PointsWeakAny:
    """``e ~> -``"""

    addr: Expr


@dataclass(frozen=True)
class PointsStrongAny:
    """``e |-> -``"""

    addr: Expr


Assertion = Union[
    Bool, PointsWeak, Imp, Forall, SepConj, SepImp, Box,
    Not, Or, AndA, Iff, Exists, Emp, PointsStrong, PointsWeakAny, PointsStrongAny,
]

CORE = (Bool, PointsWeak, Imp, Forall, SepConj, SepImp, Box)
SUGAR = (Not, Or, AndA, Iff, Exists, Emp, PointsStrong, PointsWeakAny, PointsStrongAny)
BINARY = (Imp, SepConj, SepImp, Or, AndA, Iff)
BINDERS = (Forall, Exists)

TRUE = Bool(TRUE_B)
FALSE = Bool(FALSE_B)
