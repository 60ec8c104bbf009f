"""Recursive-descent parser for assertions and programs.

Precedence, tightest first: modality, ``!``, ``*``, ``-*``, ``/\\`` and ``&&``,
``\\/``, ``->``, ``<->``.  ``->`` and ``-*`` associate to the right, the rest
to the left.  Quantifier bodies extend as far right as possible.  Operands of
atomic formulas are sums; write products in parentheses there.
"""

from __future__ import annotations

import re

from ..errors import DSLSyntaxError
from .ast import (
    FALSE_B, TRUE_B, Add, Alloc, AllocMulti, AndA, AndB, Assign, Bool, Box,
    Dispose, Emp, Eq, Exists, Forall, GeneralMutate, HeapClear, HeapUpdate,
    If, Iff, Imp, IntLit, Lookup, Lt, Mul, Mutate, Not, NotB, Or, PointsStrong,
    PointsStrongAny, PointsWeak, PointsWeakAny, SepConj, SepImp, Seq, Sub,
    Var, While,
)

KEYWORDS = frozenset("""
    true false emp forall exists cons dispose upd clr if then else fi
    while invariant do od
""".split())

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>\$?[A-Za-z_][A-Za-z0-9_']*|\$\d+)
  | (?P<op><->|\|->|-\*|->|~>|:=|&&|/\\|\\/|[-+*=<!()\[\];,])
""", re.VERBOSE)


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col


def _tokenize(text):
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            word = m.group()
            if kind == "ident" and word in KEYWORDS:
                kind = "kw"
            tokens.append(_Token(kind, word, line, pos - line_start + 1))
        newlines = m.group().count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + m.group().rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Backtrack(Exception):
    pass


class Parser:
    def __init__(self, text, allow_reserved=False):
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_reserved = allow_reserved

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self):
        return self.toks[self.i]

    def at(self, *texts):
        t = self.tok
        return t.kind in ("op", "kw") and t.text in texts

    def error(self, message, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        return DSLSyntaxError(f"{message} (found {found!r})", tok.line, tok.col)

    def expect(self, text):
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        self.i += 1

    def ident(self):
        t = self.tok
        if t.kind != "ident":
            raise self.error("expected identifier")
        if t.text.startswith("$") and not self.allow_reserved:
            raise self.error("identifiers starting with '$' are reserved", t)
        self.i += 1
        return t.text

    def finish(self):
        if self.tok.kind != "eof":
            raise self.error("unexpected trailing input")

    # -- expressions ----------------------------------------------------------

    def expr(self, products=True):
        left = self.term(products)
        while self.at("+", "-") and self._starts_operand(1):
            op = self.tok.text
            self.i += 1
            right = self.term(products)
            left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def _starts_operand(self, k):
        t = self.toks[self.i + k]
        return t.kind in ("int", "ident") or (t.kind == "op" and t.text == "(")

    def term(self, products):
        left = self.factor()
        while products and self.at("*"):
            self.i += 1
            left = Mul(left, self.factor())
        return left

    def factor(self):
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return IntLit(int(t.text))
        if t.kind == "ident":
            return Var(self.ident())
        if self.at("("):
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        raise self.error("expected expression")

    # -- assertions -------------------------------------------------------------

    def assertion(self):
        left = self.imp()
        if self.at("<->"):
            self.i += 1
            left = Iff(left, self.imp())
        return left

    def imp(self):
        left = self.disj()
        if self.at("->"):
            self.i += 1
            return Imp(left, self.imp())
        return left

    def disj(self):
        left = self.conj()
        while self.at("\\/"):
            self.i += 1
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.sepimp()
        while self.at("/\\", "&&"):
            op_tok = self.tok
            self.i += 1
            right = self.sepimp()
            if op_tok.text == "/\\":
                left = AndA(left, right)
            elif isinstance(left, Bool) and isinstance(right, Bool):
                left = Bool(AndB(left.cond, right.cond))
            else:
                raise self.error("operands of '&&' must be boolean expressions", op_tok)
        return left

    def sepimp(self):
        left = self.sepconj()
        if self.at("-*"):
            self.i += 1
            return SepImp(left, self.sepimp())
        return left

    def sepconj(self):
        left = self.unary()
        while self.at("*"):
            self.i += 1
            left = SepConj(left, self.unary())
        return left

    def unary(self):
        if self.at("!"):
            self.i += 1
            arg = self.unary()
            if isinstance(arg, Bool):
                return Bool(NotB(arg.cond))
            return Not(arg)
        if self.at("["):
            self.i += 1
            s = self.stmt_seq()
            self.expect("]")
            return Box(s, self.unary())
        return self.primary()

    def primary(self):
        t = self.tok
        if self.at("forall", "exists"):
            self.i += 1
            x = self.ident()
            body = self.assertion()
            return Forall(x, body) if t.text == "forall" else Exists(x, body)
        if self.at("emp"):
            self.i += 1
            return Emp()
        if self.at("true", "false"):
            self.i += 1
            return Bool(TRUE_B if t.text == "true" else FALSE_B)
        if self.at("("):
            start = self.i
            try:
                return self.atom()
            except DSLSyntaxError:
                self.i = start
            self.i += 1
            p = self.assertion()
            self.expect(")")
            return p
        return self.atom()

    def atom(self):
        left = self.expr(products=False)
        t = self.tok
        if self.at("~>", "|->"):
            self.i += 1
            if self.at("-") and not self._starts_operand(1):
                self.i += 1
                return PointsWeakAny(left) if t.text == "~>" else PointsStrongAny(left)
            right = self.expr(products=False)
            return PointsWeak(left, right) if t.text == "~>" else PointsStrong(left, right)
        if self.at("=", "<"):
            self.i += 1
            right = self.expr(products=False)
            return Bool(Eq(left, right) if t.text == "=" else Lt(left, right))
        raise self.error("expected '~>', '|->', '=' or '<'")

    def bexpr(self):
        t = self.tok
        p = self.imp()
        if not isinstance(p, Bool):
            raise self.error("expected a boolean expression", t)
        return p.cond

    # -- statements -------------------------------------------------------------

    def stmt_seq(self):
        first = self.stmt()
        if self.at(";"):
            self.i += 1
            return Seq(first, self.stmt_seq())
        return first

    def stmt(self):
        t = self.tok
        if t.kind == "ident":
            x = self.ident()
            self.expect(":=")
            if self.at("["):
                self.i += 1
                e = self.expr()
                self.expect("]")
                return Lookup(x, e)
            if self.at("cons"):
                self.i += 1
                self.expect("(")
                es = [self.expr()]
                while self.at(","):
                    self.i += 1
                    es.append(self.expr())
                self.expect(")")
                return Alloc(x, es[0]) if len(es) == 1 else AllocMulti(x, tuple(es))
            return Assign(x, self.expr())
        if self.at("["):
            self.i += 1
            addr = self.expr()
            self.expect("]")
            self.expect(":=")
            e = self.expr()
            if isinstance(addr, Var):
                return Mutate(addr.name, e)
            return GeneralMutate(addr, e)
        if self.at("dispose"):
            self.i += 1
            self.expect("(")
            x = self.ident()
            self.expect(")")
            return Dispose(x)
        if self.at("upd"):
            self.i += 1
            x = self.ident()
            self.expect(":=")
            return HeapUpdate(x, self.expr())
        if self.at("clr"):
            self.i += 1
            return HeapClear(self.ident())
        if self.at("if"):
            self.i += 1
            c = self.bexpr()
            self.expect("then")
            a = self.stmt_seq()
            self.expect("else")
            b = self.stmt_seq()
            self.expect("fi")
            return If(c, a, b)
        if self.at("while"):
            self.i += 1
            c = self.bexpr()
            inv = None
            if self.at("invariant"):
                self.i += 1
                inv = self.assertion()
            self.expect("do")
            body = self.stmt_seq()
            self.expect("od")
            return While(c, inv, body)
        if self.at("("):
            self.i += 1
            s = self.stmt_seq()
            self.expect(")")
            return s
        raise self.error("expected statement")


def parse_assertion(text, allow_reserved=False):
    """Parse an assertion; ``$``-names are rejected unless ``allow_reserved``."""
    p = Parser(text, allow_reserved)
    result = p.assertion()
    p.finish()
    return result


def parse_program(text, allow_reserved=False):
    p = Parser(text, allow_reserved)
    result = p.stmt_seq()
    p.finish()
    return result


def parse_expr(text, allow_reserved=False):
    p = Parser(text, allow_reserved)
    result = p.expr()
    p.finish()
    return result
