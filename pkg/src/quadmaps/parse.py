"""Expression parser for polynomials and field literals.

Grammar (explicit ``*`` required)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom (("^" | "**") INT)?
    atom   := NUMBER ["i"] | "i" | NAME | "sqrt" "(" expr ")" | "(" expr ")"

Division is only allowed by nonzero constants and ``sqrt`` only of constants.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

from .field import I, Session, TowerElem
from .poly import Poly, _norm

DEFAULT_VARS = ("x", "y", "z")


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int, text: str = ""):
        self.msg = msg
        self.pos = pos
        self.text = text
        super().__init__(f"{msg} at position {pos}")

    def pretty(self) -> str:
        if not self.text:
            return str(self)
        return f"{self}\n  {self.text}\n  {' ' * self.pos}^"


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
                    r"|(?P<op>\*\*|[-+*/^()]))")


class _Tok:
    __slots__ = ("kind", "val", "pos", "end")

    def __init__(self, kind, val, pos, end):
        self.kind, self.val, self.pos, self.end = kind, val, pos, end


def _tokenize(text: str) -> List[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", bad, text)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start, m.end()))
        pos = m.end()
    toks.append(_Tok("end", None, len(text), len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, variables: Sequence[str], session: Session):
        self.text = text
        self.toks = _tokenize(text)
        self.k = 0
        self.vars = tuple(variables)
        self.session = session

    def peek(self) -> _Tok:
        return self.toks[self.k]

    def next(self) -> _Tok:
        t = self.toks[self.k]
        self.k += 1
        return t

    def err(self, msg, tok: Optional[_Tok] = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.pos, self.text)

    def expect(self, op: str):
        t = self.peek()
        if t.kind != "op" or t.val != op:
            self.err(f"expected {op!r}")
        return self.next()

    def parse(self) -> Poly:
        if self.peek().kind == "end":
            self.err("empty expression")
        p = self.expr()
        t = self.peek()
        if t.kind != "end":
            if t.kind in ("num", "name") or (t.kind == "op" and t.val == "("):
                self.err("implicit multiplication is not allowed; use '*'")
            self.err(f"unexpected token {t.val!r}")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek().kind == "op" and self.peek().val in "+-":
            op = self.next().val
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.unary()
        while self.peek().kind == "op" and self.peek().val in ("*", "/"):
            optok = self.next()
            q = self.unary()
            if optok.val == "*":
                p = p * q
            else:
                if not q.is_const():
                    self.err("division by a non-constant", optok)
                c = q.const_value() if q.terms else 0
                if c == 0:
                    self.err("division by zero", optok)
                p = p / c
        return p

    def unary(self) -> Poly:
        t = self.peek()
        if t.kind == "op" and t.val in "+-":
            self.next()
            p = self.unary()
            return -p if t.val == "-" else p
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        t = self.peek()
        if t.kind == "op" and t.val in ("^", "**"):
            self.next()
            e = self.peek()
            if e.kind != "num" or "." in e.val:
                self.err("exponent must be a nonnegative integer")
            self.next()
            n = int(e.val)
            if n > 64:
                self.err("exponent too large", e)
            return base ** n
        return base

    def atom(self) -> Poly:
        t = self.next()
        if t.kind == "num":
            v = Fraction(t.val)
            nxt = self.peek()
            if nxt.kind == "name" and nxt.val == "i" and nxt.pos == t.end:
                self.next()
                return Poly.const(TowerElem.gauss(0, v), ())
            if nxt.kind == "name" and nxt.pos == t.end:
                self.err("implicit multiplication is not allowed; use '*'", nxt)
            return Poly.const(_norm(v), ())
        if t.kind == "name":
            if t.val == "i":
                return Poly.const(I, ())
            if t.val == "sqrt":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                if not inner.is_const():
                    self.err("sqrt of a non-constant", t)
                c = inner.const_value() if inner.terms else 0
                return Poly.const(self.session.sqrt(c), ())
            if t.val in self.vars:
                return Poly.var(t.val, (t.val,))
            self.err(f"unknown variable {t.val!r}", t)
        if t.kind == "op" and t.val == "(":
            p = self.expr()
            self.expect(")")
            return p
        if t.kind == "end":
            self.err("unexpected end of input", t)
        self.err(f"unexpected token {t.val!r}", t)


def parse_poly(text: str, variables: Sequence[str] = DEFAULT_VARS,
               session: Optional[Session] = None) -> Poly:
    if not isinstance(text, str):
        raise ParseError("expression must be a string", 0)
    return _Parser(text, variables, session or Session()).parse()


def parse_scalar(text: str, session: Optional[Session] = None):
    """A field literal such as ``3/2``, ``1/2+3i`` or ``sqrt(2)*(1+i)``."""
    p = parse_poly(text, (), session)
    return p.const_value() if p.terms else 0


def parse_map(f_text: str, g_text: str, session: Optional[Session] = None):
    """Parse two expressions in x, y, z into a QuadMap (degree <= 2 enforced)."""
    from .maps import QuadMap

    session = session or Session()
    polys = []
    for txt in (f_text, g_text):
        p = parse_poly(txt, DEFAULT_VARS, session)
        if p.degree() > 2:
            raise ParseError(f"degree {p.degree()} exceeds two", _degree_pos(txt), txt)
        polys.append(p)
    return QuadMap.from_polys(*polys)


def parse_coeff_map(f_list: Sequence, g_list: Sequence, session: Optional[Session] = None):
    """Coefficient form: two length-10 lists of literals (x^2, xy, xz, y^2, yz, z^2, x, y, z, 1)."""
    from .maps import QuadMap

    session = session or Session()
    comps = []
    for lst in (f_list, g_list):
        if not isinstance(lst, (list, tuple)) or len(lst) != 10:
            raise ParseError("coefficient form needs two lists of length 10", 0)
        comps.append([_literal(v, session) for v in lst])
    return QuadMap(*comps)


def _literal(v, session):
    if isinstance(v, bool):
        raise ParseError("boolean is not a field literal", 0)
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        return parse_scalar(v, session)
    if isinstance(v, dict):
        from .report import literal_from_json
        return literal_from_json(v, session)
    raise ParseError(f"unsupported literal {v!r}", 0)


def _degree_pos(text: str) -> int:
    m = re.search(r"\^\s*([3-9]|\d\d)", text)
    return m.start() if m else 0
