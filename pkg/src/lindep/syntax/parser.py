"""Tokenizer and recursive-descent parser for ``.fz`` source text."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from .ast import (
    App, Arrow, Bang, BoundedBang, Check, Def, Forall, IApp, IInf, INat,
    IPow, IProd, IRat, ISum, IVar, IndexTerm, Lam, LetPair, ListCase, ListT,
    NatCase, NatLit, NatT, Pair, Prim, Program, Real, RealLit, Sort, Tensor,
    Term, Type, UnitLit, UnitT, Var,
)

KEYWORDS = frozenset({
    "def", "check", "fun", "let", "in", "case", "lcase", "Z", "S",
    "forall", "bang", "size", "sens", "inf", "R", "Unit", "Nat", "List",
    "add", "cmul", "iter", "nil", "cons",
})


class ParseError(Exception):
    def __init__(self, msg: str, line: int, col: int, filename: str = "<input>"):
        super().__init__(f"{filename}:{line}:{col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col
        self.filename = filename


@dataclass
class Token:
    kind: str  # IDENT, KW, NAT, NUM, SYM, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<num>-?[0-9]+(?:/[0-9]+|(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>=>|-o|->|[()\[\]{}:;,.*+^<!@|=])
""", re.VERBOSE)


def tokenize(source: str, filename: str = "<input>") -> List[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, col, filename)
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "num":
            if re.fullmatch(r"[0-9]+", text):
                tokens.append(Token("NAT", text, line, col))
            else:
                tokens.append(Token("NUM", text, line, col))
        elif kind == "ident":
            tokens.append(Token("KW" if text in KEYWORDS else "IDENT", text, line, col))
        elif kind == "sym":
            tokens.append(Token("SYM", text, line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


_ATOM_START_KW = {"add", "cmul", "iter", "nil", "cons"}


class Parser:
    def __init__(self, source: str, filename: str = "<input>"):
        self.filename = filename
        self.toks = tokenize(source, filename)
        self.i = 0
        # sorts of index variables bound by enclosing binders
        self.isorts: Dict[str, Sort] = {}

    # -- token helpers -----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col, self.filename)

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("SYM", "KW") and t.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> str:
        t = self.tok
        if t.kind != "IDENT":
            self.error(f"expected identifier, found {t.text or 'end of input'!r}")
        self.i += 1
        return t.text

    # -- index terms -------------------------------------------------------

    def index(self) -> IndexTerm:
        left = self.iterm()
        while self.accept("+"):
            left = ISum(left, self.iterm())
        return left

    def iterm(self) -> IndexTerm:
        left = self.ifact()
        while self.accept("*"):
            left = IProd(left, self.ifact())
        return left

    def ifact(self) -> IndexTerm:
        base = self.iatom()
        if self.accept("^"):
            return IPow(base, self.iatom())
        return base

    def iatom(self) -> IndexTerm:
        t = self.tok
        if t.kind == "NAT":
            self.i += 1
            return INat(int(t.text))
        if t.kind == "NUM":
            self.i += 1
            try:
                q = Fraction(t.text)
            except (ValueError, ZeroDivisionError):
                self.error(f"bad rational literal {t.text!r}", t)
            if q < 0:
                self.error("index literals must be nonnegative", t)
            return IRat(q)
        if self.accept("inf"):
            return IInf()
        if t.kind == "IDENT":
            self.i += 1
            return IVar(t.text, self.isorts.get(t.text))
        if self.accept("("):
            inner = self.index()
            self.expect(")")
            return inner
        self.error(f"expected index term, found {t.text or 'end of input'!r}")

    # -- types -------------------------------------------------------------

    def with_binder(self, name: str, sort: Sort, parse):
        saved = self.isorts.get(name)
        self.isorts[name] = sort
        try:
            return parse()
        finally:
            if saved is None:
                self.isorts.pop(name, None)
            else:
                self.isorts[name] = saved

    def type(self) -> Type:
        if self.accept("forall"):
            var = self.ident()
            self.expect(":")
            if self.accept("size"):
                sort = Sort.SIZE
            elif self.accept("sens"):
                sort = Sort.SENS
            else:
                self.error("expected 'size' or 'sens'")
            self.expect(".")
            return Forall(var, sort, self.with_binder(var, sort, self.type))
        if self.accept("bang"):
            var = self.ident()
            self.expect("<")
            bound = self.index()
            self.expect(".")
            return BoundedBang(var, bound, self.with_binder(var, Sort.SIZE, self.type))
        return self.arrow()

    def arrow(self) -> Type:
        left = self.tensor()
        # a codomain may itself start with a binder, which extends rightwards
        if self.accept("-o"):
            return Arrow(left, self.type())
        if self.accept("->"):
            return Arrow(Bang(IInf(), left), self.type())
        return left

    def tensor(self) -> Type:
        left = self.atom_type()
        if self.accept("*"):
            return Tensor(left, self.atom_type())
        return left

    def atom_type(self) -> Type:
        if self.accept("R"):
            return Real()
        if self.accept("Unit"):
            return UnitT()
        if self.accept("Nat"):
            self.expect("[")
            size = self.index()
            self.expect("]")
            return NatT(size)
        if self.accept("List"):
            self.expect("[")
            size = self.index()
            self.expect("]")
            return ListT(size, self.atom_type())
        if self.accept("!"):
            self.expect("[")
            grade = self.index()
            self.expect("]")
            return Bang(grade, self.atom_type())
        if self.accept("("):
            inner = self.type()
            self.expect(")")
            return inner
        self.error(f"expected type, found {self.tok.text or 'end of input'!r}")

    # -- terms -------------------------------------------------------------

    def term(self) -> Term:
        t = self.tok
        pos = (t.line, t.col)
        if self.accept("fun"):
            self.expect("(")
            var = self.ident()
            self.expect(":")
            self.expect("[")
            grade = self.index()
            self.expect("]")
            ty = self.type()
            self.expect(")")
            self.expect("=>")
            return Lam(var, grade, ty, self.term(), pos=pos)
        if self.accept("let"):
            self.expect("(")
            x = self.ident()
            self.expect(",")
            y = self.ident()
            self.expect(")")
            self.expect("=")
            bound = self.term()
            self.expect("in")
            return LetPair(x, y, bound, self.term(), pos=pos)
        if self.accept("case"):
            scrut = self.term()
            self.expect("{")
            self.expect("Z")
            self.expect("=>")
            zero = self.term()
            self.expect("|")
            self.expect("S")
            m = self.ident()
            self.expect("=>")
            succ = self.term()
            self.expect("}")
            return NatCase(scrut, zero, m, succ, pos=pos)
        if self.accept("lcase"):
            scrut = self.term()
            self.expect("{")
            self.expect("nil")
            self.expect("=>")
            nil = self.term()
            self.expect("|")
            self.expect("cons")
            h = self.ident()
            tl = self.ident()
            self.expect("=>")
            cons = self.term()
            self.expect("}")
            return ListCase(scrut, nil, h, tl, cons, pos=pos)
        return self.app()

    def starts_atom(self) -> bool:
        t = self.tok
        if t.kind in ("IDENT", "NAT", "NUM"):
            return True
        if t.kind == "KW":
            return t.text in _ATOM_START_KW
        return t.kind == "SYM" and t.text == "("

    def app(self) -> Term:
        head = self.atom()
        while True:
            t = self.tok
            if self.at("@"):
                self.i += 1
                self.expect("[")
                idx = self.index()
                self.expect("]")
                head = IApp(head, idx, pos=(t.line, t.col))
            elif self.starts_atom():
                head = App(head, self.atom(), pos=(t.line, t.col))
            else:
                return head

    def atom(self) -> Term:
        t = self.tok
        pos = (t.line, t.col)
        if t.kind == "IDENT":
            self.i += 1
            return Var(t.text, pos=pos)
        if t.kind == "NAT":
            self.i += 1
            return NatLit(int(t.text), pos=pos)
        if t.kind == "NUM":
            self.i += 1
            try:
                return RealLit(float(Fraction(t.text)), pos=pos)
            except (ValueError, ZeroDivisionError):
                self.error(f"bad numeric literal {t.text!r}", t)
        if self.accept("add"):
            return Prim("add", pos=pos)
        if self.accept("iter"):
            return Prim("iter", pos=pos)
        if self.accept("nil"):
            return Prim("nil", pos=pos)
        if self.accept("cons"):
            return Prim("cons", pos=pos)
        if self.accept("cmul"):
            self.expect("(")
            c = self.tok
            if c.kind not in ("NAT", "NUM"):
                self.error("cmul expects a rational literal")
            self.i += 1
            try:
                q = Fraction(c.text)
            except (ValueError, ZeroDivisionError):
                self.error(f"bad rational literal {c.text!r}", c)
            self.expect(")")
            return Prim("cmul", q, pos=pos)
        if self.accept("("):
            if self.accept(")"):
                return UnitLit(pos=pos)
            first = self.term()
            if self.accept(","):
                second = self.term()
                self.expect(")")
                return Pair(first, second, pos=pos)
            self.expect(")")
            return first
        self.error(f"expected term, found {t.text or 'end of input'!r}")

    # -- programs ----------------------------------------------------------

    def program(self) -> Program:
        decls = []
        seen = set()
        while self.tok.kind != "EOF":
            t = self.tok
            pos = (t.line, t.col)
            if self.accept("def"):
                name_tok = self.tok
                name = self.ident()
                if name in seen:
                    self.error(f"duplicate definition {name!r}", name_tok)
                seen.add(name)
                self.expect(":")
                ty = self.type()
                self.expect("=")
                body = self.with_leading_binders(ty, self.term)
                self.expect(";")
                decls.append(Def(name, ty, body, pos=pos))
            elif self.accept("check"):
                body = self.term()
                self.expect(":")
                ty = self.type()
                self.expect(";")
                decls.append(Check(body, ty, pos=pos))
            else:
                self.error(f"expected 'def' or 'check', found {t.text!r}")
        return Program(tuple(decls), filename=self.filename)

    def with_leading_binders(self, ty: Type, parse):
        # a definition body sees the index variables its declared type quantifies
        if isinstance(ty, Forall):
            return self.with_binder(ty.var, ty.sort,
                                    lambda: self.with_leading_binders(ty.body, parse))
        return parse()

    def finish(self):
        if self.tok.kind != "EOF":
            self.error(f"unexpected {self.tok.text!r}")


def parse_program(source: str, filename: str = "<input>") -> Program:
    return Parser(source, filename).program()


def _parse_whole(source: str, rule: str, filename: str):
    p = Parser(source, filename)
    node = getattr(p, rule)()
    p.finish()
    return node


def parse_index(source: str, filename: str = "<input>") -> IndexTerm:
    return _parse_whole(source, "index", filename)


def parse_type(source: str, filename: str = "<input>") -> Type:
    return _parse_whole(source, "type", filename)


def parse_term(source: str, filename: str = "<input>") -> Term:
    return _parse_whole(source, "term", filename)
