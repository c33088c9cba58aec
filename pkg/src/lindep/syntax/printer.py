"""Pretty printer. Output re-parses to an alpha-equivalent node."""

from __future__ import annotations

from fractions import Fraction

from .ast import (
    App, Arrow, Bang, BoundedBang, Check, Def, Forall, IApp, IInf, INat,
    IPow, IProd, IRat, ISum, IVar, IndexTerm, Lam, LetPair, ListCase, ListT,
    NatCase, NatLit, NatT, Pair, Prim, Program, Real, RealLit, Tensor, Term,
    Type, UnitLit, UnitT, Var,
)


def format_fraction(q: Fraction, force_point: bool = False) -> str:
    """Exact text for ``q``: integer, terminating decimal, or ``p/q``."""
    if q.denominator == 1:
        return f"{q.numerator}.0" if force_point else str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    places = max(twos, fives)
    scaled = abs(q.numerator) * (10 ** places) // q.denominator
    digits = str(scaled).rjust(places + 1, "0")
    sign = "-" if q < 0 else ""
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


# -- index terms ------------------------------------------------------------

_I_SUM, _I_PROD, _I_ATOM = 0, 1, 2


def _index(i: IndexTerm, level: int) -> str:
    if isinstance(i, IVar):
        return i.name
    if isinstance(i, INat):
        return str(i.value)
    if isinstance(i, IRat):
        return format_fraction(i.value, force_point=True)
    if isinstance(i, IInf):
        return "inf"
    if isinstance(i, ISum):
        s = f"{_index(i.left, _I_SUM)} + {_index(i.right, _I_PROD)}"
        return s if level <= _I_SUM else f"({s})"
    if isinstance(i, IProd):
        s = f"{_index(i.left, _I_PROD)} * {_index(i.right, _I_ATOM)}"
        return s if level <= _I_PROD else f"({s})"
    if isinstance(i, IPow):
        s = f"{_index(i.base, _I_ATOM + 1)} ^ {_index(i.exp, _I_ATOM + 1)}"
        return s if level <= _I_ATOM else f"({s})"
    raise TypeError(f"not an index term: {i!r}")


# -- types --------------------------------------------------------------------

_T_TOP, _T_TENSOR, _T_ATOM = 0, 1, 2


def _type(t: Type, level: int) -> str:
    if isinstance(t, Real):
        return "R"
    if isinstance(t, UnitT):
        return "Unit"
    if isinstance(t, NatT):
        return f"Nat[{_index(t.size, _I_SUM)}]"
    if isinstance(t, ListT):
        return f"List[{_index(t.size, _I_SUM)}] {_type(t.elem, _T_ATOM)}"
    if isinstance(t, Bang):
        return f"![{_index(t.grade, _I_SUM)}] {_type(t.body, _T_ATOM)}"
    if isinstance(t, Tensor):
        s = f"{_type(t.left, _T_ATOM)} * {_type(t.right, _T_ATOM)}"
        return s if level <= _T_TENSOR else f"({s})"
    if isinstance(t, Arrow):
        if isinstance(t.dom, Bang) and isinstance(t.dom.grade, IInf):
            s = f"{_type(t.dom.body, _T_TENSOR)} -> {_type(t.cod, _T_TOP)}"
        else:
            s = f"{_type(t.dom, _T_TENSOR)} -o {_type(t.cod, _T_TOP)}"
        return s if level <= _T_TOP else f"({s})"
    if isinstance(t, Forall):
        s = f"forall {t.var} : {t.sort}. {_type(t.body, _T_TOP)}"
        return s if level <= _T_TOP else f"({s})"
    if isinstance(t, BoundedBang):
        s = f"bang {t.var} < {_index(t.bound, _I_SUM)} . {_type(t.body, _T_TOP)}"
        return s if level <= _T_TOP else f"({s})"
    raise TypeError(f"not a type: {t!r}")


# -- terms --------------------------------------------------------------------

_E_TOP, _E_APP, _E_ATOM = 0, 1, 2


def _term(e: Term, level: int) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, RealLit):
        return repr(float(e.value))
    if isinstance(e, NatLit):
        return str(e.value)
    if isinstance(e, UnitLit):
        return "()"
    if isinstance(e, Prim):
        if e.name == "cmul":
            return f"cmul({format_fraction(e.coeff)})"
        return e.name
    if isinstance(e, Pair):
        return f"({_term(e.left, _E_TOP)}, {_term(e.right, _E_TOP)})"
    if isinstance(e, App):
        s = f"{_term(e.fn, _E_APP)} {_term(e.arg, _E_ATOM)}"
        return s if level <= _E_APP else f"({s})"
    if isinstance(e, IApp):
        s = f"{_term(e.fn, _E_APP)} @[{_index(e.index, _I_SUM)}]"
        return s if level <= _E_APP else f"({s})"
    if isinstance(e, Lam):
        s = (f"fun ({e.var} :[{_index(e.grade, _I_SUM)}] {_type(e.ty, _T_TOP)}) => "
             f"{_term(e.body, _E_TOP)}")
    elif isinstance(e, LetPair):
        s = (f"let ({e.left}, {e.right}) = {_term(e.bound, _E_APP)} in "
             f"{_term(e.body, _E_TOP)}")
    elif isinstance(e, NatCase):
        s = (f"case {_term(e.scrutinee, _E_APP)} {{ Z => {_term(e.zero, _E_TOP)} "
             f"| S {e.pred} => {_term(e.succ, _E_TOP)} }}")
    elif isinstance(e, ListCase):
        s = (f"lcase {_term(e.scrutinee, _E_APP)} {{ nil => {_term(e.nil, _E_TOP)} "
             f"| cons {e.head} {e.tail} => {_term(e.cons, _E_TOP)} }}")
    else:
        raise TypeError(f"not a term: {e!r}")
    return s if level <= _E_TOP else f"({s})"


def pretty_print(node) -> str:
    """Render an index term, type, term, declaration or program as source text."""
    if isinstance(node, IndexTerm):
        return _index(node, _I_SUM)
    if isinstance(node, Type):
        return _type(node, _T_TOP)
    if isinstance(node, Term):
        return _term(node, _E_TOP)
    if isinstance(node, Def):
        return f"def {node.name} : {_type(node.ty, _T_TOP)} = {_term(node.body, _E_TOP)} ;"
    if isinstance(node, Check):
        return f"check {_term(node.body, _E_TOP)} : {_type(node.ty, _T_TOP)} ;"
    if isinstance(node, Program):
        return "".join(pretty_print(d) + "\n" for d in node.decls)
    raise TypeError(f"cannot print {node!r}")
