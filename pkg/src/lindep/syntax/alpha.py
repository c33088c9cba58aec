"""Alpha-equivalence via canonical renaming of bound variables."""

from __future__ import annotations

from typing import Dict

from .ast import (
    App, Arrow, Bang, BoundedBang, Check, Def, Forall, IApp, INat, IPow,
    IProd, IRat, ISum, IVar, IInf, IndexTerm, Lam, LetPair, ListCase, ListT,
    NatCase, NatLit, NatT, Pair, Prim, Program, Real, RealLit, Tensor, Term,
    Type, UnitLit, UnitT, Var,
)

# '%' cannot occur in a source identifier, so canonical names never clash
# with free variables.


def _bind(env: Dict[str, str], name: str, depth: int):
    inner = dict(env)
    inner[name] = f"%{depth}"
    return inner


def _canon_index(i: IndexTerm, ienv: Dict[str, str]) -> IndexTerm:
    if isinstance(i, IVar):
        return IVar(ienv.get(i.name, i.name))
    if isinstance(i, (INat, IRat, IInf)):
        return i
    if isinstance(i, ISum):
        return ISum(_canon_index(i.left, ienv), _canon_index(i.right, ienv))
    if isinstance(i, IProd):
        return IProd(_canon_index(i.left, ienv), _canon_index(i.right, ienv))
    if isinstance(i, IPow):
        return IPow(_canon_index(i.base, ienv), _canon_index(i.exp, ienv))
    raise TypeError(i)


def _canon_type(t: Type, ienv: Dict[str, str], depth: int) -> Type:
    if isinstance(t, (Real, UnitT)):
        return t
    if isinstance(t, NatT):
        return NatT(_canon_index(t.size, ienv))
    if isinstance(t, ListT):
        return ListT(_canon_index(t.size, ienv), _canon_type(t.elem, ienv, depth))
    if isinstance(t, Tensor):
        return Tensor(_canon_type(t.left, ienv, depth), _canon_type(t.right, ienv, depth))
    if isinstance(t, Bang):
        return Bang(_canon_index(t.grade, ienv), _canon_type(t.body, ienv, depth))
    if isinstance(t, Arrow):
        return Arrow(_canon_type(t.dom, ienv, depth), _canon_type(t.cod, ienv, depth))
    if isinstance(t, Forall):
        inner = _bind(ienv, t.var, depth)
        return Forall(f"%{depth}", t.sort, _canon_type(t.body, inner, depth + 1))
    if isinstance(t, BoundedBang):
        inner = _bind(ienv, t.var, depth)
        return BoundedBang(f"%{depth}", _canon_index(t.bound, ienv),
                           _canon_type(t.body, inner, depth + 1))
    raise TypeError(t)


def _canon_term(e: Term, env: Dict[str, str], ienv: Dict[str, str], depth: int) -> Term:
    if isinstance(e, Var):
        return Var(env.get(e.name, e.name))
    if isinstance(e, (RealLit, NatLit, UnitLit, Prim)):
        return e
    if isinstance(e, Lam):
        ty = _canon_type(e.ty, ienv, depth)
        grade = _canon_index(e.grade, ienv)
        body = _canon_term(e.body, _bind(env, e.var, depth), ienv, depth + 1)
        return Lam(f"%{depth}", grade, ty, body)
    if isinstance(e, App):
        return App(_canon_term(e.fn, env, ienv, depth), _canon_term(e.arg, env, ienv, depth))
    if isinstance(e, IApp):
        return IApp(_canon_term(e.fn, env, ienv, depth), _canon_index(e.index, ienv))
    if isinstance(e, Pair):
        return Pair(_canon_term(e.left, env, ienv, depth), _canon_term(e.right, env, ienv, depth))
    if isinstance(e, LetPair):
        inner = _bind(_bind(env, e.left, depth), e.right, depth + 1)
        return LetPair(f"%{depth}", f"%{depth + 1}",
                       _canon_term(e.bound, env, ienv, depth),
                       _canon_term(e.body, inner, ienv, depth + 2))
    if isinstance(e, NatCase):
        return NatCase(_canon_term(e.scrutinee, env, ienv, depth),
                       _canon_term(e.zero, env, ienv, depth),
                       f"%{depth}",
                       _canon_term(e.succ, _bind(env, e.pred, depth), ienv, depth + 1))
    if isinstance(e, ListCase):
        inner = _bind(_bind(env, e.head, depth), e.tail, depth + 1)
        return ListCase(_canon_term(e.scrutinee, env, ienv, depth),
                        _canon_term(e.nil, env, ienv, depth),
                        f"%{depth}", f"%{depth + 1}",
                        _canon_term(e.cons, inner, ienv, depth + 2))
    raise TypeError(e)


def _canon_decl(d, depth: int = 0):
    # index variables quantified by a definition's type scope over its body
    ienv: Dict[str, str] = {}
    t = d.ty
    while isinstance(t, Forall):
        ienv = _bind(ienv, t.var, depth)
        depth += 1
        t = t.body
    ty = _canon_type(d.ty, {}, 0)
    body = _canon_term(d.body, {}, ienv, depth)
    if isinstance(d, Def):
        return ("def", d.name, ty, body)
    return ("check", ty, body)


def canonical(node):
    if isinstance(node, IndexTerm):
        return _canon_index(node, {})
    if isinstance(node, Type):
        return _canon_type(node, {}, 0)
    if isinstance(node, Term):
        return _canon_term(node, {}, {}, 0)
    if isinstance(node, (Def, Check)):
        return _canon_decl(node)
    if isinstance(node, Program):
        return tuple(_canon_decl(d) for d in node.decls)
    raise TypeError(f"cannot canonicalize {node!r}")


def alpha_equiv(a, b) -> bool:
    """True iff ``a`` and ``b`` are equal up to renaming of bound variables."""
    return canonical(a) == canonical(b)
