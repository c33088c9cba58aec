from __future__ import annotations

from typing import List, Optional

from ..index import Constraint, free_index_vars
from ..syntax.ast import (
    Arrow, Bang, BoundedBang, Forall, IVar, ListT, NatT, Real, Sort, Tensor,
    Type, UnitT,
)
from ..syntax.printer import pretty_print
from .env import Mismatch, TypeEnv
from .types import as_bang, expand_bounded, subst_type


def subtype(env: TypeEnv, t: Type, u: Type, at: Optional[str] = None,
            rule: str = "sub") -> List[Constraint]:
    """Constraints whose validity implies ``t <: u``; raise Mismatch otherwise.

    A larger grade may be forgotten: ``![I] A <: ![J] A`` needs ``J <= I``.
    """
    out: List[Constraint] = []
    _sub(env, t, u, at, rule, out)
    return out


def _mismatch(t: Type, u: Type, at, rule):
    raise Mismatch(f"type mismatch: {pretty_print(t)} is not a subtype of {pretty_print(u)}",
                   at, rule)


def _closed_bound(t: Type) -> bool:
    return isinstance(t, BoundedBang) and not free_index_vars(t.bound)


def _sub(env: TypeEnv, t: Type, u: Type, at, rule, out: List[Constraint]) -> None:
    if _closed_bound(t):
        return _sub(env, expand_bounded(t), u, at, rule, out)
    if _closed_bound(u):
        return _sub(env, t, expand_bounded(u), at, rule, out)
    if isinstance(t, Bang) or isinstance(u, Bang):
        bt, bu = as_bang(t), as_bang(u)
        out.append(env.constraint("LE", bu.grade, bt.grade, at, rule))
        return _sub(env, bt.body, bu.body, at, rule, out)
    if isinstance(t, Real) and isinstance(u, Real):
        return
    if isinstance(t, UnitT) and isinstance(u, UnitT):
        return
    if isinstance(t, NatT) and isinstance(u, NatT):
        out.append(env.constraint("EQ", t.size, u.size, at, rule))
        return
    if isinstance(t, ListT) and isinstance(u, ListT):
        out.append(env.constraint("EQ", t.size, u.size, at, rule))
        return _sub(env, t.elem, u.elem, at, rule, out)
    if isinstance(t, Tensor) and isinstance(u, Tensor):
        _sub(env, t.left, u.left, at, rule, out)
        return _sub(env, t.right, u.right, at, rule, out)
    if isinstance(t, Arrow) and isinstance(u, Arrow):
        _sub(env, as_bang(u.dom), as_bang(t.dom), at, rule, out)
        return _sub(env, t.cod, u.cod, at, rule, out)
    if isinstance(t, Forall) and isinstance(u, Forall) and t.sort is u.sort:
        v = env.fresh(t.var)
        inner = env.bind_index(v, t.sort)
        return _sub(inner, subst_type(t.body, t.var, IVar(v, t.sort)),
                    subst_type(u.body, u.var, IVar(v, u.sort)), at, rule, out)
    if isinstance(t, BoundedBang) and isinstance(u, BoundedBang):
        out.append(env.constraint("EQ", t.bound, u.bound, at, rule))
        v = env.fresh(t.var)
        inner = env.bind_index(v, Sort.SIZE)
        return _sub(inner, subst_type(t.body, t.var, IVar(v, Sort.SIZE)),
                    subst_type(u.body, u.var, IVar(v, Sort.SIZE)), at, rule, out)
    _mismatch(t, u, at, rule)
