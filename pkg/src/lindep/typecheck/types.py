"""Type-level operations: index substitution, well-formedness, quantifier
instantiation and expansion of bounded modalities."""

from __future__ import annotations

from typing import Mapping, Set

from ..index import (
    INF, IndexSortError, check_sort, eval_closed, free_index_vars, subst_index,
)
from ..syntax.ast import (
    Arrow, Bang, BoundedBang, Forall, INat, IVar, IndexTerm, ListT, NatT, Real,
    Sort, Tensor, Type, UnitT,
)
from ..syntax.printer import pretty_print


class Unsupported(Exception):
    """A construct outside the supported fragment, optionally with a position."""

    def __init__(self, msg: str, at=None):
        super().__init__(msg)
        self.at = at


def type_free_index_vars(t: Type) -> Set[str]:
    if isinstance(t, (Real, UnitT)):
        return set()
    if isinstance(t, NatT):
        return free_index_vars(t.size)
    if isinstance(t, ListT):
        return free_index_vars(t.size) | type_free_index_vars(t.elem)
    if isinstance(t, Bang):
        return free_index_vars(t.grade) | type_free_index_vars(t.body)
    if isinstance(t, (Tensor, Arrow)):
        a, b = (t.left, t.right) if isinstance(t, Tensor) else (t.dom, t.cod)
        return type_free_index_vars(a) | type_free_index_vars(b)
    if isinstance(t, Forall):
        return type_free_index_vars(t.body) - {t.var}
    if isinstance(t, BoundedBang):
        return free_index_vars(t.bound) | (type_free_index_vars(t.body) - {t.var})
    raise TypeError(t)


def _fresh_name(base: str, avoid: Set[str]) -> str:
    name = base + "'"
    while name in avoid:
        name += "'"
    return name


def subst_type(t: Type, var: str, j: IndexTerm) -> Type:
    """Capture-avoiding substitution of index ``j`` for ``var`` in ``t``."""
    if isinstance(t, (Real, UnitT)):
        return t
    if isinstance(t, NatT):
        return NatT(subst_index(t.size, var, j))
    if isinstance(t, ListT):
        return ListT(subst_index(t.size, var, j), subst_type(t.elem, var, j))
    if isinstance(t, Bang):
        return Bang(subst_index(t.grade, var, j), subst_type(t.body, var, j))
    if isinstance(t, Tensor):
        return Tensor(subst_type(t.left, var, j), subst_type(t.right, var, j))
    if isinstance(t, Arrow):
        return Arrow(subst_type(t.dom, var, j), subst_type(t.cod, var, j))
    if isinstance(t, (Forall, BoundedBang)):
        bound = subst_index(t.bound, var, j) if isinstance(t, BoundedBang) else None
        if t.var == var:
            body = t.body
            binder = t.var
        else:
            binder, body = t.var, t.body
            fv = free_index_vars(j)
            if binder in fv:
                new = _fresh_name(binder, fv | type_free_index_vars(body) | {var})
                body = subst_type(body, binder, IVar(new))
                binder = new
            body = subst_type(body, var, j)
        if isinstance(t, Forall):
            return Forall(binder, t.sort, body)
        return BoundedBang(binder, bound, body)
    raise TypeError(t)


def wf_type(t: Type, sorts: Mapping[str, Sort]) -> None:
    """Raise IndexSortError if an index in ``t`` is unbound or ill-sorted."""
    if isinstance(t, (Real, UnitT)):
        return
    if isinstance(t, NatT):
        check_sort(t.size, sorts, Sort.SIZE)
    elif isinstance(t, ListT):
        check_sort(t.size, sorts, Sort.SIZE)
        wf_type(t.elem, sorts)
    elif isinstance(t, Bang):
        check_sort(t.grade, sorts, Sort.SENS)
        wf_type(t.body, sorts)
    elif isinstance(t, Tensor):
        wf_type(t.left, sorts)
        wf_type(t.right, sorts)
    elif isinstance(t, Arrow):
        wf_type(t.dom, sorts)
        wf_type(t.cod, sorts)
    elif isinstance(t, Forall):
        wf_type(t.body, {**sorts, t.var: t.sort})
    elif isinstance(t, BoundedBang):
        check_sort(t.bound, sorts, Sort.SIZE)
        wf_type(t.body, {**sorts, t.var: Sort.SIZE})
    else:
        raise TypeError(t)


def instantiate_forall(t: Type, i: IndexTerm, sorts: Mapping[str, Sort] = {}) -> Type:
    """``(forall v : s. A) @[i]`` is ``A[i/v]``; ``i`` must have sort ``s``."""
    if not isinstance(t, Forall):
        raise IndexSortError(f"cannot apply an index to non-quantified type {pretty_print(t)}")
    check_sort(i, sorts, t.sort)
    return subst_type(t.body, t.var, i)


def expand_bounded(t: BoundedBang) -> Type:
    """``bang a < n . A`` as ``A[0/a] * (A[1/a] * (... * A[n-1/a]))``."""
    if free_index_vars(t.bound):
        raise Unsupported(f"bounded modality with open bound {pretty_print(t.bound)}")
    n = eval_closed(t.bound)
    if n == INF or n != int(n):
        raise Unsupported(f"bounded modality with non-natural bound {pretty_print(t.bound)}")
    n = int(n)
    if n == 0:
        return UnitT()
    factors = [subst_type(t.body, t.var, INat(k)) for k in range(n)]
    out = factors[-1]
    for f in reversed(factors[:-1]):
        out = Tensor(f, out)
    return out


def as_bang(t: Type) -> Bang:
    """View a type as a graded modality; a plain ``A`` is ``![1] A``."""
    return t if isinstance(t, Bang) else Bang(INat(1), t)
