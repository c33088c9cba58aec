"""Usage contexts: how many scaled copies of each free variable a term uses.

A usage is a plain ``dict`` from term variable to a sensitivity index term.
Missing entries mean grade 0 and zero grades are never stored.
"""

from __future__ import annotations

from typing import Dict, Iterable

from ..index import leq, normalize
from ..syntax.ast import INat, IProd, ISum, IndexTerm

Usage = Dict[str, IndexTerm]

ZERO = INat(0)
ONE = INat(1)


def _is_zero(i: IndexTerm) -> bool:
    return normalize(i).is_zero


def _is_one(i: IndexTerm) -> bool:
    return normalize(i) == normalize(ONE)


def ctx_add(u: Usage, w: Usage) -> Usage:
    out = dict(u)
    for x, g in w.items():
        if x in out:
            out[x] = ISum(out[x], g)
        else:
            out[x] = g
    return {x: g for x, g in out.items() if not _is_zero(g)}


def ctx_scale(scalar: IndexTerm, u: Usage) -> Usage:
    if _is_one(scalar):
        return dict(u)
    out = {}
    for x, g in u.items():
        scaled = scalar if _is_one(g) else IProd(scalar, g)
        if not _is_zero(scaled):
            out[x] = scaled
    return out


def ctx_remove(u: Usage, names: Iterable[str]) -> Usage:
    names = set(names)
    return {x: g for x, g in u.items() if x not in names}


def grade_of(u: Usage, x: str) -> IndexTerm:
    return u.get(x, ZERO)


def join_grade(a: IndexTerm, b: IndexTerm) -> IndexTerm:
    """An upper bound of both grades: the larger one when provable, else the sum."""
    if leq(a, b):
        return b
    if leq(b, a):
        return a
    return ISum(a, b)


def ctx_join(u: Usage, w: Usage) -> Usage:
    out = {}
    for x in list(u) + [y for y in w if y not in u]:
        out[x] = join_grade(grade_of(u, x), grade_of(w, x))
    return {x: g for x, g in out.items() if not _is_zero(g)}
