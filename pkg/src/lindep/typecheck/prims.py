"""Type schemes of the primitive constants."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict

from ..syntax.ast import (
    Arrow, Bang, Forall, INat, IPow, IProd, IRat, ISum, IVar, ListT, NatT,
    Prim, Real, Sort, Type, fun_type,
)

ONE = INat(1)


def _grade_literal(q: Fraction):
    q = abs(q)
    return INat(int(q)) if q.denominator == 1 else IRat(q)


def cons_scheme(elem: Type = Real()) -> Type:
    j = IVar("j", Sort.SIZE)
    return Forall("j", Sort.SIZE,
                  Arrow(Bang(ONE, elem),
                        Arrow(Bang(ONE, ListT(j, elem)), ListT(ISum(j, ONE), elem))))


def iter_scheme(product: bool = False) -> Type:
    """``forall i. forall r. Nat[i] -> (![r] R -o R) -> ![g] R -o R``.

    The grade ``g`` is ``r ^ i``: composing an r-sensitive map i times
    scales distances by r^i. ``product=True`` installs ``r * i`` instead.
    """
    i = IVar("i", Sort.SIZE)
    r = IVar("r", Sort.SENS)
    grade = IProd(r, i) if product else IPow(r, i)
    body = fun_type(NatT(i),
                    fun_type(Arrow(Bang(r, Real()), Real()),
                             Arrow(Bang(grade, Real()), Real())))
    return Forall("i", Sort.SIZE, Forall("r", Sort.SENS, body))


class PrimSig:
    """Lookup table from primitive constants to closed type schemes."""

    def __init__(self, paper_iter: bool = False):
        self.paper_iter = paper_iter
        self.table: Dict[str, Type] = {
            "add": Arrow(Bang(ONE, Real()), Arrow(Bang(ONE, Real()), Real())),
            "iter": iter_scheme(paper_iter),
            "nil": ListT(INat(0), Real()),
            "cons": cons_scheme(),
        }

    def type_of(self, prim: Prim) -> Type:
        if prim.name == "cmul":
            return Arrow(Bang(_grade_literal(prim.coeff), Real()), Real())
        return self.table[prim.name]
