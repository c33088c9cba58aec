"""Random generators for index terms, types, values, terms and programs.

Each generator takes a ``random.Random`` so the same code drives seeded
acceptance runs and hypothesis (through ``st.randoms``).
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Tuple

from lindep.index import INF
from lindep.syntax import (
    App, Arrow, Bang, BoundedBang, Check, Def, Forall, IApp, IInf, INat, IPow,
    IProd, IRat, ISum, IVar, Lam, LetPair, ListCase, ListT, NatCase, NatLit,
    NatT, Pair, Prim, Program, Real, RealLit, Sort, Tensor, UnitLit, UnitT, Var,
)
from lindep.semantics import ListV, PairV, UNIT
from lindep.typecheck import expand_bounded

SIZE_VARS = ("i", "j", "k")
SENS_VARS = ("r", "s")
TERM_VARS = ("x", "y", "z", "f", "g", "xs", "h'")

SIZE_VALUES = range(0, 21)
SENS_VALUES = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(7), INF)


# -- index terms --------------------------------------------------------------

def gen_index(rng: random.Random, scope: Dict[str, Sort], sort: Sort = Sort.SENS,
              depth: int = 3, allow_pow: bool = True):
    """A well-sorted index term. Exponents stay small so closed evaluation
    under valuations up to 20 remains cheap."""
    names = [v for v, s in scope.items() if s is Sort.SIZE or sort is Sort.SENS]
    if depth <= 0 or rng.random() < 0.3:
        roll = rng.random()
        if names and roll < 0.45:
            return IVar(rng.choice(names))
        if sort is Sort.SIZE or roll < 0.7:
            return INat(rng.randint(0, 3))
        if roll < 0.93:
            return IRat(Fraction(rng.randint(0, 9), rng.choice((1, 2, 3, 4))))
        return IInf()
    op = rng.random()
    if op < 0.4:
        return ISum(gen_index(rng, scope, sort, depth - 1, allow_pow),
                    gen_index(rng, scope, sort, depth - 1, allow_pow))
    if op < 0.8 or not allow_pow:
        return IProd(gen_index(rng, scope, sort, depth - 1, allow_pow),
                     gen_index(rng, scope, sort, depth - 1, allow_pow))
    base = gen_index(rng, scope, sort, 1, allow_pow=False)
    sizes = [v for v, s in scope.items() if s is Sort.SIZE]
    if sizes and rng.random() < 0.5:
        exp = IVar(rng.choice(sizes))
    else:
        exp = INat(rng.randint(0, 3))
    return IPow(base, exp)


def index_scope(rng: random.Random) -> Dict[str, Sort]:
    scope = {v: Sort.SIZE for v in rng.sample(SIZE_VARS, rng.randint(0, 3))}
    scope.update({v: Sort.SENS for v in rng.sample(SENS_VARS, rng.randint(0, 2))})
    return scope


def random_valuation(rng: random.Random, scope: Dict[str, Sort]) -> Dict[str, object]:
    return {v: rng.choice(SIZE_VALUES) if s is Sort.SIZE else rng.choice(SENS_VALUES)
            for v, s in scope.items()}


# -- types --------------------------------------------------------------------

def gen_type(rng: random.Random, scope: Dict[str, Sort], depth: int = 3):
    if depth <= 0 or rng.random() < 0.25:
        return rng.choice((Real(), UnitT(), NatT(gen_index(rng, scope, Sort.SIZE, 1))))
    op = rng.randrange(7)
    if op == 0:
        return ListT(gen_index(rng, scope, Sort.SIZE, 1), gen_type(rng, scope, depth - 1))
    if op == 1:
        return Tensor(gen_type(rng, scope, depth - 1), gen_type(rng, scope, depth - 1))
    if op == 2:
        return Bang(gen_index(rng, scope, Sort.SENS, 2), gen_type(rng, scope, depth - 1))
    if op == 3:
        return Arrow(gen_type(rng, scope, depth - 1), gen_type(rng, scope, depth - 1))
    if op == 4:
        return Arrow(Bang(IInf(), gen_type(rng, scope, depth - 1)), gen_type(rng, scope, depth - 1))
    if op == 5:
        v = rng.choice(SIZE_VARS + SENS_VARS)
        s = Sort.SIZE if v in SIZE_VARS else Sort.SENS
        return Forall(v, s, gen_type(rng, {**scope, v: s}, depth - 1))
    v = rng.choice(SIZE_VARS)
    bound = gen_index(rng, scope, Sort.SIZE, 1)
    return BoundedBang(v, bound, gen_type(rng, {**scope, v: Sort.SIZE}, depth - 1))


# -- terms --------------------------------------------------------------------

REALS = (0.0, 1.5, -2.25, 1e-05, 3.0e10, 0.1, 100.0)


def gen_real(rng: random.Random) -> float:
    return rng.choice(REALS) if rng.random() < 0.5 else rng.uniform(-100, 100)


def gen_term(rng: random.Random, scope: Dict[str, Sort], names: List[str], depth: int = 4):
    if depth <= 0 or rng.random() < 0.2:
        roll = rng.random()
        if names and roll < 0.4:
            return Var(rng.choice(names))
        if roll < 0.55:
            return RealLit(gen_real(rng))
        if roll < 0.65:
            return NatLit(rng.randint(0, 5))
        if roll < 0.7:
            return UnitLit()
        if roll < 0.85:
            q = Fraction(rng.randint(-9, 9), rng.choice((1, 2, 4)))
            return Prim("cmul", q)
        return Prim(rng.choice(("add", "iter", "nil", "cons")))
    op = rng.randrange(8)
    sub = lambda ns=names: gen_term(rng, scope, ns, depth - 1)  # noqa: E731
    if op == 0:
        x = rng.choice(TERM_VARS)
        return Lam(x, gen_index(rng, scope, Sort.SENS, 1), gen_type(rng, scope, 2),
                   sub(names + [x]))
    if op in (1, 2):
        return App(sub(), sub())
    if op == 3:
        return IApp(sub(), gen_index(rng, scope, rng.choice(list(Sort)), 2))
    if op == 4:
        return Pair(sub(), sub())
    if op == 5:
        x, y = rng.sample(TERM_VARS, 2)
        return LetPair(x, y, sub(), sub(names + [x, y]))
    if op == 6:
        m = rng.choice(TERM_VARS)
        return NatCase(sub(), sub(), m, sub(names + [m]))
    h, t = rng.sample(TERM_VARS, 2)
    return ListCase(sub(), sub(), h, t, sub(names + [h, t]))


def gen_program(rng: random.Random, filename: str = "<random>") -> Program:
    decls = []
    defined: List[str] = []
    for n in range(rng.randint(1, 4)):
        scope = index_scope(rng) if rng.random() < 0.3 else {}
        ty = gen_type(rng, scope, 3)
        for v, s in reversed(list(scope.items())):
            ty = Forall(v, s, ty)
        body = gen_term(rng, scope, list(defined), 4)
        if rng.random() < 0.8:
            name = f"d{n}"
            decls.append(Def(name, ty, body))
            defined.append(name)
        else:
            decls.append(Check(body, ty))
    return Program(tuple(decls), filename)


# -- closed arrow-free types and their values -----------------------------------

def gen_metric_type(rng: random.Random, depth: int = 3):
    if depth <= 0 or rng.random() < 0.3:
        return rng.choice((Real(), Real(), UnitT(), NatT(INat(rng.randint(0, 4)))))
    op = rng.randrange(4)
    if op == 0:
        return ListT(INat(rng.randint(0, 4)), gen_metric_type(rng, depth - 1))
    if op == 1:
        return Tensor(gen_metric_type(rng, depth - 1), gen_metric_type(rng, depth - 1))
    if op == 2:
        grade = rng.choice((INat(0), INat(1), INat(3), IRat(Fraction(1, 2)),
                            IRat(Fraction(5, 4)), IInf()))
        return Bang(grade, gen_metric_type(rng, depth - 1))
    body = rng.choice((NatT(IVar("a")), Real(), ListT(IVar("a"), Real())))
    return BoundedBang("a", INat(rng.randint(0, 3)), body)


def gen_value(rng: random.Random, t):
    if isinstance(t, Real):
        return rng.uniform(-100.0, 100.0)
    if isinstance(t, UnitT):
        return UNIT
    if isinstance(t, NatT):
        return t.size.value
    if isinstance(t, ListT):
        return ListV(tuple(gen_value(rng, t.elem) for _ in range(t.size.value)))
    if isinstance(t, Tensor):
        return PairV(gen_value(rng, t.left), gen_value(rng, t.right))
    if isinstance(t, Bang):
        return gen_value(rng, t.body)
    if isinstance(t, BoundedBang):
        return gen_value(rng, expand_bounded(t))
    raise TypeError(t)


def gen_value_triple(rng: random.Random) -> Tuple[object, object, object, object]:
    t = gen_metric_type(rng)
    return t, gen_value(rng, t), gen_value(rng, t), gen_value(rng, t)


# -- constraints ----------------------------------------------------------------

def _rearrange(rng: random.Random, i):
    """An index term equal to ``i`` under every valuation, built by
    commuting, re-associating and distributing."""
    if isinstance(i, ISum):
        a, b = _rearrange(rng, i.left), _rearrange(rng, i.right)
        return ISum(b, a) if rng.random() < 0.5 else ISum(a, b)
    if isinstance(i, IProd):
        a, b = _rearrange(rng, i.left), _rearrange(rng, i.right)
        if isinstance(b, ISum) and rng.random() < 0.5:
            return ISum(IProd(a, b.left), IProd(a, b.right))
        return IProd(b, a) if rng.random() < 0.5 else IProd(a, b)
    if isinstance(i, IPow):
        return IPow(_rearrange(rng, i.base), i.exp)
    return i


def gen_constraint(rng: random.Random):
    """A random constraint together with its variable sorts. Roughly half
    are built to be valid so the solver's Yes answers get exercised."""
    from lindep.index import Constraint

    scope = index_scope(rng)
    sort = Sort.SIZE if rng.random() < 0.3 else Sort.SENS
    lhs = gen_index(rng, scope, sort)
    shape = rng.random()
    if shape < 0.3:
        rel, rhs = "LE", ISum(_rearrange(rng, lhs), gen_index(rng, scope, sort, 2))
    elif shape < 0.5:
        rel, rhs = "EQ", _rearrange(rng, lhs)
    elif shape < 0.6:
        rel, rhs = "LE", IProd(_rearrange(rng, lhs), gen_index(rng, scope, sort, 1))
    else:
        rel, rhs = rng.choice(("LE", "EQ")), gen_index(rng, scope, sort)
    assumptions = ()
    sizes = [v for v, s in scope.items() if s is Sort.SIZE]
    if sizes and rng.random() < 0.4:
        v = rng.choice(sizes)
        if rng.random() < 0.5:
            assumptions = ((v, INat(0)),)
        else:
            fresh = "_p1"
            scope = {**scope, fresh: Sort.SIZE}
            assumptions = ((v, ISum(IVar(fresh), INat(1))),)
    return Constraint(rel, lhs, rhs, assumptions), scope
