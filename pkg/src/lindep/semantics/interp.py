"""Big-step call-by-value interpreter. Indices are ignored at runtime."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Optional

from ..syntax.ast import (
    App, IApp, Lam, LetPair, ListCase, NatCase, NatLit, Pair, Prim, RealLit,
    Term, UnitLit, Var,
)
from .values import UNIT, Closure, ListV, PairV, PrimV

DEFAULT_FUEL = 10 ** 7

ARITY = {"add": 2, "cmul": 1, "iter": 3, "cons": 2}


class EvalError(Exception):
    pass


class FuelExhausted(EvalError):
    pass


class Interpreter:
    """Evaluates closed terms against a table of top-level definitions.

    With ``exact=True`` real literals and arithmetic use Fractions, so
    results are free of rounding for the affine primitives.
    """

    def __init__(self, globals_: Optional[Mapping[str, Term]] = None,
                 fuel: int = DEFAULT_FUEL, exact: bool = False):
        self.globals = dict(globals_ or {})
        self._global_values: Dict[str, object] = {}
        self.fuel = fuel
        self.exact = exact

    def _tick(self):
        self.fuel -= 1
        if self.fuel < 0:
            raise FuelExhausted("evaluation ran out of fuel")

    def real(self, x):
        if self.exact:
            return x if isinstance(x, Fraction) else Fraction(x)
        return float(x)

    def global_value(self, name: str):
        if name not in self._global_values:
            if name not in self.globals:
                raise EvalError(f"unbound variable {name!r}")
            self._global_values[name] = self.eval(self.globals[name], {})
        return self._global_values[name]

    def eval(self, e: Term, env: Mapping[str, object]):
        self._tick()
        rule = _RULES.get(type(e))
        if rule is None:
            raise EvalError(f"cannot evaluate {e!r}")
        return rule(self, e, env)

    def _var(self, e: Var, env):
        if e.name in env:
            return env[e.name]
        return self.global_value(e.name)

    def _app(self, e: App, env):
        fn = self.eval(e.fn, env)
        return self.apply(fn, self.eval(e.arg, env))

    def _prim(self, e: Prim, env):
        if e.name == "nil":
            return ListV(())
        return PrimV(e.name, e.coeff)

    def _let_pair(self, e: LetPair, env):
        v = self.eval(e.bound, env)
        if not isinstance(v, PairV):
            raise EvalError("let-pair on a non-pair")
        return self.eval(e.body, {**env, e.left: v.left, e.right: v.right})

    def _nat_case(self, e: NatCase, env):
        n = self.eval(e.scrutinee, env)
        if not isinstance(n, int):
            raise EvalError("case on a non-natural")
        if n == 0:
            return self.eval(e.zero, env)
        return self.eval(e.succ, {**env, e.pred: n - 1})

    def _list_case(self, e: ListCase, env):
        xs = self.eval(e.scrutinee, env)
        if not isinstance(xs, ListV):
            raise EvalError("lcase on a non-list")
        if not xs.items:
            return self.eval(e.nil, env)
        return self.eval(e.cons, {**env, e.head: xs.items[0], e.tail: ListV(xs.items[1:])})

    def apply(self, fn, arg):
        if isinstance(fn, Closure):
            return self.eval(fn.body, {**fn.env, fn.var: arg})
        if isinstance(fn, PrimV):
            args = fn.args + (arg,)
            if len(args) < ARITY[fn.name]:
                return PrimV(fn.name, fn.coeff, args)
            return self.delta(fn, args)
        raise EvalError("applying a non-function")

    def delta(self, fn: PrimV, args):
        self._tick()
        if fn.name == "add":
            a, b = args
            return self._num(a) + self._num(b)
        if fn.name == "cmul":
            return self.real(fn.coeff) * self._num(args[0])
        if fn.name == "iter":
            n, f, k = args
            if not isinstance(n, int):
                raise EvalError("iter expects a natural count")
            for _ in range(n):
                k = self.apply(f, k)
            return k
        if fn.name == "cons":
            h, t = args
            if not isinstance(t, ListV):
                raise EvalError("cons onto a non-list")
            return ListV((h,) + t.items)
        raise EvalError(f"unknown primitive {fn.name!r}")

    def _num(self, v):
        if isinstance(v, (float, Fraction)):
            return v
        raise EvalError(f"expected a real, got {v!r}")


_RULES = {
    Var: Interpreter._var,
    App: Interpreter._app,
    Lam: lambda self, e, env: Closure(e.var, e.body, env),
    RealLit: lambda self, e, env: self.real(e.value),
    NatLit: lambda self, e, env: e.value,
    UnitLit: lambda self, e, env: UNIT,
    IApp: lambda self, e, env: self.eval(e.fn, env),
    Prim: Interpreter._prim,
    Pair: lambda self, e, env: PairV(self.eval(e.left, env), self.eval(e.right, env)),
    LetPair: Interpreter._let_pair,
    NatCase: Interpreter._nat_case,
    ListCase: Interpreter._list_case,
}


def eval_term(e: Term, env: Optional[Mapping[str, object]] = None,
              globals_: Optional[Mapping[str, Term]] = None,
              fuel: int = DEFAULT_FUEL, exact: bool = False):
    return Interpreter(globals_, fuel, exact).eval(e, dict(env or {}))
