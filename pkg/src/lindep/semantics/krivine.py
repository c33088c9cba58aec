"""Call-by-name Krivine machine with an exact step counter.

Cost model, one step each: pushing an argument, binding a lambda to the
top of the stack, fetching a variable's closure, and every primitive or
pattern-matching rule. Operands a rule needs in weak head normal form are
forced by nested machine runs whose steps count toward the same total.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Mapping, Optional, Tuple

from ..syntax.ast import (
    App, IApp, Lam, LetPair, ListCase, NatCase, NatLit, Pair, Prim, RealLit,
    Term, UnitLit, Var,
)
from .interp import ARITY, DEFAULT_FUEL, EvalError, FuelExhausted
from .values import UNIT, ListV, PairV


class StuckState(EvalError):
    pass


@dataclass(frozen=True)
class Closure:
    term: Term
    env: Mapping[str, "Closure"] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class ConsCell(Term):
    head: Closure
    tail: Closure


@dataclass(frozen=True)
class Iterate(Term):
    """Suspended ``iter count f k`` holding its operand closures directly."""

    count: int
    fn: Closure
    init: Closure


@dataclass
class MachineState:
    control: Term
    env: Mapping[str, Closure]
    stack: List[Closure]
    steps: int = 0


def erase(e: Term) -> Term:
    """Drop index applications; indices never influence evaluation."""
    if isinstance(e, IApp):
        return erase(e.fn)
    if isinstance(e, App):
        return App(erase(e.fn), erase(e.arg), pos=e.pos)
    if isinstance(e, Lam):
        return Lam(e.var, e.grade, e.ty, erase(e.body), pos=e.pos)
    if isinstance(e, Pair):
        return Pair(erase(e.left), erase(e.right), pos=e.pos)
    if isinstance(e, LetPair):
        return LetPair(e.left, e.right, erase(e.bound), erase(e.body), pos=e.pos)
    if isinstance(e, NatCase):
        return NatCase(erase(e.scrutinee), erase(e.zero), e.pred, erase(e.succ), pos=e.pos)
    if isinstance(e, ListCase):
        return ListCase(erase(e.scrutinee), erase(e.nil), e.head, e.tail, erase(e.cons),
                        pos=e.pos)
    return e


_F = "%f"


class KrivineMachine:
    def __init__(self, globals_: Optional[Mapping[str, Term]] = None,
                 fuel: int = DEFAULT_FUEL):
        self.globals = {name: erase(t) for name, t in (globals_ or {}).items()}
        self.fuel = fuel
        self.steps = 0

    def _step(self):
        self.steps += 1
        if self.steps > self.fuel:
            raise FuelExhausted("machine ran out of fuel")

    def run(self, term: Term, env: Mapping[str, Closure]) -> MachineState:
        """Run to weak head normal form."""
        stack: List[Closure] = []
        while True:
            if isinstance(term, App):
                self._step()
                stack.append(Closure(term.arg, env))
                term = term.fn
            elif isinstance(term, Lam):
                if not stack:
                    break
                self._step()
                env = {**env, term.var: stack.pop()}
                term = term.body
            elif isinstance(term, Var):
                self._step()
                if term.name in env:
                    c = env[term.name]
                    term, env = c.term, c.env
                elif term.name in self.globals:
                    term, env = self.globals[term.name], {}
                else:
                    raise StuckState(f"unbound variable {term.name!r}")
            elif isinstance(term, IApp):
                term = term.fn
            elif isinstance(term, Prim):
                arity = ARITY.get(term.name, 0)
                if term.name == "nil" or len(stack) < arity:
                    break
                args = [stack.pop() for _ in range(arity)]
                term, env = self._delta(term, args)
            elif isinstance(term, Iterate):
                self._step()
                if term.count == 0:
                    term, env = term.init.term, term.init.env
                else:
                    # iter (n+1) f k  ~>  f (iter n f k)
                    rest = Iterate(term.count - 1, term.fn, term.init)
                    term, env = App(Var(_F), rest), {_F: term.fn}
            elif isinstance(term, LetPair):
                pair, penv = self._whnf(Closure(term.bound, env))
                if not isinstance(pair, Pair):
                    raise StuckState("let-pair on a non-pair")
                self._step()
                env = {**env, term.left: Closure(pair.left, penv),
                       term.right: Closure(pair.right, penv)}
                term = term.body
            elif isinstance(term, NatCase):
                n = self._force_nat(Closure(term.scrutinee, env))
                self._step()
                if n == 0:
                    term = term.zero
                else:
                    env = {**env, term.pred: Closure(NatLit(n - 1), {})}
                    term = term.succ
            elif isinstance(term, ListCase):
                cell, _ = self._whnf(Closure(term.scrutinee, env))
                self._step()
                if isinstance(cell, Prim) and cell.name == "nil":
                    term = term.nil
                elif isinstance(cell, ConsCell):
                    env = {**env, term.head: cell.head, term.tail: cell.tail}
                    term = term.cons
                else:
                    raise StuckState("lcase on a non-list")
            elif isinstance(term, (RealLit, NatLit, UnitLit, Pair, ConsCell)):
                if stack:
                    raise StuckState(f"applying a constructor value {term!r}")
                break
            else:
                raise StuckState(f"no rule for {term!r}")
        return MachineState(term, env, stack, self.steps)

    def _whnf(self, c: Closure) -> Tuple[Term, Mapping[str, Closure]]:
        state = self.run(c.term, c.env)
        return state.control, state.env

    def _force_real(self, c: Closure) -> float:
        term, _ = self._whnf(c)
        if not isinstance(term, RealLit):
            raise StuckState("expected a real")
        return term.value

    def _force_nat(self, c: Closure) -> int:
        term, _ = self._whnf(c)
        if not isinstance(term, NatLit):
            raise StuckState("expected a natural")
        return term.value

    def _delta(self, prim: Prim, args: List[Closure]):
        if prim.name == "add":
            a = self._force_real(args[0])
            b = self._force_real(args[1])
            self._step()
            return RealLit(a + b), {}
        if prim.name == "cmul":
            a = self._force_real(args[0])
            self._step()
            return RealLit(float(prim.coeff) * a), {}
        if prim.name == "iter":
            n = self._force_nat(args[0])
            self._step()
            return Iterate(n, args[1], args[2]), {}
        if prim.name == "cons":
            self._step()
            return ConsCell(args[0], args[1]), {}
        raise StuckState(f"unknown primitive {prim.name!r}")

    def readback(self, state: MachineState):
        """Turn a ground weak head normal form into a runtime value; functions
        read back as None."""
        term, env = state.control, state.env
        if isinstance(term, RealLit):
            return float(term.value)
        if isinstance(term, NatLit):
            return term.value
        if isinstance(term, UnitLit):
            return UNIT
        if isinstance(term, Pair):
            left = self.readback(self.run(term.left, env))
            right = self.readback(self.run(term.right, env))
            return PairV(left, right)
        if isinstance(term, Prim) and term.name == "nil":
            return ListV(())
        if isinstance(term, ConsCell):
            items = []
            while isinstance(term, ConsCell):
                items.append(self.readback(self.run(term.head.term, term.head.env)))
                term, env = self._whnf(term.tail)
            if not (isinstance(term, Prim) and term.name == "nil"):
                raise StuckState("malformed list")
            return ListV(tuple(items))
        if isinstance(term, (Lam, Prim)):
            return None
        raise StuckState(f"no readback for {term!r}")


@dataclass
class KrivineResult:
    state: MachineState
    steps: int
    value: object = None


def krivine_run(e: Term, fuel: int = DEFAULT_FUEL,
                globals_: Optional[Mapping[str, Term]] = None,
                readback: bool = True) -> KrivineResult:
    """Run ``e`` to weak head normal form; with ``readback`` also force a
    ground result into a value (extra forcing steps are counted)."""
    m = KrivineMachine(globals_, fuel)
    state = m.run(erase(e), {})
    value = m.readback(state) if readback else None
    return KrivineResult(state, m.steps, value)
