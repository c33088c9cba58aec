"""Index language: sorting, substitution, polynomial normal forms, closed
evaluation, and the entailment solver for checker constraints.

Arithmetic is over the nonnegative rationals extended with infinity, with
the conventions ``0 * inf = 0``, ``x * inf = inf`` for ``x > 0``,
``x + inf = inf``, ``x ^ 0 = 1`` and ``inf ^ k = inf`` for ``k >= 1``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Set, Tuple, Union

from .syntax.ast import (
    IInf, INat, IPow, IProd, IRat, ISum, IVar, IndexTerm, Sort,
)
from .syntax.parser import parse_index
from .syntax.printer import pretty_print

INF = math.inf
Number = Union[int, Fraction, float]  # float only ever means INF


class IndexSortError(Exception):
    pass


# ---------------------------------------------------------------------------
# Sorting


def sort_check(i: IndexTerm, env: Mapping[str, Sort]) -> Sort:
    """Return SIZE for a pure size expression and SENS otherwise."""
    if isinstance(i, IVar):
        try:
            return env[i.name]
        except KeyError:
            raise IndexSortError(f"unbound index variable {i.name!r}") from None
    if isinstance(i, INat):
        return Sort.SIZE
    if isinstance(i, (IRat, IInf)):
        return Sort.SENS
    if isinstance(i, (ISum, IProd)):
        left = sort_check(i.left, env)
        right = sort_check(i.right, env)
        return Sort.SIZE if left is right is Sort.SIZE else Sort.SENS
    if isinstance(i, IPow):
        sort_check(i.base, env)
        if sort_check(i.exp, env) is not Sort.SIZE:
            raise IndexSortError(f"exponent of {pretty_print(i)} must be a size")
        return Sort.SENS
    raise TypeError(f"not an index term: {i!r}")


def check_sort(i: IndexTerm, env: Mapping[str, Sort], expected: Sort) -> None:
    """Raise unless ``i`` may stand where a term of sort ``expected`` goes.

    Sizes embed into sensitivities, not the other way round.
    """
    actual = sort_check(i, env)
    if expected is Sort.SIZE and actual is not Sort.SIZE:
        raise IndexSortError(f"{pretty_print(i)} is not a size expression")


def free_index_vars(i: IndexTerm) -> Set[str]:
    if isinstance(i, IVar):
        return {i.name}
    if isinstance(i, (ISum, IProd)):
        return free_index_vars(i.left) | free_index_vars(i.right)
    if isinstance(i, IPow):
        return free_index_vars(i.base) | free_index_vars(i.exp)
    return set()


def subst_index(i: IndexTerm, var: str, j: IndexTerm) -> IndexTerm:
    """Replace every occurrence of ``var`` in ``i`` by ``j``."""
    if isinstance(i, IVar):
        return j if i.name == var else i
    if isinstance(i, ISum):
        return ISum(subst_index(i.left, var, j), subst_index(i.right, var, j))
    if isinstance(i, IProd):
        return IProd(subst_index(i.left, var, j), subst_index(i.right, var, j))
    if isinstance(i, IPow):
        return IPow(subst_index(i.base, var, j), subst_index(i.exp, var, j))
    return i


def subst_index_sorted(i: IndexTerm, var: str, j: IndexTerm,
                       env: Mapping[str, Sort]) -> IndexTerm:
    """``subst_index`` after checking that ``j`` fits the sort of ``var``."""
    check_sort(j, env, env[var])
    return subst_index(i, var, j)


# ---------------------------------------------------------------------------
# Closed arithmetic


def mul(a: Number, b: Number) -> Number:
    if a == 0 or b == 0:
        return 0
    if a == INF or b == INF:
        return INF
    return a * b


def add(a: Number, b: Number) -> Number:
    if a == INF or b == INF:
        return INF
    return a + b


def power(base: Number, exp: Number) -> Number:
    if exp == INF or exp != int(exp):
        raise ValueError(f"exponent must be a natural number, got {exp}")
    exp = int(exp)
    if exp == 0:
        return 1
    if base == INF:
        return INF
    return Fraction(base) ** exp


def eval_closed(i: IndexTerm, valuation: Mapping[str, Number] = {}) -> Number:
    """Evaluate ``i`` under ``valuation``; the result is a Fraction/int or INF."""
    if isinstance(i, IVar):
        return valuation[i.name]
    if isinstance(i, INat):
        return i.value
    if isinstance(i, IRat):
        return i.value
    if isinstance(i, IInf):
        return INF
    if isinstance(i, ISum):
        return add(eval_closed(i.left, valuation), eval_closed(i.right, valuation))
    if isinstance(i, IProd):
        return mul(eval_closed(i.left, valuation), eval_closed(i.right, valuation))
    if isinstance(i, IPow):
        return power(eval_closed(i.base, valuation), eval_closed(i.exp, valuation))
    raise TypeError(f"not an index term: {i!r}")


# ---------------------------------------------------------------------------
# Polynomial normal form
#
# An atom is ("v", name), ("inf",), or ("pow", base, exp) where base is a
# PolyNF and exp a monomial over size variables. A monomial is a sorted
# tuple of atoms (a multiset). Monomials containing the infinity atom hold
# it once and carry coefficient 1, since c * inf = inf for every c > 0.

Atom = tuple
Monomial = Tuple[Atom, ...]
_INF_ATOM: Atom = ("inf",)


def _atom_key(a: Atom):
    if a[0] == "v":
        return (0, a[1])
    if a[0] == "pow":
        return (1, repr(a[1].key()), repr(a[2]))
    return (2,)


def _mono(atoms: Iterable[Atom]) -> Monomial:
    atoms = list(atoms)
    if _INF_ATOM in atoms:
        atoms = [a for a in atoms if a != _INF_ATOM] + [_INF_ATOM]
    return tuple(sorted(atoms, key=_atom_key))


@dataclass(frozen=True)
class PolyNF:
    """Sum of monomials with positive rational coefficients, or infinity."""

    terms: Tuple[Tuple[Monomial, Fraction], ...] = ()
    infinite: bool = False

    @staticmethod
    def build(coeffs: Mapping[Monomial, Fraction]) -> "PolyNF":
        if coeffs.get((_INF_ATOM,), 0) > 0:
            return PolyNF((), True)
        items = []
        for m, c in coeffs.items():
            if c == 0:
                continue
            if _INF_ATOM in m:
                c = Fraction(1)
            items.append((m, Fraction(c)))
        items.sort(key=lambda mc: [_atom_key(a) for a in mc[0]])
        return PolyNF(tuple(items), False)

    @staticmethod
    def const(c: Number) -> "PolyNF":
        if c == INF:
            return PolyNF((), True)
        return PolyNF.build({(): Fraction(c)})

    @staticmethod
    def atom(a: Atom) -> "PolyNF":
        return PolyNF.build({(a,): Fraction(1)})

    def key(self):
        return (self.infinite, self.terms)

    def as_dict(self) -> Dict[Monomial, Fraction]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.infinite and not self.terms

    @property
    def is_closed(self) -> bool:
        return self.infinite or all(m == () for m, _ in self.terms)

    def constant(self) -> Fraction:
        return self.as_dict().get((), Fraction(0))

    def __add__(self, other: "PolyNF") -> "PolyNF":
        if self.infinite or other.infinite:
            return PolyNF((), True)
        out = Counter(self.as_dict())
        for m, c in other.terms:
            out[m] += c
        return PolyNF.build(out)

    def __mul__(self, other: "PolyNF") -> "PolyNF":
        if self.is_zero or other.is_zero:
            return PolyNF()
        if self.infinite or other.infinite:
            # inf * p is inf wherever p > 0 and 0 where p = 0
            rest = other if self.infinite else self
            if rest.infinite:
                return PolyNF((), True)
            return PolyNF.build({_mono(m + (_INF_ATOM,)): Fraction(1) for m, _ in rest.terms})
        out: Counter = Counter()
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                out[_mono(m1 + m2)] += c1 * c2
        return PolyNF.build(out)

    def evaluate(self, valuation: Mapping[str, Number]) -> Number:
        if self.infinite:
            return INF
        total: Number = 0
        for m, c in self.terms:
            value: Number = c
            for a in m:
                value = mul(value, _eval_atom(a, valuation))
            total = add(total, value)
        return total


def _eval_atom(a: Atom, valuation: Mapping[str, Number]) -> Number:
    if a[0] == "v":
        return valuation[a[1]]
    if a[0] == "inf":
        return INF
    exp: Number = 1
    for v in a[2]:
        exp = mul(exp, _eval_atom(v, valuation))
    return power(a[1].evaluate(valuation), exp)


def _pow_nf(base: PolyNF, exp: PolyNF) -> PolyNF:
    result = PolyNF.const(1)
    if exp.infinite:
        raise IndexSortError("exponent cannot be infinite")
    for m, c in exp.terms:
        if c.denominator != 1:
            raise IndexSortError("exponent must be a size expression")
        if m == ():
            factor = base
        elif base == PolyNF.const(1):
            continue
        else:
            factor = PolyNF.atom(("pow", base, m))
        for _ in range(int(c)):
            result = result * factor
    return result


def normalize(i: IndexTerm) -> PolyNF:
    if isinstance(i, IVar):
        return PolyNF.atom(("v", i.name))
    if isinstance(i, INat):
        return PolyNF.const(i.value)
    if isinstance(i, IRat):
        return PolyNF.const(i.value)
    if isinstance(i, IInf):
        return PolyNF((), True)
    if isinstance(i, ISum):
        return normalize(i.left) + normalize(i.right)
    if isinstance(i, IProd):
        return normalize(i.left) * normalize(i.right)
    if isinstance(i, IPow):
        return _pow_nf(normalize(i.base), normalize(i.exp))
    raise TypeError(f"not an index term: {i!r}")


def _const_term(c: Fraction) -> IndexTerm:
    return INat(int(c)) if c.denominator == 1 else IRat(c)


def _atom_term(a: Atom) -> IndexTerm:
    if a[0] == "v":
        return IVar(a[1])
    if a[0] == "inf":
        return IInf()
    return IPow(poly_to_term(a[1]), _mono_term(a[2]))


def _mono_term(m: Monomial) -> IndexTerm:
    out: Optional[IndexTerm] = None
    for a in m:
        t = _atom_term(a)
        out = t if out is None else IProd(out, t)
    return out if out is not None else INat(1)


def poly_to_term(p: PolyNF) -> IndexTerm:
    """An index term whose normal form is ``p``."""
    if p.infinite:
        return IInf()
    out: Optional[IndexTerm] = None
    for m, c in p.terms:
        if m == ():
            t = _const_term(c)
        elif c == 1:
            t = _mono_term(m)
        else:
            t = IProd(_const_term(c), _mono_term(m))
        out = t if out is None else ISum(out, t)
    return out if out is not None else INat(0)


def simplify(i: IndexTerm) -> IndexTerm:
    return poly_to_term(normalize(i))


# ---------------------------------------------------------------------------
# Constraints and entailment


@dataclass(frozen=True)
class Constraint:
    """``lhs rel rhs`` under oriented equality assumptions ``var = term``."""

    rel: str  # "LE" or "EQ"
    lhs: IndexTerm
    rhs: IndexTerm
    assumptions: Tuple[Tuple[str, IndexTerm], ...] = ()
    at: Optional[str] = field(default=None, compare=False)
    rule: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.rel not in ("LE", "EQ"):
            raise ValueError(f"unknown relation {self.rel!r}")
        names = [v for v, _ in self.assumptions]
        if len(set(names)) != len(names):
            raise ValueError("assumption variables must be distinct")

    def __str__(self) -> str:
        op = "<=" if self.rel == "LE" else "="
        body = f"{pretty_print(self.lhs)} {op} {pretty_print(self.rhs)}"
        if self.assumptions:
            hyps = ", ".join(f"{v} = {pretty_print(t)}" for v, t in self.assumptions)
            return f"{hyps} |- {body}"
        return body

    def to_json(self) -> dict:
        return {
            "assume": [[v, pretty_print(t)] for v, t in self.assumptions],
            "rel": self.rel,
            "lhs": pretty_print(self.lhs),
            "rhs": pretty_print(self.rhs),
            "at": self.at,
            "rule": self.rule,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Constraint":
        return cls(
            rel=obj["rel"],
            lhs=parse_index(obj["lhs"]),
            rhs=parse_index(obj["rhs"]),
            assumptions=tuple((v, parse_index(t)) for v, t in obj.get("assume", ())),
            at=obj.get("at"),
            rule=obj.get("rule"),
        )


def apply_assumptions(i: IndexTerm, assumptions) -> IndexTerm:
    """Substitute the oriented assumptions into ``i`` until none applies."""
    for _ in range(len(assumptions) + 1):
        names = free_index_vars(i)
        hits = [(v, t) for v, t in assumptions if v in names]
        if not hits:
            return i
        for v, t in hits:
            i = subst_index(i, v, t)
    raise ValueError("cyclic assumptions")


def entails(c: Constraint) -> bool:
    """True only if ``c`` holds under every sort-respecting valuation.

    False means "unknown": the solver is sound but incomplete.
    """
    lhs = normalize(apply_assumptions(c.lhs, c.assumptions))
    rhs = normalize(apply_assumptions(c.rhs, c.assumptions))
    if lhs.is_closed and rhs.is_closed:
        a, b = lhs.evaluate({}), rhs.evaluate({})
        return a <= b if c.rel == "LE" else a == b
    if c.rel == "EQ":
        return lhs == rhs
    return dominates(rhs, lhs)


def dominates(big: PolyNF, small: PolyNF) -> bool:
    """Coefficient-wise ``small <= big``."""
    if big.infinite:
        return True
    if small.infinite:
        return False
    bigc = big.as_dict()
    return all(bigc.get(m, 0) >= c for m, c in small.terms)


def leq(a: IndexTerm, b: IndexTerm) -> bool:
    return entails(Constraint("LE", a, b))
