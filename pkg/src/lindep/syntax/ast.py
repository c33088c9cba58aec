"""Abstract syntax for index terms, types, terms and programs.

All nodes are frozen dataclasses. Source positions and variable sorts are
carried along for diagnostics but excluded from equality.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple, Union

Pos = Optional[Tuple[int, int]]


class Sort(enum.Enum):
    SIZE = "size"
    SENS = "sens"

    def __str__(self) -> str:
        return self.value


# ---------------------------------------------------------------------------
# Index terms


@dataclass(frozen=True)
class IndexTerm:
    pass


@dataclass(frozen=True)
class IVar(IndexTerm):
    name: str
    sort: Optional[Sort] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class INat(IndexTerm):
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("natural index literal must be >= 0")


@dataclass(frozen=True)
class IRat(IndexTerm):
    value: Fraction

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("rational index literal must be >= 0")


@dataclass(frozen=True)
class IInf(IndexTerm):
    pass


@dataclass(frozen=True)
class ISum(IndexTerm):
    left: IndexTerm
    right: IndexTerm


@dataclass(frozen=True)
class IProd(IndexTerm):
    left: IndexTerm
    right: IndexTerm


@dataclass(frozen=True)
class IPow(IndexTerm):
    base: IndexTerm
    exp: IndexTerm


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Type:
    pass


@dataclass(frozen=True)
class Real(Type):
    pass


@dataclass(frozen=True)
class UnitT(Type):
    pass


@dataclass(frozen=True)
class NatT(Type):
    size: IndexTerm


@dataclass(frozen=True)
class ListT(Type):
    size: IndexTerm
    elem: Type


@dataclass(frozen=True)
class Tensor(Type):
    left: Type
    right: Type


@dataclass(frozen=True)
class Bang(Type):
    grade: IndexTerm
    body: Type


@dataclass(frozen=True)
class Arrow(Type):
    dom: Type
    cod: Type


@dataclass(frozen=True)
class Forall(Type):
    var: str
    sort: Sort
    body: Type


@dataclass(frozen=True)
class BoundedBang(Type):
    """``bang a < I . A``: the family A[0/a], ..., A[I-1/a]."""

    var: str
    bound: IndexTerm
    body: Type


def fun_type(dom: Type, cod: Type) -> Arrow:
    """The unrestricted arrow ``A -> B``, i.e. ``![inf] A -o B``."""
    return Arrow(Bang(IInf(), dom), cod)


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Term:
    pos: Pos = field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class RealLit(Term):
    value: float


@dataclass(frozen=True)
class NatLit(Term):
    value: int


@dataclass(frozen=True)
class UnitLit(Term):
    pass


@dataclass(frozen=True)
class Lam(Term):
    var: str
    grade: IndexTerm
    ty: Type
    body: Term


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class IApp(Term):
    fn: Term
    index: IndexTerm


@dataclass(frozen=True)
class Pair(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class LetPair(Term):
    left: str
    right: str
    bound: Term
    body: Term


@dataclass(frozen=True)
class NatCase(Term):
    scrutinee: Term
    zero: Term
    pred: str
    succ: Term


@dataclass(frozen=True)
class ListCase(Term):
    scrutinee: Term
    nil: Term
    head: str
    tail: str
    cons: Term


PRIM_NAMES = ("add", "cmul", "iter", "nil", "cons")


@dataclass(frozen=True)
class Prim(Term):
    """A primitive constant. ``coeff`` is only set for ``cmul``."""

    name: str
    coeff: Optional[Fraction] = None


# ---------------------------------------------------------------------------
# Programs


@dataclass(frozen=True)
class Def:
    name: str
    ty: Type
    body: Term
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Check:
    body: Term
    ty: Type
    pos: Pos = field(default=None, compare=False, repr=False)

    @property
    def name(self) -> str:
        if self.pos is None:
            return "check"
        return f"check@{self.pos[0]}:{self.pos[1]}"


Decl = Union[Def, Check]


@dataclass(frozen=True)
class Program:
    decls: Tuple[Decl, ...] = ()
    filename: str = field(default="<input>", compare=False)

    def __iter__(self):
        return iter(self.decls)

    def __len__(self) -> int:
        return len(self.decls)
