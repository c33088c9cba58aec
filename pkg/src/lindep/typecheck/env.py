from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Tuple

from ..index import Constraint
from ..syntax.ast import IndexTerm, Sort, Type


class CheckError(Exception):
    """A diagnostic attached to a source position and typing rule."""

    def __init__(self, msg: str, at: Optional[str] = None, rule: Optional[str] = None):
        super().__init__(msg)
        self.msg = msg
        self.at = at
        self.rule = rule

    def __str__(self) -> str:
        where = f" at {self.at}" if self.at else ""
        rule = f" (rule {self.rule})" if self.rule else ""
        return f"{self.msg}{where}{rule}"


class Mismatch(CheckError):
    """Type constructors disagree."""


class Fresh:
    """Per-declaration supply of fresh index variable names."""

    def __init__(self):
        self._counter = itertools.count(1)

    def __call__(self, base: str) -> str:
        # the leading underscore keeps these apart from names users tend to pick
        return f"_{base}{next(self._counter)}"


@dataclass(frozen=True)
class TypeEnv:
    vars: Mapping[str, Type] = field(default_factory=dict)
    sorts: Mapping[str, Sort] = field(default_factory=dict)
    assumptions: Tuple[Tuple[str, IndexTerm], ...] = ()
    globals: Mapping[str, Type] = field(default_factory=dict)
    fresh: Fresh = field(default_factory=Fresh, compare=False)
    filename: str = "<input>"
    # name of the definition being checked, and whether it may call itself here
    current: Optional[str] = None
    recursion_ok: bool = False

    def bind(self, name: str, ty: Type) -> "TypeEnv":
        return replace(self, vars={**self.vars, name: ty})

    def bind_index(self, name: str, sort: Sort) -> "TypeEnv":
        return replace(self, sorts={**self.sorts, name: sort})

    def assume(self, var: str, term: IndexTerm) -> "TypeEnv":
        return replace(self, assumptions=self.assumptions + ((var, term),))

    def where(self, pos) -> Optional[str]:
        if pos is None:
            return None
        return f"{self.filename}:{pos[0]}:{pos[1]}"

    def constraint(self, rel: str, lhs: IndexTerm, rhs: IndexTerm,
                   at: Optional[str], rule: str) -> Constraint:
        return Constraint(rel, lhs, rhs, self.assumptions, at=at, rule=rule)
