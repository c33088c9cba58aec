"""Runtime values.

Reals are Python floats, or Fractions when evaluating exactly; naturals are
ints. Compound values are small frozen dataclasses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Optional, Tuple


class UnitValue:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "()"


UNIT = UnitValue()


@dataclass(frozen=True)
class PairV:
    left: Any
    right: Any


@dataclass(frozen=True)
class ListV:
    items: Tuple[Any, ...] = ()


@dataclass(frozen=True)
class Closure:
    var: str
    body: Any
    env: Mapping[str, Any] = field(compare=False, repr=False)


@dataclass(frozen=True)
class PrimV:
    """A primitive, possibly partially applied."""

    name: str
    coeff: Optional[Fraction] = None
    args: Tuple[Any, ...] = ()


def format_value(v) -> str:
    if isinstance(v, bool):
        raise TypeError("booleans are not values")
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return repr(float(v))
    if isinstance(v, float):
        return repr(v)
    if v is UNIT:
        return "()"
    if isinstance(v, PairV):
        return f"({format_value(v.left)}, {format_value(v.right)})"
    if isinstance(v, ListV):
        return "[" + ", ".join(format_value(x) for x in v.items) + "]"
    if isinstance(v, (Closure, PrimV)):
        return "<fun>"
    raise TypeError(f"not a value: {v!r}")


def to_float_value(v):
    """Replace exact reals by floats, recursively."""
    if isinstance(v, Fraction):
        return float(v)
    if isinstance(v, PairV):
        return PairV(to_float_value(v.left), to_float_value(v.right))
    if isinstance(v, ListV):
        return ListV(tuple(to_float_value(x) for x in v.items))
    return v
