"""The metric on values at a closed, arrow-free type."""

from __future__ import annotations

from fractions import Fraction

from ..index import INF, eval_closed, free_index_vars, mul
from ..syntax.ast import (
    Arrow, Bang, BoundedBang, Forall, ListT, NatT, Real, Tensor, Type, UnitT,
)
from ..syntax.printer import pretty_print
from ..typecheck.types import expand_bounded
from .values import ListV, PairV


class MetricError(Exception):
    pass


def _exact_distance(v, w, t: Type):
    if isinstance(t, Real):
        return abs(Fraction(v) - Fraction(w))
    if isinstance(t, (UnitT, NatT)):
        # singleton types: any two inhabitants are at distance 0
        return Fraction(0)
    if isinstance(t, Tensor):
        if not (isinstance(v, PairV) and isinstance(w, PairV)):
            raise MetricError("expected pairs")
        return _sum(_exact_distance(v.left, w.left, t.left),
                    _exact_distance(v.right, w.right, t.right))
    if isinstance(t, ListT):
        if not (isinstance(v, ListV) and isinstance(w, ListV)):
            raise MetricError("expected lists")
        if len(v.items) != len(w.items):
            raise MetricError("lists of a common type must have equal length")
        total = Fraction(0)
        for a, b in zip(v.items, w.items):
            total = _sum(total, _exact_distance(a, b, t.elem))
        return total
    if isinstance(t, Bang):
        if free_index_vars(t.grade):
            raise MetricError(f"open grade {pretty_print(t.grade)}")
        return mul(eval_closed(t.grade), _exact_distance(v, w, t.body))
    if isinstance(t, BoundedBang):
        return _exact_distance(v, w, expand_bounded(t))
    if isinstance(t, (Arrow, Forall)):
        raise MetricError("functions are only compared through application")
    raise MetricError(f"no metric at {t!r}")


def _sum(a, b):
    return INF if a == INF or b == INF else a + b


def value_distance(v, w, t: Type) -> float:
    """Distance between ``v`` and ``w`` at ``t``; may be ``inf``.

    Computed exactly and rounded once, so the metric axioms hold up to a
    single rounding.
    """
    d = _exact_distance(v, w, t)
    return INF if d == INF else float(d)

