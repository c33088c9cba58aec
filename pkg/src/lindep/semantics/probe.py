"""Empirical Lipschitz check: sample input pairs and compare output distance
to input distance against a claimed grade."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Tuple, Union

import numpy as np

from ..index import INF, eval_closed, free_index_vars
from ..syntax.ast import IndexTerm, Term
from ..syntax.printer import format_fraction, pretty_print
from .interp import DEFAULT_FUEL, EvalError, Interpreter

DELTA_EXPONENTS = np.arange(-6, 3)


@dataclass
class ProbeReport:
    claimed: str
    samples: int
    max_ratio: float
    worst: Optional[Tuple[float, float]]
    verdict: str  # "pass" | "fail"
    tolerance: float
    seed: int
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        out = {
            "claimed": self.claimed,
            "samples": self.samples,
            "max_ratio": self.max_ratio,
            "worst": None if self.worst is None else {"x": self.worst[0], "x2": self.worst[1]},
            "verdict": self.verdict,
            "seed": self.seed,
            "tolerance": self.tolerance,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


def sample_pairs(n: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """Deterministic input pairs. Even slots perturb by ``±10^k`` for
    ``k`` in -6..2, odd slots pair two uniform points in [-100, 100]."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(-100.0, 100.0, n)
    other = rng.uniform(-100.0, 100.0, n)
    k = rng.choice(DELTA_EXPONENTS, n)
    sign = rng.choice([-1.0, 1.0], n)
    nudged = x + sign * np.power(10.0, k)
    x2 = np.where(np.arange(n) % 2 == 0, nudged, other)
    return x, x2


def _claimed_value(grade: Union[IndexTerm, int, float, Fraction]) -> Tuple[Fraction, str]:
    if isinstance(grade, IndexTerm):
        if free_index_vars(grade):
            raise ValueError(f"claimed grade {pretty_print(grade)} is not closed")
        value = eval_closed(grade)
        text = pretty_print(grade)
    else:
        value = grade
        text = format_fraction(Fraction(grade)) if value != INF else "inf"
    if value == INF:
        raise ValueError("claimed grade must be finite")
    return Fraction(value), text


def probe_sensitivity(f: Term, grade, n_samples: int = 10_000,
                      tolerance: float = 1e-9, seed: int = 42,
                      globals_: Optional[Mapping[str, Term]] = None,
                      fuel: int = DEFAULT_FUEL) -> ProbeReport:
    """Probe ``f : ![r] R -o R`` at claimed grade ``r``.

    Evaluation is exact over the (double) sample points, so the reported
    ratio carries no rounding from the program itself. Passes iff
    ``max_ratio <= r * (1 + tolerance) + tolerance``.
    """
    if n_samples < 1:
        raise ValueError("need at least one sample")
    r, text = _claimed_value(grade)
    interp = Interpreter(globals_, fuel, exact=True)
    xs, x2s = sample_pairs(n_samples, seed)
    best = Fraction(0)
    worst: Optional[Tuple[float, float]] = None
    error = None
    try:
        fn = interp.eval(f, {})
        for a, b in zip(xs.tolist(), x2s.tolist()):
            if a == b:
                continue
            qa, qb = Fraction(a), Fraction(b)
            ya = interp.apply(fn, qa)
            yb = interp.apply(fn, qb)
            if not isinstance(ya, Fraction) or not isinstance(yb, Fraction):
                raise EvalError("probed function must return a real")
            ratio = abs(ya - yb) / abs(qa - qb)
            if worst is None or ratio > best:
                best, worst = ratio, (a, b)
    except EvalError as exc:
        error = str(exc)
    tol = Fraction(tolerance)
    ok = error is None and best <= r * (1 + tol) + tol
    return ProbeReport(text, n_samples, float(best), worst,
                       "pass" if ok else "fail", tolerance, seed, error)
