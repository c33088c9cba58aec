"""Runtime ground truth: interpreter, metric, sensitivity probe, Krivine machine."""

from .interp import DEFAULT_FUEL, EvalError, FuelExhausted, Interpreter, eval_term
from .krivine import KrivineMachine, KrivineResult, MachineState, StuckState, erase, krivine_run
from .metric import MetricError, value_distance
from .probe import ProbeReport, probe_sensitivity, sample_pairs
from .values import UNIT, Closure, ListV, PairV, PrimV, format_value
