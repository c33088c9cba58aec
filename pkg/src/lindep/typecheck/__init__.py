"""Graded linear type checker and constraint generation."""

from .checker import Checker, CheckResult, check_program, infer
from .env import CheckError, Fresh, Mismatch, TypeEnv
from .prims import PrimSig, cons_scheme, iter_scheme
from .subtype import subtype
from .types import (
    Unsupported, as_bang, expand_bounded, instantiate_forall, subst_type,
    type_free_index_vars, wf_type,
)
from .usage import Usage, ctx_add, ctx_join, ctx_remove, ctx_scale, grade_of, join_grade
