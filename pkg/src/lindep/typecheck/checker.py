"""Graded linear type checker.

``infer`` synthesizes a type, a usage context and index constraints;
``check`` pushes an expected type through lambdas, pattern matches and
pair eliminations, falling back to ``infer`` plus subtyping. Constraints
are only collected here; ``check_program`` hands them to the solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Tuple

from ..index import (
    Constraint, IndexSortError, PolyNF, apply_assumptions, check_sort, entails,
    free_index_vars, normalize, poly_to_term, subst_index,
)
from ..syntax.ast import (
    App, Arrow, Bang, BoundedBang, Def, Forall, IApp, INat, IPow, ISum,
    IVar, IndexTerm, Lam, LetPair, ListCase, ListT, NatCase, NatLit, NatT,
    Pair, Prim, Program, Real, RealLit, Sort, Tensor, Term, Type, UnitLit,
    UnitT, Var,
)
from ..syntax.printer import pretty_print
from .env import CheckError, Mismatch, TypeEnv
from .prims import PrimSig, cons_scheme
from .subtype import subtype
from .types import (
    Unsupported, as_bang, expand_bounded, instantiate_forall, subst_type,
    type_free_index_vars, wf_type,
)
from .usage import (
    ONE, ZERO, Usage, ctx_add, ctx_join, ctx_remove, ctx_scale, grade_of,
    join_grade,
)

Judgment = Tuple[Type, Usage, List[Constraint]]


def _expand(t: Type) -> Type:
    if isinstance(t, BoundedBang) and not free_index_vars(t.bound):
        return expand_bounded(t)
    return t


def _subst_usage(u: Usage, var: str, j: IndexTerm, at) -> Usage:
    out = {}
    for x, g in u.items():
        if var in free_index_vars(g):
            _no_var_in_exponent(g, var, at)
            g = subst_index(g, var, j)
        out[x] = g
    return out


def _no_var_in_exponent(g: IndexTerm, var: str, at) -> None:
    if isinstance(g, IPow):
        if var in free_index_vars(g.exp):
            raise Unsupported(f"grade {pretty_print(g)} depends on a pattern size through an exponent",
                              at)
        _no_var_in_exponent(g.base, var, at)
    elif hasattr(g, "left"):
        _no_var_in_exponent(g.left, var, at)
        _no_var_in_exponent(g.right, var, at)


@dataclass
class _Split:
    """How a case on a size index refines the context in each branch."""

    zero: Optional[TypeEnv]
    succ: Optional[TypeEnv]
    pred: Optional[IndexTerm]
    fresh: Optional[str] = None
    scrutinee: Optional[IndexTerm] = None


class Checker:
    def __init__(self, prims: Optional[PrimSig] = None, paper_iter: bool = False):
        self.prims = prims if prims is not None else PrimSig(paper_iter)

    # -- helpers -----------------------------------------------------------

    def _unwrap_bang(self, env: TypeEnv, t: Type, at, rule: str,
                     cs: List[Constraint]) -> Type:
        # dereliction: ![I] A is usable as A when 1 <= I
        t = _expand(t)
        while isinstance(t, Bang):
            cs.append(env.constraint("LE", ONE, t.grade, at, rule))
            t = _expand(t.body)
        return t

    def _sorted(self, env: TypeEnv, i: IndexTerm, sort: Sort, at) -> None:
        try:
            check_sort(i, env.sorts, sort)
        except IndexSortError as exc:
            raise CheckError(str(exc), at, "sort") from None

    def _wf(self, env: TypeEnv, t: Type, at) -> None:
        try:
            wf_type(t, env.sorts)
        except IndexSortError as exc:
            raise CheckError(str(exc), at, "sort") from None

    # -- inference ---------------------------------------------------------

    def infer(self, env: TypeEnv, e: Term) -> Judgment:
        at = env.where(e.pos)
        if isinstance(e, Var):
            if e.name in env.vars:
                return env.vars[e.name], {e.name: ONE}, []
            if e.name in env.globals:
                if e.name == env.current and not env.recursion_ok:
                    raise CheckError(f"recursive use of {e.name!r} outside a S/cons branch",
                                     at, "var")
                # top-level definitions are closed and freely duplicable
                return env.globals[e.name], {}, []
            raise CheckError(f"unbound variable {e.name!r}", at, "var")
        if isinstance(e, RealLit):
            return Real(), {}, []
        if isinstance(e, NatLit):
            return NatT(INat(e.value)), {}, []
        if isinstance(e, UnitLit):
            return UnitT(), {}, []
        if isinstance(e, Prim):
            return self.prims.type_of(e), {}, []
        if isinstance(e, Lam):
            return self._lam(env, e, None)
        if isinstance(e, App):
            return self._app(env, e)
        if isinstance(e, IApp):
            t, u, cs = self.infer(env, e.fn)
            t = self._unwrap_bang(env, t, at, "iapp", cs)
            if not isinstance(t, Forall):
                raise CheckError(f"index application to non-quantified type {pretty_print(t)}",
                                 at, "iapp")
            try:
                return instantiate_forall(t, e.index, env.sorts), u, cs
            except IndexSortError as exc:
                raise CheckError(str(exc), at, "iapp") from None
        if isinstance(e, Pair):
            t1, u1, c1 = self.infer(env, e.left)
            t2, u2, c2 = self.infer(env, e.right)
            return Tensor(t1, t2), ctx_add(u1, u2), c1 + c2
        if isinstance(e, LetPair):
            return self._let_pair(env, e, None)
        if isinstance(e, NatCase):
            return self._nat_case(env, e, None)
        if isinstance(e, ListCase):
            return self._list_case(env, e, None)
        raise TypeError(f"not a term: {e!r}")

    def check(self, env: TypeEnv, e: Term, expected: Type, rule: str = "sub") -> Judgment:
        at = env.where(e.pos)
        target = _expand(expected)
        if isinstance(e, Lam) and isinstance(target, Arrow):
            return self._lam(env, e, target, rule)
        if isinstance(e, LetPair):
            return self._let_pair(env, e, expected)
        if isinstance(e, NatCase):
            return self._nat_case(env, e, expected)
        if isinstance(e, ListCase):
            return self._list_case(env, e, expected)
        t, u, cs = self.infer(env, e)
        if isinstance(t, Forall) and not isinstance(target, Forall):
            t = self._instantiate_against(env, t, target, at)
        return expected, u, cs + subtype(env, t, expected, at, rule)

    def _instantiate_against(self, env: TypeEnv, t: Forall, target: Type, at) -> Type:
        """Implicitly instantiate leading quantifiers by matching ``target``."""
        holes: Dict[str, Sort] = {}
        while isinstance(t, Forall):
            h = env.fresh(t.var)
            holes[h] = t.sort
            t = subst_type(t.body, t.var, IVar(h, t.sort))
        solved: Dict[str, IndexTerm] = {}
        _match(t, target, holes, solved, env.sorts)
        missing = [h for h in holes if h not in solved]
        if missing:
            raise CheckError("cannot infer an index argument here; supply it with @[...]",
                             at, "sub")
        for h, j in solved.items():
            t = subst_type(t, h, j)
        return t

    def _branch(self, env: TypeEnv, e: Term, expected: Optional[Type]) -> Judgment:
        if expected is None:
            return self.infer(env, e)
        return self.check(env, e, expected, "case")

    # -- rules -------------------------------------------------------------

    def _lam(self, env: TypeEnv, e: Lam, expected: Optional[Arrow], rule: str = "sub") -> Judgment:
        at = env.where(e.pos)
        self._wf(env, e.ty, at)
        self._sorted(env, e.grade, Sort.SENS, at)
        inner = env.bind(e.var, e.ty)
        if expected is None:
            cod, u, cs = self.infer(inner, e.body)
        else:
            cod, u, cs = self.check(inner, e.body, expected.cod, rule)
        cs.append(env.constraint("LE", grade_of(u, e.var), e.grade, at, "lam"))
        if expected is not None:
            cs += subtype(env, as_bang(expected.dom), Bang(e.grade, e.ty), at, rule)
            return expected, ctx_remove(u, [e.var]), cs
        return Arrow(Bang(e.grade, e.ty), cod), ctx_remove(u, [e.var]), cs

    def _app(self, env: TypeEnv, e: App) -> Judgment:
        at = env.where(e.pos)
        if isinstance(e.fn, Prim) and e.fn.name == "cons":
            # cons is generic in its element type, read off the head argument
            elem, _, _ = self.infer(env, e.arg)
            tf, uf, cf = cons_scheme(elem), {}, []
        else:
            tf, uf, cf = self.infer(env, e.fn)
        tf = self._unwrap_bang(env, tf, at, "app", cf)
        if isinstance(tf, Forall):
            return self._app_implicit(env, e, tf, uf, cf)
        if not isinstance(tf, Arrow):
            raise Mismatch(f"applying a term of non-function type {pretty_print(tf)}", at, "app")
        dom = as_bang(tf.dom)
        _, ua, ca = self.check(env, e.arg, dom.body, "app")
        return tf.cod, ctx_add(uf, ctx_scale(dom.grade, ua)), cf + ca

    def _app_implicit(self, env: TypeEnv, e: App, tf: Type, uf: Usage,
                      cf: List[Constraint]) -> Judgment:
        """Apply a quantified function, reading index arguments off the argument's type."""
        at = env.where(e.pos)
        holes: List[Tuple[str, Sort]] = []
        while isinstance(tf, Forall):
            h = env.fresh(tf.var)
            holes.append((h, tf.sort))
            tf = subst_type(tf.body, tf.var, IVar(h, tf.sort))
        tf = _expand(tf)
        if not isinstance(tf, Arrow):
            raise Mismatch(f"applying a term of non-function type {pretty_print(tf)}", at, "app")
        ta, ua, ca = self.infer(env, e.arg)
        solved: Dict[str, IndexTerm] = {}
        _match(as_bang(tf.dom).body, ta, dict(holes), solved, env.sorts)
        for h, j in solved.items():
            tf = subst_type(tf, h, j)
        dom_vars = type_free_index_vars(tf.dom)
        cod = tf.cod
        for h, sort in reversed(holes):
            if h in solved:
                continue
            if h in dom_vars:
                raise CheckError("cannot infer an index argument here; supply it with @[...]",
                                 at, "app")
            cod = Forall(h, sort, cod)
        dom = as_bang(tf.dom)
        ca = ca + subtype(env, ta, dom.body, at, "app")
        return cod, ctx_add(uf, ctx_scale(dom.grade, ua)), cf + ca

    def _let_pair(self, env: TypeEnv, e: LetPair, expected: Optional[Type]) -> Judgment:
        at = env.where(e.pos)
        if e.left == e.right:
            raise CheckError(f"pattern binds {e.left!r} twice", at, "let")
        t, u, cs = self.infer(env, e.bound)
        t = self._unwrap_bang(env, t, at, "let", cs)
        if isinstance(t, BoundedBang):
            raise Unsupported(f"bounded modality with open bound {pretty_print(t.bound)}", at)
        if not isinstance(t, Tensor):
            raise Mismatch(f"let-pair on non-tensor type {pretty_print(t)}", at, "let")
        inner = env.bind(e.left, t.left).bind(e.right, t.right)
        if expected is None:
            tb, ub, cb = self.infer(inner, e.body)
        else:
            tb, ub, cb = self.check(inner, e.body, expected, "let")
        gx, gy = grade_of(ub, e.left), grade_of(ub, e.right)
        s = join_grade(gx, gy)
        cb.append(env.constraint("LE", gx, s, at, "let"))
        cb.append(env.constraint("LE", gy, s, at, "let"))
        usage = ctx_add(ctx_remove(ub, [e.left, e.right]), ctx_scale(s, u))
        return tb, usage, cs + cb

    def _split(self, env: TypeEnv, size: IndexTerm, base: str, at) -> _Split:
        size = apply_assumptions(size, env.assumptions)
        nf = normalize(size)
        if nf.infinite:
            raise Unsupported("case on infinite size", at)
        c = nf.constant()
        if nf.is_closed:
            if c == 0:
                return _Split(env, None, None)
            return _Split(None, env, poly_to_term(_minus_one(nf)))
        if c >= 1:
            return _Split(None, env, poly_to_term(_minus_one(nf)))
        if len(nf.terms) == 1 and nf.terms[0][1] == 1 and len(nf.terms[0][0]) == 1 \
                and nf.terms[0][0][0][0] == "v":
            var = nf.terms[0][0][0][1]
            j = env.fresh(base)
            succ = env.bind_index(j, Sort.SIZE).assume(var, ISum(IVar(j, Sort.SIZE), ONE))
            return _Split(env.assume(var, ZERO), succ, IVar(j, Sort.SIZE), j, IVar(var))
        raise Unsupported(f"case on size {pretty_print(size)} is not supported", at)

    def _combine(self, env: TypeEnv, split: _Split, zero: Optional[Judgment],
                 succ: Optional[Judgment], expected: Optional[Type], at) -> Tuple[Type, List[Constraint]]:
        cs: List[Constraint] = []
        if zero is not None:
            cs += zero[2]
        if succ is not None:
            cs += succ[2]
        if expected is not None:
            return expected, cs
        if zero is not None and succ is not None:
            # the zero branch type is the result; the succ branch must fit it
            cs += subtype(split.succ, succ[0], zero[0], at, "case")
            return zero[0], cs
        return (zero or succ)[0], cs

    def _nat_case(self, env: TypeEnv, e: NatCase, expected: Optional[Type]) -> Judgment:
        at = env.where(e.pos)
        ts, us, cs = self.infer(env, e.scrutinee)
        ts = self._unwrap_bang(env, ts, at, "case", cs)
        if not isinstance(ts, NatT):
            raise Mismatch(f"case on non-Nat type {pretty_print(ts)}", at, "case")
        split = self._split(env, ts.size, "n", at)
        zero = succ = None
        if split.zero is not None:
            zero = self._branch(split.zero, e.zero, expected)
        else:
            self._dead(env, e.zero, expected)
        if split.succ is not None:
            senv = replace(split.succ.bind(e.pred, NatT(split.pred)),
                           recursion_ok=True)
            succ = self._branch(senv, e.succ, expected)
        else:
            self._dead(env.bind(e.pred, NatT(ZERO)), e.succ, expected)
        rtype, bcs = self._combine(env, split, zero, succ, expected, at)
        u_branches: Usage = {}
        scale: IndexTerm = ONE
        if succ is not None:
            u_succ = ctx_remove(succ[1], [e.pred])
            g_pred = grade_of(succ[1], e.pred)
            if split.fresh:
                u_succ = _subst_usage(u_succ, split.fresh, split.scrutinee, at)
                g_pred = _subst_usage({"_": g_pred}, split.fresh, split.scrutinee, at).get("_", ZERO)
            scale = ISum(g_pred, ONE)
            u_branches = u_succ
        if zero is not None:
            u_branches = ctx_join(zero[1], u_branches) if succ is not None else zero[1]
        usage = ctx_add(u_branches, ctx_scale(scale, us))
        return rtype, usage, cs + bcs

    def _list_case(self, env: TypeEnv, e: ListCase, expected: Optional[Type]) -> Judgment:
        at = env.where(e.pos)
        if e.head == e.tail:
            raise CheckError(f"pattern binds {e.head!r} twice", at, "lcase")
        ts, us, cs = self.infer(env, e.scrutinee)
        ts = self._unwrap_bang(env, ts, at, "lcase", cs)
        if not isinstance(ts, ListT):
            raise Mismatch(f"lcase on non-list type {pretty_print(ts)}", at, "lcase")
        split = self._split(env, ts.size, "j", at)
        nil = cons = None
        if split.zero is not None:
            nil = self._branch(split.zero, e.nil, expected)
        else:
            self._dead(env, e.nil, expected)
        if split.succ is not None:
            senv = replace(split.succ.bind(e.head, ts.elem).bind(e.tail, ListT(split.pred, ts.elem)),
                           recursion_ok=True)
            cons = self._branch(senv, e.cons, expected)
        else:
            self._dead(env.bind(e.head, ts.elem).bind(e.tail, ListT(ZERO, ts.elem)), e.cons, expected)
        rtype, bcs = self._combine(env, split, nil, cons, expected, at)
        u_branches: Usage = {}
        scale: IndexTerm = ZERO
        if cons is not None:
            u_cons = cons[1]
            if split.fresh:
                u_cons = _subst_usage(u_cons, split.fresh, split.scrutinee, at)
            gh, gt = grade_of(u_cons, e.head), grade_of(u_cons, e.tail)
            scale = join_grade(gh, gt)
            bcs.append(env.constraint("LE", gh, scale, at, "lcase"))
            bcs.append(env.constraint("LE", gt, scale, at, "lcase"))
            u_branches = ctx_remove(u_cons, [e.head, e.tail])
        if nil is not None:
            u_branches = ctx_join(nil[1], u_branches) if cons is not None else nil[1]
        usage = ctx_add(u_branches, ctx_scale(scale, us))
        return rtype, usage, cs + bcs

    def _dead(self, env: TypeEnv, e: Term, expected: Optional[Type]) -> None:
        # unreachable branch: still scope- and shape-checked, its constraints dropped
        self._branch(env, e, expected)

    # -- declarations ------------------------------------------------------

    def check_decl(self, decl, globals_: Mapping[str, Type], filename: str = "<input>") -> "CheckResult":
        name = decl.name
        at = None if decl.pos is None else f"{filename}:{decl.pos[0]}:{decl.pos[1]}"
        env = TypeEnv(globals=dict(globals_), filename=filename,
                      current=name if isinstance(decl, Def) else None)
        try:
            wf_type(decl.ty, {})
            target = decl.ty
            while isinstance(target, Forall):
                env = env.bind_index(target.var, target.sort)
                target = target.body
            _, usage, cs = self.check(env, decl.body, target, "decl")
        except Mismatch as exc:
            return CheckResult(name, decl.ty, {}, [], "rejected", diagnostic=exc)
        except (CheckError, IndexSortError, Unsupported) as exc:
            if isinstance(exc, CheckError):
                diag = exc
            else:
                diag = CheckError(str(exc), getattr(exc, "at", None) or at, "decl")
            return CheckResult(name, decl.ty, {}, [], "error", diagnostic=diag)
        for c in cs:
            if not entails(c):
                return CheckResult(name, decl.ty, usage, cs, "rejected", unsolved=c)
        return CheckResult(name, decl.ty, usage, cs, "accepted")

    def check_program(self, program: Program,
                      globals_: Optional[Dict[str, Type]] = None) -> List["CheckResult"]:
        """Check declarations in order; definitions become visible to later ones.

        ``globals_`` (if given) is extended in place with each definition.
        """
        env_globals = globals_ if globals_ is not None else {}
        results = []
        for decl in program.decls:
            if isinstance(decl, Def):
                env_globals[decl.name] = decl.ty
            results.append(self.check_decl(decl, env_globals, program.filename))
        return results


def _minus_one(nf: PolyNF) -> PolyNF:
    coeffs = nf.as_dict()
    coeffs[()] = coeffs.get((), 0) - 1
    return PolyNF.build(coeffs)


def _match(pattern: Type, actual: Type, holes: Mapping[str, Sort],
           solved: Dict[str, IndexTerm], sorts: Mapping[str, Sort]) -> None:
    """Solve index holes occurring bare in ``pattern`` from ``actual``."""

    def bind(p: IndexTerm, a: IndexTerm) -> None:
        if isinstance(p, IVar) and p.name in holes and p.name not in solved:
            try:
                check_sort(a, sorts, holes[p.name])
            except IndexSortError:
                return
            solved[p.name] = a

    pattern, actual = _expand(pattern), _expand(actual)
    if isinstance(pattern, Bang) or isinstance(actual, Bang):
        bp, ba = as_bang(pattern), as_bang(actual)
        bind(bp.grade, ba.grade)
        _match(bp.body, ba.body, holes, solved, sorts)
    elif isinstance(pattern, NatT) and isinstance(actual, NatT):
        bind(pattern.size, actual.size)
    elif isinstance(pattern, ListT) and isinstance(actual, ListT):
        bind(pattern.size, actual.size)
        _match(pattern.elem, actual.elem, holes, solved, sorts)
    elif isinstance(pattern, Tensor) and isinstance(actual, Tensor):
        _match(pattern.left, actual.left, holes, solved, sorts)
        _match(pattern.right, actual.right, holes, solved, sorts)
    elif isinstance(pattern, Arrow) and isinstance(actual, Arrow):
        _match(as_bang(pattern.dom), as_bang(actual.dom), holes, solved, sorts)
        _match(pattern.cod, actual.cod, holes, solved, sorts)


@dataclass
class CheckResult:
    """Outcome for one declaration.

    ``type`` is the declared type the body was checked against; ``usage``
    and ``constraints`` are what the checker generated on the way.
    """

    name: str
    type: Type
    usage: Usage = field(default_factory=dict)
    constraints: List[Constraint] = field(default_factory=list)
    verdict: str = "accepted"  # accepted | rejected | error
    unsolved: Optional[Constraint] = None
    diagnostic: Optional[CheckError] = None

    @property
    def accepted(self) -> bool:
        return self.verdict == "accepted"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "type": pretty_print(self.type),
            "verdict": self.verdict,
            "usage": {x: pretty_print(g) for x, g in sorted(self.usage.items())},
            "constraints": [c.to_json() for c in self.constraints],
            "unsolved": self.unsolved.to_json() if self.unsolved else None,
            "diagnostic": None if self.diagnostic is None else {
                "message": self.diagnostic.msg,
                "at": self.diagnostic.at,
                "rule": self.diagnostic.rule,
            },
        }

    def verdict_line(self) -> str:
        if self.accepted:
            return f"ACCEPT {self.name} : {pretty_print(self.type)}"
        if self.unsolved is not None:
            c = self.unsolved
            return f"REJECT {self.name} — unsolved: {c} at {c.at} (rule {c.rule})"
        d = self.diagnostic
        kind = "mismatch" if isinstance(d, Mismatch) else "error"
        return f"REJECT {self.name} — {kind}: {d.msg} at {d.at} (rule {d.rule})"


def infer(env: TypeEnv, e: Term, paper_iter: bool = False) -> Judgment:
    return Checker(paper_iter=paper_iter).infer(env, e)


def check_program(program: Program, paper_iter: bool = False,
                  globals_: Optional[Dict[str, Type]] = None) -> List[CheckResult]:
    return Checker(paper_iter=paper_iter).check_program(program, globals_)
