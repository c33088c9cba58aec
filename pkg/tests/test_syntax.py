from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lindep.syntax import (
    App, Arrow, Bang, BoundedBang, Check, Forall, IApp, IInf, INat, IPow, IProd,
    IRat, ISum, IVar, Lam, NatT, ParseError, Prim, Real, RealLit, Sort, Var,
    alpha_equiv, canonical, parse_index, parse_program, parse_term, parse_type, pretty_print,
)

from gen import gen_index, gen_program, gen_term, gen_type, index_scope


class TestParser:
    def test_add_twice(self):
        (d,) = parse_program("def addTwice : ![2] R -o R = fun (x :[2] R) => add x x ;")
        assert d.name == "addTwice"
        assert d.ty == Arrow(Bang(INat(2), Real()), Real())
        assert d.body == Lam("x", INat(2), Real(),
                             App(App(Prim("add"), Var("x")), Var("x")))

    def test_arrow_sugar(self):
        assert parse_type("R -> R") == Arrow(Bang(IInf(), Real()), Real())

    def test_arrows_associate_right(self):
        assert parse_type("R -o R -o R") == Arrow(Real(), Arrow(Real(), Real()))

    def test_index_precedence(self):
        assert parse_index("1 + 2 * i ^ 3") == ISum(INat(1), IProd(INat(2), IPow(IVar("i"), INat(3))))

    def test_rational_literals(self):
        assert parse_index("1/2") == IRat(Fraction(1, 2))
        assert parse_index("2.5") == IRat(Fraction(5, 2))
        assert parse_term("cmul(1/3)") == Prim("cmul", Fraction(1, 3))
        assert parse_term("-2.5") == RealLit(-2.5)

    def test_forall_records_sort(self):
        t = parse_type("forall i : size. Nat[i]")
        assert t == Forall("i", Sort.SIZE, NatT(IVar("i")))
        assert t.body.size.sort is Sort.SIZE

    def test_bounded_bang(self):
        assert parse_type("bang a < 3 . Nat[a]") == BoundedBang("a", INat(3), NatT(IVar("a")))

    def test_binder_after_arrow(self):
        assert parse_type("R -o forall i : size. Nat[i]") == \
            Arrow(Real(), Forall("i", Sort.SIZE, NatT(IVar("i"))))

    def test_index_application(self):
        assert parse_term("iter @[3] @[2]") == IApp(IApp(Prim("iter"), INat(3)), INat(2))

    def test_check_declaration(self):
        (c,) = parse_program("\n  check 1.0 : R ;")
        assert isinstance(c, Check) and c.name == "check@2:3"

    def test_comments_and_empty(self):
        assert parse_program("# nothing here\n").decls == ()

    @pytest.mark.parametrize("src", [
        "def f : R = ;",
        "def f : R = 1.0",
        "def f : ![ ] R -o R = cmul(2) ;",
        "def f : R = cmul(x) ;",
        "def f : R = 1.0 ; def f : R = 2.0 ;",
        "def fun : R = 1.0 ;",
        "def f : Nat[-1] = 0 ;",
    ])
    def test_rejects(self, src):
        with pytest.raises(ParseError):
            parse_program(src)

    def test_error_position(self):
        with pytest.raises(ParseError) as err:
            parse_program("def f : R =\n  (1.0 ;", "bad.fz")
        assert err.value.line == 2
        assert "bad.fz:2:" in str(err.value)


class TestPrinter:
    @pytest.mark.parametrize("src", [
        "![2] R -o R",
        "R -> R",
        "forall i : size. forall j : size. List[i] R -o List[j] R -o List[i + j] R",
        "Nat[i] -> (![r] R -o R) -> ![r ^ i] R -o R",
        "bang a < 3 . Nat[a]",
        "(R * R) * R",
        "List[2] (R * Unit)",
    ])
    def test_types_print_as_written(self, src):
        assert pretty_print(parse_type(src)) == src

    def test_index_printing(self):
        assert pretty_print(ISum(INat(1), IProd(INat(2), INat(3)))) == "1 + 2 * 3"
        assert pretty_print(IProd(ISum(INat(1), INat(2)), INat(3))) == "(1 + 2) * 3"
        assert pretty_print(IRat(Fraction(1, 2))) == "0.5"
        assert pretty_print(IRat(Fraction(1, 3))) == "1/3"
        assert pretty_print(IRat(Fraction(4))) == "4.0"

    def test_program_lines(self):
        src = "def a : R = 1.0 ;\ncheck a : R ;\n"
        assert pretty_print(parse_program(src)) == src

    def test_application_parenthesised(self):
        e = App(Var("f"), App(Var("g"), Var("x")))
        assert pretty_print(e) == "f (g x)"
        assert parse_term(pretty_print(e)) == e


class TestAlpha:
    def test_renamed_lambda(self):
        assert alpha_equiv(parse_term("fun (x :[1] R) => x"), parse_term("fun (y :[1] R) => y"))
        assert not alpha_equiv(parse_term("fun (x :[1] R) => x"), parse_term("fun (y :[1] R) => x"))

    def test_renamed_forall(self):
        assert alpha_equiv(parse_type("forall i : size. Nat[i]"), parse_type("forall j : size. Nat[j]"))
        assert not alpha_equiv(parse_type("forall i : size. Nat[i]"),
                               parse_type("forall i : sens. Nat[i]"))

    def test_def_binds_type_variables_in_body(self):
        a = parse_program("def f : forall i : size. Nat[i] -o Nat[i] = fun (n :[1] Nat[i]) => n ;")
        b = parse_program("def f : forall k : size. Nat[k] -o Nat[k] = fun (m :[1] Nat[k]) => m ;")
        assert alpha_equiv(a, b)

    def test_canonical_idempotent(self):
        t = parse_type("forall i : size. bang a < i . List[a] R")
        assert canonical(canonical(t)) == canonical(t)


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False))
def test_roundtrip_programs(rng):
    p = gen_program(rng)
    assert alpha_equiv(parse_program(pretty_print(p)), p)


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False))
def test_roundtrip_types_and_indices(rng):
    scope = index_scope(rng)
    t = gen_type(rng, scope)
    assert alpha_equiv(parse_type(pretty_print(t)), t)
    i = gen_index(rng, scope)
    assert parse_index(pretty_print(i)) == i


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False))
def test_printing_is_stable(rng):
    e = gen_term(rng, {}, ["x"])
    once = pretty_print(e)
    assert pretty_print(parse_term(once)) == once
