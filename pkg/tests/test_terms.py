import pytest
from hypothesis import given, strategies as st

from lamping.terms import (
    Abs, App, FuelExhausted, NotNormal, TermSyntaxError, Var, alpha_eq,
    beta_normalize, head_decompose, head_reassemble, is_normal, parse_term,
    show_term,
)


def test_parse_identity():
    assert parse_term("\\x.x") == Abs("x", Var("x"))


def test_parse_running_example_application():
    t = parse_term("(\\x.f x x)(\\z.g z)")
    assert t == App(
        Abs("x", App(App(Var("f"), Var("x")), Var("x"))),
        Abs("z", App(Var("g"), Var("z"))),
    )


def test_parse_left_associative():
    assert parse_term("f x y") == App(App(Var("f"), Var("x")), Var("y"))


def test_parse_body_extends_right():
    assert parse_term("\\x.f x") == Abs("x", App(Var("f"), Var("x")))


def test_parse_error_carries_position():
    with pytest.raises(TermSyntaxError) as e:
        parse_term("\\x.")
    assert e.value.pos == 3


def test_beta_single_step():
    assert alpha_eq(beta_normalize(parse_term("(\\x.x) y")), Var("y"))


def test_beta_running_example():
    t = beta_normalize(parse_term("(\\x.f x x)(\\z.g z)"))
    assert alpha_eq(t, parse_term("f (\\z.g z) (\\z.g z)"))


def test_beta_church_two_squared():
    two = "(\\s.\\z.s (s z))"
    t = beta_normalize(parse_term(f"{two} {two} s z"))
    assert alpha_eq(t, parse_term("s (s (s (s z)))"))


def test_beta_fuel_exhausted_on_omega():
    omega = parse_term("(\\x.x x)(\\x.x x)")
    with pytest.raises(FuelExhausted):
        beta_normalize(omega, fuel=100)


def test_beta_rejects_nonpositive_fuel():
    with pytest.raises(ValueError):
        beta_normalize(Var("x"), fuel=0)


def test_alpha_examples():
    assert alpha_eq(parse_term("\\x.x"), parse_term("\\y.y"))
    assert not alpha_eq(parse_term("\\x.\\y.x"), parse_term("\\x.\\y.y"))
    assert alpha_eq(parse_term("f (\\z.g z) (\\z.g z)"),
                    parse_term("f (\\w.g w) (\\z.g z)"))


def test_head_decompose_paper_shape():
    n, head, args = head_decompose(parse_term("\\x.y (\\z.z x) w"))
    assert n == 1
    assert head == ("free", "y")
    assert [show_term(a) for a in args] == ["\\z.z x", "w"]


def test_head_decompose_variable():
    assert head_decompose(Var("x")) == (0, ("free", "x"), ())


def test_head_decompose_bound_head():
    n, head, args = head_decompose(parse_term("\\x.\\y.x"))
    assert (n, head, args) == (2, ("bound", 1), ())


def test_head_decompose_rejects_redex():
    with pytest.raises(NotNormal):
        head_decompose(parse_term("(\\x.x) y"))


def test_term_size():
    from lamping.terms import term_size
    assert term_size(parse_term("\\x.f x x")) == 6


# -- property tests ----------------------------------------------------------

_names = st.sampled_from(["a", "b", "c", "f", "x", "y", "z"])


def _terms(depth):
    if depth == 0:
        return st.builds(Var, _names)
    sub = _terms(depth - 1)
    return st.one_of(
        st.builds(Var, _names),
        st.builds(Abs, _names, sub),
        st.builds(App, sub, sub),
    )


@given(_terms(4))
def test_print_parse_roundtrip(t):
    assert alpha_eq(parse_term(show_term(t)), t)


@given(_terms(4))
def test_normalize_idempotent(t):
    try:
        n = beta_normalize(t, fuel=200)
    except FuelExhausted:
        return
    assert is_normal(n)
    assert alpha_eq(beta_normalize(n, fuel=200), n)


@given(_terms(4))
def test_head_reassemble_inverse(t):
    try:
        n = beta_normalize(t, fuel=200)
    except FuelExhausted:
        return
    count, head, args = head_decompose(n)
    binders = []
    probe = n
    for _ in range(count):
        binders.append(probe.binder)
        probe = probe.body
    assert alpha_eq(head_reassemble(count, head, args, binders), n)
