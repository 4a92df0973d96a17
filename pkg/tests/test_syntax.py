import pytest

from needlab.syntax import ParseError, parse, print_term
from needlab.terms import App, Lam, Name, Var, term_eq


def test_parse_single_production():
    t = parse(r"\x.x")
    assert term_eq(t, Lam(Name("x"), Var(Name("x"))))


def test_parse_body_extends_right():
    t = parse(r"\x.x x")
    assert term_eq(t, Lam(Name("x"), App(Var(Name("x")), Var(Name("x")))))


def test_parse_left_associative():
    t = parse("f a b")
    assert term_eq(t, App(App(Var(Name("f")), Var(Name("a"))), Var(Name("b"))))


def test_parse_lambda_synonym_and_comments():
    t = parse("λx.x  -- identity\n")
    assert term_eq(t, parse(r"\x.x"))


def test_parse_fresh_name_suffix():
    t = parse("x%3")
    assert term_eq(t, Var(Name("x", 3)))
    with pytest.raises(ParseError):
        parse("x% y")


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as e:
        parse("(\\x.x")
    assert e.value.line == 1
    with pytest.raises(ParseError):
        parse("")
    with pytest.raises(ParseError):
        parse(r"\x x")
    with pytest.raises(ParseError):
        parse("x ?")


def test_print_minimal_parens():
    assert print_term(parse(r"\x.x x")) == r"\x.x x"
    assert print_term(parse("f a b")) == "f a b"
    assert print_term(parse(r"(\x.x) y")) == r"(\x.x) y"
    assert print_term(parse("x (y z)")) == "x (y z)"
    assert print_term(parse(r"x (\y.y)")) == r"x (\y.y)"


def test_round_trip():
    sources = [
        r"\x.x",
        r"\x.\y.x y (x y)",
        r"(\x.x x) ((\a.a) (\b.b))",
        "f (g h) ((a b) c)",
        r"\f.(\x.f (x x)) (\x.f (x x))",
        "x%3 (\\y%1.y%1)",
        r"\x'.x' x''",
    ]
    for src in sources:
        t = parse(src)
        assert term_eq(parse(print_term(t)), t)
