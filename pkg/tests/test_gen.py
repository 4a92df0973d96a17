from needlab.gen import count_closed, enumerate_closed, gen_closed
from needlab.syntax import parse
from needlab.terms import alpha_eq, canon, is_closed, is_hygienic, term_eq, term_size


def test_enumerate_small_inventory():
    # brute-force oracle under the AST-node size metric
    upto3 = list(enumerate_closed(3))
    assert len(upto3) == 3
    expected = [parse(r"\x.x"), parse(r"\x.\y.x"), parse(r"\x.\y.y")]
    for e in expected:
        assert any(alpha_eq(e, t) for t in upto3)
    # the self-application needs four nodes
    upto4 = list(enumerate_closed(4))
    assert any(alpha_eq(parse(r"\x.x x"), t) for t in upto4)
    assert not any(alpha_eq(parse(r"\x.x x"), t) for t in upto3)


def test_enumerate_closed_and_unique():
    seen = set()
    for t in enumerate_closed(6):
        assert is_closed(t)
        assert term_size(t) <= 6
        key = canon(t)
        assert key not in seen, "duplicate alpha-class"
        seen.add(key)
    assert len(seen) == count_closed(6)


def test_enumerate_binder_naming_is_hygienic():
    for t in enumerate_closed(6):
        assert is_hygienic(t)


def test_gen_closed_deterministic():
    a = gen_closed(42, 20)
    b = gen_closed(42, 20)
    assert term_eq(a, b)


def test_gen_closed_contract():
    for seed in range(200):
        t = gen_closed(seed, 17)
        assert is_closed(t)
        assert 2 <= term_size(t) <= 17
        assert is_hygienic(t)
