import pytest

from needlab.ckh import (
    DESCEND_LAM,
    LOOKUPVAR,
    PUSHARG,
    UPDATEHEAP,
    CKHState,
    VarF,
    buildL,
    eval_ckh,
    inject_ckh,
    is_final,
    step_ckh,
)
from needlab.gen import gen_closed
from needlab.lstep import is_cl, step_lstep
from needlab.results import Done, Timeout
from needlab.syntax import parse
from needlab.terms import (
    App,
    Labeled,
    Lam,
    Name,
    NameSupply,
    OpenTermError,
    Var,
    alpha_eq,
    erase,
    hygienize,
    strip_value_labels,
    term_eq,
)

OMEGA = r"(\d.d d) (\d.d d)"


def test_inject():
    t = parse(r"\x.x")
    s = inject_ckh(t)
    assert s.control is t and s.frames == () and s.heap == {}
    assert is_final(s)
    with pytest.raises(OpenTermError):
        inject_ckh(parse("x"))


def test_four_step_golden():
    t = hygienize(parse(r"(\x.x) (\y.y)"))
    sup = NameSupply.for_term(t)
    s = inject_ckh(t)
    rule, s = step_ckh(s, sup)
    assert rule == PUSHARG
    rule, s = step_ckh(s, sup)
    assert rule == DESCEND_LAM
    assert isinstance(s.control, Var)
    fresh = s.control.name
    assert fresh.index > 0  # heap names are machine minted
    assert fresh in s.heap
    rule, s = step_ckh(s, sup)
    assert rule == LOOKUPVAR
    assert s.frames and isinstance(s.frames[0], VarF)
    assert fresh not in s.heap  # checked out during evaluation
    rule, s = step_ckh(s, sup)
    assert rule == UPDATEHEAP
    assert alpha_eq(s.heap[fresh], parse(r"\y.y"))
    assert step_ckh(s, sup) is None
    assert is_final(s)


def test_laziness_golden():
    t = hygienize(App(parse(r"\x.\y.x"), parse(OMEGA)))
    sup = NameSupply.for_term(t)
    s = inject_ckh(t)
    rules = []
    while True:
        r = step_ckh(s, sup)
        if r is None:
            break
        rules.append(r[0])
        s = r[1]
    assert rules == [PUSHARG, DESCEND_LAM]
    assert LOOKUPVAR not in rules  # the diverging binding is never demanded
    # erasure still contains the untouched diverging argument under a label
    result = buildL(s)
    assert alpha_eq(erase(result), parse(r"\y.(\d.d d) (\d.d d)"))


def test_buildL_clauses():
    heap_name = Name("x", 1)
    v = parse(r"\y.y")
    s = CKHState(Var(heap_name), (), {heap_name: v})
    out = buildL(s)
    assert isinstance(out, Labeled) and out.label == heap_name
    assert term_eq(out.body, v)

    t = hygienize(parse(r"(\a.a) (\b.b)"))
    assert term_eq(buildL(inject_ckh(t)), t)

    s = CKHState(v, (VarF(heap_name),), {})
    out = buildL(s)
    assert isinstance(out, Labeled) and out.label == heap_name
    assert term_eq(out.body, v)


def test_buildL_shares_closed_bindings():
    heap_name = Name("x", 1)
    body = App(Var(heap_name), Var(heap_name))
    s = CKHState(Lam(Name("w"), body), (), {heap_name: parse(r"\y.y")})
    out = buildL(s)
    assert is_cl(out)


def test_eval_ckh():
    r = eval_ckh(parse(r"(\x.x) (\y.y)"), 100)
    assert isinstance(r, Done) and r.steps == 4
    assert alpha_eq(erase(r.answer), parse(r"\y.y"))
    assert isinstance(eval_ckh(parse(OMEGA), 50), Timeout)


def test_heap_bindings_evaluated_at_most_once():
    # after a value is written back, later lookups reinstall the same value
    t = hygienize(parse(r"(\x.x x) (\a.a)"))
    sup = NameSupply.for_term(t)
    s = inject_ckh(t)
    lookups: dict = {}
    updates: dict = {}
    while True:
        r = step_ckh(s, sup)
        if r is None:
            break
        rule, s2 = r
        if rule == LOOKUPVAR:
            name = s.control.name
            lookups[name] = lookups.get(name, 0) + 1
            if name in updates:
                # the checked-out binding is already a value
                assert isinstance(s2.control, Lam)
        if rule == UPDATEHEAP:
            name = s.frames[0].name
            if name in updates:
                assert alpha_eq(updates[name], s2.heap[name])
            updates[name] = s2.heap[name]
        s = r[1]


def test_labeled_map_step_shape_on_corpus():
    # the labeled image moves only at descend-lam, by exactly one parallel
    # step; updateheap drops a label stack on a value, a no-op modulo
    # value-label normalization
    terms = [parse(r"(\x.x) (\y.y)"), parse(r"(\x.x x) ((\a.a) (\b.b))")] + [
        gen_closed(s, 14) for s in range(60)
    ]
    for t in terms:
        sup = NameSupply.for_term(t)
        s = inject_ckh(hygienize(t, sup))
        for _ in range(250):
            r = step_ckh(s, sup)
            if r is None:
                break
            rule, s2 = r
            m1 = strip_value_labels(buildL(s))
            m2 = strip_value_labels(buildL(s2))
            if rule == DESCEND_LAM:
                n = step_lstep(m1, check=False)
                assert n is not None and alpha_eq(strip_value_labels(n), m2)
            else:
                assert alpha_eq(m1, m2)
            s = s2


def test_extensional_agreement_with_need():
    from needlab.harness import answer_value
    from needlab.need import eval_sr

    for seed in range(80):
        t = gen_closed(seed, 14)
        a = eval_sr(t, 400)
        b = eval_ckh(t, 400)
        assert isinstance(a, Done) == isinstance(b, Done)
        if isinstance(a, Done):
            assert alpha_eq(answer_value("need-sr", a), answer_value("ckh", b))
