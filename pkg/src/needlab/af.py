"""Reference semantics: the classical call-by-need calculus, its modified
variant, and a call-by-name evaluator.

The original calculus keeps binders adjacent to their arguments, so three
axioms drive its standard reduction: deref copies a value argument to the
single demanded occurrence, while lift and assoc re-associate one answer
layer at a time to expose the next deref.  The modified variant collapses
each run of consecutive re-associations into one step and substitutes all
occurrences at once:

    beta-need'  (lam x. E[x]) v          = E[x]{x := v}
    lift'       ((lam x. A[v]) e1) e2    = (lam x. A[v e2]) e1
    assoc'      (lam x. E[x]) (A[v])     = A[(lam x. E[x]) v]   (A nonempty)

Note lift' and assoc' carry the argument or the demanding call all the
way in next to the value.  An assoc' contractum always contains an
immediate beta-need' redex; merging the two gives the bookkeeping-free
combined axiom, exposed here only as the MERGED_RULE label for trace
readers (the step function never emits it).

The redex search reuses the shared frame machinery: a BodF frame with an
empty between-context plays the demand frame (lam x. E[x]) [] while the
argument reduces.
"""
from __future__ import annotations

from typing import Optional

from .frames import ArgF, BodF, Frames, LamF, plug
from .results import Done, Timeout
from .terms import (
    App,
    Lam,
    NameSupply,
    OpenTermError,
    Term,
    Var,
    freshen,
    hygienize,
    is_closed,
    subst,
)

DEREF, LIFT, ASSOC = "deref", "lift", "assoc"
BETA_NEED_MOD, LIFT_MOD, ASSOC_MOD = "beta-need'", "lift'", "assoc'"
#: Pedagogical alias: an assoc' step immediately followed by beta-need' on
#: the exposed redex acts as one merged axiom.
MERGED_RULE = "beta-need''"


def is_value(t: Term) -> bool:
    return isinstance(t, Lam)


def af_answer_split(t: Term) -> Optional[tuple[Frames, Term]]:
    """Split t as nested (lam x. a) e layers around a value, if possible."""
    frames: Frames = ()
    while isinstance(t, App) and isinstance(t.fn, Lam):
        frames = frames + (LamF(t.fn.binder), ArgF(t.arg))
        t = t.fn.body
    if isinstance(t, Lam):
        return frames, t
    return None


def is_af_answer(t: Term) -> bool:
    return af_answer_split(t) is not None


def _rebuild(stack: list, sub: Term) -> Term:
    return plug(tuple(reversed(stack)), sub)


def _step(t: Term, modified: bool, supply: NameSupply) -> Optional[tuple[str, Term]]:
    """One standard-reduction step of the plain or modified calculus.

    The stack is outermost-first; LamF frames only ever sit directly on
    the ArgF carrying their argument, and BodF frames have an empty
    between-context (the binder-adjacency the calculus maintains).
    """
    control = t
    stack: list = []
    while True:
        if isinstance(control, App):
            stack.append(ArgF(control.arg))
            control = control.fn
        elif isinstance(control, Lam) and stack and isinstance(stack[-1], ArgF):
            stack.append(LamF(control.binder))
            control = control.body
        elif isinstance(control, Lam):
            return _resolve_value(control, stack, modified, supply)
        elif isinstance(control, Var):
            name = control.name
            lam_at = None
            for j in range(len(stack) - 1, -1, -1):
                f = stack[j]
                if isinstance(f, LamF) and f.binder == name:
                    lam_at = j
                    break
            if lam_at is None:
                raise OpenTermError(f"demanded variable {name} is unbound")
            assert lam_at > 0 and isinstance(stack[lam_at - 1], ArgF)
            inner = tuple(reversed(stack[lam_at + 1 :]))
            arg = stack[lam_at - 1].term
            rest = stack[: lam_at - 1]
            if is_value(arg):
                if modified:
                    body = plug(inner, Var(name))
                    return BETA_NEED_MOD, _rebuild(rest, subst(body, name, arg, supply))
                copy = freshen(arg, supply)
                new = App(Lam(name, plug(inner, copy)), arg)
                return DEREF, _rebuild(rest, new)
            split = af_answer_split(arg)
            if split is not None:
                if modified:
                    frames, value = split
                    new = plug(frames, App(Lam(name, plug(inner, Var(name))), value))
                    return ASSOC_MOD, _rebuild(rest, new)
                # one outer layer only: (lam x. E[x]) ((lam y. a) e)
                outer_lam = arg.fn
                new = App(
                    Lam(
                        outer_lam.binder,
                        App(Lam(name, plug(inner, Var(name))), outer_lam.body),
                    ),
                    arg.arg,
                )
                return ASSOC, _rebuild(rest, new)
            stack = rest
            stack.append(BodF(name, inner, ()))
            control = arg
        else:
            raise AssertionError(f"reduction reached {type(control).__name__}")


def _resolve_value(v: Term, stack: list, modified: bool, supply: NameSupply):
    # consume answer layers: each is an ArgF directly under its LamF
    i = len(stack)
    while i >= 2 and isinstance(stack[i - 1], LamF) and isinstance(stack[i - 2], ArgF):
        i -= 2
    pair_frames = tuple(reversed(stack[i:]))
    if i == 0:
        return None  # whole term is an answer
    boundary = stack[i - 1]
    rest = stack[: i - 1]
    if isinstance(boundary, ArgF):
        # ((lam x. a) e1) e2 with at least one layer present
        assert pair_frames, "application of a bare value cannot be a lift redex"
        e2 = boundary.term
        outer_lam = pair_frames[-2]
        outer_arg = pair_frames[-1]
        assert isinstance(outer_lam, LamF) and isinstance(outer_arg, ArgF)
        inner_frames = pair_frames[:-2]
        if modified:
            body = plug(inner_frames, App(v, e2))
        else:
            body = App(plug(inner_frames, v), e2)
        new = App(Lam(outer_lam.binder, body), outer_arg.term)
        return (LIFT_MOD if modified else LIFT), _rebuild(rest, new)
    assert isinstance(boundary, BodF) and not boundary.between
    call_body = plug(boundary.inner, Var(boundary.binder))
    if not pair_frames:
        # argument reduced to a bare value
        if modified:
            return BETA_NEED_MOD, _rebuild(rest, subst(call_body, boundary.binder, v, supply))
        copy = freshen(v, supply)
        new = App(Lam(boundary.binder, plug(boundary.inner, copy)), v)
        return DEREF, _rebuild(rest, new)
    if modified:
        new = plug(pair_frames, App(Lam(boundary.binder, call_body), v))
        return ASSOC_MOD, _rebuild(rest, new)
    outer_lam = pair_frames[-2]
    outer_arg = pair_frames[-1]
    inner_answer = plug(pair_frames[:-2], v)
    new = App(
        Lam(outer_lam.binder, App(Lam(boundary.binder, call_body), inner_answer)),
        outer_arg.term,
    )
    return ASSOC, _rebuild(rest, new)


def step_af(t: Term, supply: Optional[NameSupply] = None) -> Optional[tuple[str, Term]]:
    """One leftmost standard step of the plain calculus; absent on answers."""
    if not is_closed(t):
        raise OpenTermError("step_af requires a closed term")
    if supply is None:
        supply = NameSupply.for_term(t)
    return _step(hygienize(t, supply), False, supply)


def step_afmod(t: Term, supply: Optional[NameSupply] = None) -> Optional[tuple[str, Term]]:
    """One standard step of the modified calculus; absent on answers."""
    if not is_closed(t):
        raise OpenTermError("step_afmod requires a closed term")
    if supply is None:
        supply = NameSupply.for_term(t)
    return _step(hygienize(t, supply), True, supply)


def _eval(t: Term, fuel: int, modified: bool):
    if not is_closed(t):
        raise OpenTermError("evaluation requires a closed term")
    if fuel < 0:
        raise ValueError("fuel must be >= 0")
    supply = NameSupply.for_term(t)
    t = hygienize(t, supply)
    steps = 0
    while True:
        r = _step(t, modified, supply)
        if r is None:
            return Done(t, steps)
        if steps == fuel:
            return Timeout(steps)
        t = r[1]
        steps += 1


def eval_af(t: Term, fuel: int):
    return _eval(t, fuel, False)


def eval_afmod(t: Term, fuel: int):
    return _eval(t, fuel, True)


def step_name(t: Term, supply: Optional[NameSupply] = None) -> Optional[Term]:
    """One call-by-name step: leftmost-outermost beta, absent on values."""
    if supply is None:
        supply = NameSupply.for_term(t)
    spine: list[App] = []
    c = t
    while isinstance(c, App):
        spine.append(c)
        c = c.fn
    if isinstance(c, Var):
        raise OpenTermError(f"head variable {c.name} is unbound")
    if not spine:
        return None
    redex_app = spine.pop()
    new = subst(c.body, c.binder, redex_app.arg, supply)
    for node in reversed(spine):
        new = App(new, node.arg)
    return new


def eval_name(t: Term, fuel: int):
    """Call-by-name evaluation to a value."""
    if not is_closed(t):
        raise OpenTermError("eval_name requires a closed term")
    if fuel < 0:
        raise ValueError("fuel must be >= 0")
    supply = NameSupply.for_term(t)
    t = hygienize(t, supply)
    steps = 0
    while True:
        if isinstance(t, Lam):
            return Done(t, steps)
        if steps == fuel:
            return Timeout(steps)
        t = step_name(t, supply)
        steps += 1
