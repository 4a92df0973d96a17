"""The CK transition system: redex search as small-step state transitions.

States pair a control string with a frame list encoding the evaluation
context.  Four rules: pusharg focuses the operator of an application,
descend-lam goes under a binder when the balance function finds it a
pending argument, lookupvar packages the context around a demanded
variable into a bod frame and focuses the argument, and beta-need-ck
substitutes a finished argument value into the stored body context.

Two mapping functions relate states to the other semantics: build plugs
the control into the frame context (pure terms), and build_step_term
replays the frames as eager labeled substitutions (labeled terms).  The
system exists to make the per-step correspondence checkable; it is not an
efficient evaluator (lookupvar re-validates context grammars each time).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .frames import (
    ArgF,
    BodF,
    Frames,
    LamF,
    balance,
    classify_frames,
    context_term,
    is_answer_frames,
    is_demand_frames,
    matching_argument,
    plug,
    split_inner_partial,
    split_outer_partial,
)
from .results import Done, Timeout
from .terms import (
    App,
    Labeled,
    Lam,
    NameSupply,
    OpenTermError,
    Term,
    Var,
    hygienize,
    is_closed,
    subst,
    subst_shared,
)

PUSHARG, DESCEND_LAM, LOOKUPVAR, BETA_NEED_CK = (
    "pusharg",
    "descend-lam",
    "lookupvar",
    "beta-need-ck",
)


@dataclass(frozen=True, eq=False)
class CKState:
    control: Term
    frames: Frames = ()


class IllFormedState(AssertionError):
    """No rule applies and the state is not final; unreachable from a
    closed injection."""


def inject_ck(t: Term) -> CKState:
    if not is_closed(t):
        raise OpenTermError("inject_ck requires a closed term")
    return CKState(t, ())


def is_final(s: CKState) -> bool:
    return isinstance(s.control, Lam) and is_answer_frames(s.frames)


def build(s: CKState) -> Term:
    """Plug the control into the context the frames denote."""
    return plug(s.frames, s.control)


def buildF(frames: Frames) -> Term:
    """The frame context as a term with a distinguished hole."""
    return context_term(frames)


def subst_frames(frames: Frames, x, v: Term, supply: NameSupply) -> Frames:
    """Map substitution across every term embedded in a frame list; every
    inserted copy is freshened (the original value lives in the control)."""
    out = []
    for f in frames:
        if isinstance(f, ArgF):
            out.append(ArgF(subst(f.term, x, v, supply, keep_first=False)))
        elif isinstance(f, LamF):
            out.append(f)
        else:
            out.append(
                BodF(
                    f.binder,
                    subst_frames(f.inner, x, v, supply),
                    subst_frames(f.between, x, v, supply),
                )
            )
    return tuple(out)


def step_ck(s: CKState, supply: Optional[NameSupply] = None) -> Optional[tuple[str, CKState]]:
    """One transition; absent iff the state is final."""
    control, frames = s.control, s.frames
    if isinstance(control, App):
        return PUSHARG, CKState(control.fn, (ArgF(control.arg),) + frames)
    if isinstance(control, Lam):
        if balance(frames) > 0:
            return DESCEND_LAM, CKState(control.body, (LamF(control.binder),) + frames)
        if is_answer_frames(frames):
            return None
        bod_at = None
        for i, f in enumerate(frames):
            if isinstance(f, BodF):
                bod_at = i
                break
        if bod_at is None:
            raise IllFormedState("value control with a non-answer context")
        arg_frames = frames[:bod_at]
        if not is_answer_frames(arg_frames):
            raise IllFormedState("argument context is not an answer context")
        bod = frames[bod_at]
        if supply is None:
            supply = NameSupply.for_term(build(s))
        new_frames = (
            subst_frames(bod.inner, bod.binder, control, supply)
            + arg_frames
            + bod.between
            + frames[bod_at + 1 :]
        )
        return BETA_NEED_CK, CKState(control, new_frames)
    if isinstance(control, Var):
        name = control.name
        lam_at = None
        for j, f in enumerate(frames):
            if isinstance(f, LamF) and f.binder == name:
                lam_at = j
                break
        if lam_at is None:
            raise IllFormedState(f"demanded variable {name} is unbound")
        arg_at = matching_argument(frames, lam_at)
        if arg_at is None:
            raise IllFormedState(f"binder {name} has no matching argument")
        inner = frames[:lam_at]
        between = frames[lam_at + 1 : arg_at]
        rest = frames[arg_at + 1 :]
        split = split_inner_partial(inner)
        if split is None:
            raise IllFormedState("body context fails the demand grammar")
        if not is_answer_frames(between):
            raise IllFormedState("binder/argument context is not an answer context")
        if split_outer_partial(rest, split[2]) is None:
            raise IllFormedState("outer context fails the partial-answer split")
        argument = frames[arg_at].term
        return LOOKUPVAR, CKState(argument, (BodF(name, inner, between),) + rest)
    raise IllFormedState(f"control is {type(control).__name__}")


def build_step_term(s: CKState, supply: Optional[NameSupply] = None) -> Term:
    """Replay the frames as eager labeled substitutions, yielding the
    labeled-semantics image of the state.  Fresh labels come from the
    supply; images are compared modulo label renaming."""
    if supply is None:
        supply = NameSupply.for_terms((build(s),))
    fs = deque(s.frames)
    e: Term = s.control
    while fs:
        f = fs.popleft()
        if isinstance(f, ArgF):
            e = App(e, f.term)
        elif isinstance(f, BodF):
            replay = list(f.inner) + [LamF(f.binder)] + list(f.between) + [ArgF(e)]
            fs.extendleft(reversed(replay))
            e = Var(f.binder)
        else:
            depth = 0
            arg_at = None
            for i, g in enumerate(fs):
                if isinstance(g, BodF):
                    break
                if isinstance(g, LamF):
                    depth += 1
                elif depth == 0:
                    arg_at = i
                    break
                else:
                    depth -= 1
            assert arg_at is not None, "binder frame without a matching argument"
            between = tuple(fs[i] for i in range(arg_at))
            assert is_answer_frames(between), "context before the argument not an answer"
            argument = fs[arg_at].term
            label = supply.fresh(f.binder.base)
            e = subst_shared(e, f.binder, Labeled(label, argument), supply)
            remainder = list(fs)[arg_at + 1 :]
            fs = deque(list(between) + remainder)
    return e


def eval_ck(t: Term, fuel: int):
    """Drive the transition system; the answer is the built final state."""
    if not is_closed(t):
        raise OpenTermError("eval_ck requires a closed term")
    if fuel < 0:
        raise ValueError("fuel must be >= 0")
    supply = NameSupply.for_term(t)
    state = inject_ck(hygienize(t, supply))
    steps = 0
    while True:
        r = step_ck(state, supply)
        if r is None:
            return Done(build(state), steps)
        if steps == fuel:
            return Timeout(steps)
        state = r[1]
        steps += 1


__all__ = [
    "BETA_NEED_CK",
    "CKState",
    "DESCEND_LAM",
    "IllFormedState",
    "LOOKUPVAR",
    "PUSHARG",
    "balance",
    "build",
    "buildF",
    "build_step_term",
    "classify_frames",
    "eval_ck",
    "inject_ck",
    "is_demand_frames",
    "is_final",
    "step_ck",
    "subst_frames",
]
