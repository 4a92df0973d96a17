"""Evaluation-context frames and grammar recognizers.

A one-hole context is stored as a tuple of frames, innermost first: the
head frame is the one nearest the hole.  Three frame kinds:

    ArgF(e)            hole in operator position, argument e
    LamF(x)            hole under binder x
    BodF(x, inner, between)
                       hole in argument position of an application whose
                       operator is between[lam x. inner[x]]; `inner` is the
                       context around the demanded occurrence of x in the
                       binder's body and `between` the answer context
                       separating the binder from its argument.

Reading a pure (BodF-free) frame list inner-to-outer as a bracket word
with LamF = '(' and ArgF = ')' turns the context grammars into bracket
conditions:

    answer contexts        balanced words (each binder paired with the
                           argument frame that closes it)
    outer partials         no unmatched '(' and the word ends on an
                           unmatched ')'
    inner partials         starts with '(' and every prefix keeps at
                           least one unmatched '('

Bracket matching never crosses a BodF: a binder inside an argument can
never pair with an application outside it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .terms import HOLE, App, Lam, Name, Term, Var


class Frame:
    __slots__ = ()


@dataclass(frozen=True, eq=False, slots=True)
class ArgF(Frame):
    term: Term


@dataclass(frozen=True, eq=False, slots=True)
class LamF(Frame):
    binder: Name


@dataclass(frozen=True, eq=False, slots=True)
class BodF(Frame):
    binder: Name
    inner: tuple
    between: tuple


Frames = tuple  # tuple[Frame, ...], innermost first


def plug(frames: Frames, t: Term) -> Term:
    """Wrap t in the context the frames denote."""
    for f in frames:
        if isinstance(f, ArgF):
            t = App(t, f.term)
        elif isinstance(f, LamF):
            t = Lam(f.binder, t)
        else:
            operator = plug(f.between, Lam(f.binder, plug(f.inner, Var(f.binder))))
            t = App(operator, t)
    return t


def context_term(frames: Frames) -> Term:
    """The context as a term with a distinguished hole."""
    return plug(frames, HOLE)


def balance(frames: Frames) -> int:
    """ArgF count minus LamF count up to (excluding) the first BodF."""
    args = lams = 0
    for f in frames:
        if isinstance(f, ArgF):
            args += 1
        elif isinstance(f, LamF):
            lams += 1
        else:
            break
    return args - lams


def _pure(frames: Frames) -> bool:
    return all(not isinstance(f, BodF) for f in frames)


def _scan(frames: Frames):
    """Bracket scan of a pure frame run, inner to outer.

    Returns (free_closers, unmatched_opens): positions of ArgF frames that
    close no binder and of LamF frames that no ArgF closes.
    """
    stack: list[int] = []
    free: list[int] = []
    for i, f in enumerate(frames):
        if isinstance(f, LamF):
            stack.append(i)
        elif isinstance(f, ArgF):
            if stack:
                stack.pop()
            else:
                free.append(i)
        else:
            raise ValueError("bracket scan over a BodF")
    return free, stack


def scan_demand(frames: Frames):
    """Obligation scan of a demand-shaped frame list, inner to outer.

    A BodF stands for a nested demand application; the pending binders of
    its body context (binders awaiting arguments from further out, like
    the inner partial contexts the calculus splits off) propagate outward
    as open obligations at the BodF's position.  Each argument frame
    closes the nearest obligation or, with none open, counts as a free
    closer.  Obligations can never cross a BodF: the outer partial
    contexts that discharge them are built from binder/argument frames
    only.  Returns (valid, pending, free_count).
    """
    open_count = 0
    free = 0
    for f in frames:
        if isinstance(f, LamF):
            open_count += 1
        elif isinstance(f, ArgF):
            if open_count:
                open_count -= 1
            else:
                free += 1
        else:
            if open_count:
                return False, 0, 0
            if not is_answer_frames(f.between):
                return False, 0, 0
            ok, k, _ = scan_demand(f.inner)
            if not ok:
                return False, 0, 0
            open_count += k
    return True, open_count, free


def is_answer_frames(frames: Frames) -> bool:
    """Membership in the answer-context grammar."""
    if not _pure(frames):
        return False
    free, opens = _scan(frames)
    return not free and not opens


def is_outer_partial_frames(frames: Frames) -> bool:
    """Membership in the outer partial-answer-context grammar."""
    if not _pure(frames):
        return False
    if not frames:
        return True
    free, opens = _scan(frames)
    return not opens and bool(free) and free[-1] == len(frames) - 1


def is_inner_partial_frames(frames: Frames) -> bool:
    """Membership in the inner partial-answer-context grammar."""
    if not _pure(frames):
        return False
    if not frames:
        return True
    if not isinstance(frames[0], LamF):
        return False
    bal = 0
    for f in frames:
        bal += 1 if isinstance(f, LamF) else -1
        if bal < 1:
            return False
    return True


def split_inner_partial(frames: Frames) -> Optional[tuple[Frames, Frames, int]]:
    """Split a demand context as (eval_frames, inner_partial_frames, k).

    The inner partial part is the trailing run of binders nothing closes;
    k is the total number of obligations the context leaves open,
    counting both those binders and the pending binders of nested demand
    frames, all of which the surrounding outer partial context must close
    for the composite to remain an answer context.  Returns None if the
    context fails the demand grammar.
    """
    ok, pending, _ = scan_demand(frames)
    if not ok:
        return None
    first_open: Optional[int] = None
    stack: list[int] = []
    for i, f in enumerate(frames):
        if isinstance(f, LamF):
            stack.append(i)
        elif isinstance(f, ArgF):
            if stack:
                stack.pop()
        else:
            stack = []
    first_open = stack[0] if stack else None
    if first_open is None:
        return frames, (), pending
    suffix = frames[first_open:]
    assert is_inner_partial_frames(suffix)
    return frames[:first_open], suffix, pending


def split_outer_partial(frames: Frames, k: int) -> Optional[tuple[Frames, Frames]]:
    """Split outward frames as (outer_partial_frames, eval_frames).

    The outer partial part must consist of exactly k argument frames that
    close nothing, ending at the k-th; with k = 0 it is empty.
    """
    if k == 0:
        return ((), frames) if is_eval_frames(frames) else None
    seen = 0
    stack = 0
    for i, f in enumerate(frames):
        if isinstance(f, BodF):
            return None
        if isinstance(f, LamF):
            stack += 1
        else:
            if stack:
                stack -= 1
            else:
                seen += 1
                if seen == k:
                    rest = frames[i + 1 :]
                    if not is_eval_frames(rest):
                        return None
                    return frames[: i + 1], rest
    return None


def is_eval_frames(frames: Frames) -> bool:
    """Membership in the evaluation-context grammar: a well-formed demand
    context with no obligation left open."""
    ok, pending, _ = scan_demand(frames)
    return ok and pending == 0


def is_demand_frames(frames: Frames) -> bool:
    """Membership in the inner-partial-around-eval shapes: a well-formed
    demand context, obligations allowed."""
    ok, _, _ = scan_demand(frames)
    return ok


def is_eval_outer_frames(frames: Frames) -> bool:
    """Membership in the eval-around-outer-partial grammar (contexts that
    split as an outer partial prefix inside an evaluation context)."""
    if is_eval_frames(frames):
        return True
    stack = 0
    for i, f in enumerate(frames):
        if isinstance(f, BodF):
            return False
        if isinstance(f, LamF):
            stack += 1
        elif stack:
            stack -= 1
        elif is_eval_frames(frames[i + 1 :]):
            return True
    return False


@dataclass(frozen=True)
class ContextClasses:
    answer: bool
    outer_partial: bool
    inner_partial: bool
    eval: bool
    demand: bool
    eval_outer: bool


def classify_frames(frames: Frames) -> ContextClasses:
    """Decide membership of the context in each grammar class."""
    return ContextClasses(
        answer=is_answer_frames(frames),
        outer_partial=is_outer_partial_frames(frames),
        inner_partial=is_inner_partial_frames(frames),
        eval=is_eval_frames(frames),
        demand=is_demand_frames(frames),
        eval_outer=is_eval_outer_frames(frames),
    )


def matching_argument(frames: Frames, start: int) -> Optional[int]:
    """Position of the argument frame pairing the binder at frames[start].

    frames[start] must be a LamF; the answer-context grammar pairs it with
    the first ArgF beyond it that closes it, with everything in between a
    balanced answer context.  Matching cannot cross a BodF.
    """
    assert isinstance(frames[start], LamF)
    depth = 0
    for j in range(start + 1, len(frames)):
        f = frames[j]
        if isinstance(f, BodF):
            return None
        if isinstance(f, LamF):
            depth += 1
        else:
            if depth == 0:
                return j
            depth -= 1
    return None
