"""Exhaustive grammar-directed enumeration of decompositions.

This is the independent check for the frame-stack redex search: it
enumerates, straight off the context grammars and without any search
strategy, every way a term can be split as an answer or as an evaluation
context around a redex.  Distinct derivations of the same split are
collapsed by comparing rendered components, so the count measures
genuinely different decompositions.  Exponential in principle; meant for
terms of a dozen nodes or so.
"""
from __future__ import annotations

from typing import Iterator

from .frames import ArgF, BodF, Frames, LamF, context_term, is_answer_frames
from .need import Answer, NeedDecomposition, Redex
from .terms import App, Lam, Name, Term, Var, canon


def answer_splits(t: Term) -> list[tuple[Frames, Term]]:
    """All answer-grammar splits of t (at most one exists)."""
    out: list[tuple[Frames, Term]] = []
    if isinstance(t, Lam):
        out.append(((), t))
    if isinstance(t, App):
        for fn_frames, fn_value in answer_splits(t.fn):
            for body_frames, value in answer_splits(fn_value.body):
                frames = (
                    body_frames
                    + (LamF(fn_value.binder),)
                    + fn_frames
                    + (ArgF(t.arg),)
                )
                out.append((frames, value))
    return out


def _answer_holes(t: Term) -> Iterator[tuple[Frames, Term]]:
    """Answer-context paths: (frames, subterm at the hole)."""
    yield (), t
    if isinstance(t, App):
        for fn_frames, at_fn in _answer_holes(t.fn):
            if isinstance(at_fn, Lam):
                for body_frames, hole in _answer_holes(at_fn.body):
                    yield (
                        body_frames + (LamF(at_fn.binder),) + fn_frames + (ArgF(t.arg),),
                        hole,
                    )


def _outer_partial_holes(t: Term) -> Iterator[tuple[Frames, Term]]:
    yield (), t
    if isinstance(t, App):
        for a_frames, at_hole in _answer_holes(t.fn):
            for hat_frames, hole in _outer_partial_holes(at_hole):
                yield hat_frames + a_frames + (ArgF(t.arg),), hole


def _inner_partial_holes(t: Term) -> Iterator[tuple[Frames, Term]]:
    yield (), t
    for a_frames, at_hole in _answer_holes(t):
        if isinstance(at_hole, Lam):
            for chk_frames, hole in _inner_partial_holes(at_hole.body):
                yield chk_frames + (LamF(at_hole.binder),) + a_frames, hole


def eval_context_holes(t: Term) -> Iterator[tuple[Frames, Term]]:
    """Evaluation-context paths per the grammar, derivations not deduped."""
    yield (), t
    if isinstance(t, App):
        for frames, sub in eval_context_holes(t.fn):
            yield frames + (ArgF(t.arg),), sub
    for a_frames, at_hole in _answer_holes(t):
        if a_frames:
            for frames, sub in eval_context_holes(at_hole):
                yield frames + a_frames, sub
    for hat_frames, at_hat in _outer_partial_holes(t):
        if not isinstance(at_hat, App):
            continue
        op, arg = at_hat.fn, at_hat.arg
        for a1_frames, at_a1 in _answer_holes(op):
            if not isinstance(at_a1, Lam):
                continue
            binder = at_a1.binder
            for chk_frames, at_chk in _inner_partial_holes(at_a1.body):
                if not is_answer_frames(chk_frames + hat_frames):
                    continue
                for dem_frames, leaf in eval_context_holes(at_chk):
                    if not (isinstance(leaf, Var) and leaf.name == binder):
                        continue
                    bod = BodF(binder, dem_frames + chk_frames, a1_frames)
                    for frames, sub in eval_context_holes(arg):
                        yield frames + (bod,) + hat_frames, sub


def redexes_at_root(t: Term) -> Iterator[Redex]:
    """All ways t itself matches the redex pattern."""
    for hat_frames, at_hat in _outer_partial_holes(t):
        if not isinstance(at_hat, App):
            continue
        op, arg = at_hat.fn, at_hat.arg
        for a1_frames, at_a1 in _answer_holes(op):
            if not isinstance(at_a1, Lam):
                continue
            binder = at_a1.binder
            for chk_frames, at_chk in _inner_partial_holes(at_a1.body):
                if not is_answer_frames(chk_frames + hat_frames):
                    continue
                for dem_frames, leaf in eval_context_holes(at_chk):
                    if not (isinstance(leaf, Var) and leaf.name == binder):
                        continue
                    for a2_frames, value in answer_splits(arg):
                        yield Redex(
                            outer=(),
                            outer_partial=hat_frames,
                            binding=a1_frames,
                            binder=binder,
                            inner_partial=chk_frames,
                            demand=dem_frames,
                            arg_context=a2_frames,
                            value=value,
                        )


def _redex_key(outer: Frames, r: Redex):
    return (
        canon(context_term(outer)),
        canon(context_term(r.outer_partial)),
        canon(context_term(r.binding)),
        (r.binder.base, r.binder.index),
        canon(context_term(r.inner_partial)),
        canon(context_term(r.demand)),
        canon(context_term(r.arg_context)),
        canon(r.value),
    )


def enumerate_decompositions(t: Term) -> tuple[list, list]:
    """All distinct decompositions: (answer splits, redex decompositions).

    Redexes are deduped by rendering all eight components; answers by
    rendering the context and value.
    """
    answers = {}
    for frames, value in answer_splits(t):
        answers[(canon(context_term(frames)), canon(value))] = (frames, value)
    redexes = {}
    for frames, sub in eval_context_holes(t):
        for r in redexes_at_root(sub):
            full = Redex(
                outer=frames,
                outer_partial=r.outer_partial,
                binding=r.binding,
                binder=r.binder,
                inner_partial=r.inner_partial,
                demand=r.demand,
                arg_context=r.arg_context,
                value=r.value,
            )
            redexes[_redex_key(frames, full)] = full
    return list(answers.values()), list(redexes.values())


def decomposition_matches(d: NeedDecomposition, answers: list, redexes: list) -> bool:
    """Does the search result appear in the oracle's enumeration?"""
    if isinstance(d, Answer):
        key = (canon(d.context.to_term()), canon(d.value))
        return any(
            key == (canon(context_term(f)), canon(v)) for f, v in answers
        )
    key = _redex_key(d.outer, d)
    return any(key == _redex_key(r.outer, r) for r in redexes)
