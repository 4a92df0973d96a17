"""Parallel rewriting with sharing labels.

Terms may wrap any subterm in a variable label.  Reduction is by-name:
when an application is demanded, the argument is substituted for all
occurrences of the bound variable under one fresh label, argument status
notwithstanding.  When a redex sits under a label, every other copy of
that labeled subterm is contracted in the same step by a whole-program
label substitution, which is what keeps the labeling consistent: any two
subterms with the same label must be structurally identical.

Labels never block the redex search; a search that passes a label just
records it.  Copies of a shared argument must remain identical, so the
substitution used here never freshens inserted copies (contrast the
hygiene-restoring substitution of the pure calculi).
"""
from __future__ import annotations

from typing import Optional

from .results import Done, Timeout
from .terms import (
    App,
    Labeled,
    Lam,
    Name,
    NameSupply,
    OpenTermError,
    Term,
    erase,
    hygienize,
    is_closed,
    subst_shared,
    subterms,
    term_eq,
)


class NotConsistentlyLabeled(ValueError):
    pass


def is_labeled_value(t: Term) -> bool:
    while isinstance(t, Labeled):
        t = t.body
    return isinstance(t, Lam)


def is_cl(t: Term) -> bool:
    """Consistent labeling: equal labels imply structurally equal bodies."""
    bodies: dict[Name, Term] = {}
    for node in subterms(t):
        if isinstance(node, Labeled):
            prev = bodies.get(node.label)
            if prev is None:
                bodies[node.label] = node.body
            elif prev is not node.body and not term_eq(prev, node.body):
                return False
    return True


def substlab(t: Term, z: Name, s: Term) -> Term:
    """Replace the body of every z-labeled subterm with s, keeping the
    wrapper; descends under other labels, binders, and applications."""
    ENTER, EXIT = 0, 1
    work = [(ENTER, t)]
    results: list[Term] = []
    while work:
        phase, node = work.pop()
        if phase == ENTER:
            if isinstance(node, Labeled) and node.label == z:
                results.append(node if node.body is s else Labeled(z, s))
            elif isinstance(node, (Labeled, Lam)):
                work.append((EXIT, node))
                work.append((ENTER, node.body))
            elif isinstance(node, App):
                work.append((EXIT, node))
                work.append((ENTER, node.arg))
                work.append((ENTER, node.fn))
            else:
                results.append(node)
        else:
            if isinstance(node, App):
                arg = results.pop()
                fn = results.pop()
                results.append(node if fn is node.fn and arg is node.arg else App(fn, arg))
            elif isinstance(node, Lam):
                body = results.pop()
                results.append(node if body is node.body else Lam(node.binder, body))
            else:
                body = results.pop()
                results.append(node if body is node.body else Labeled(node.label, body))
    return results[0]


class _AppL:
    __slots__ = ("term",)

    def __init__(self, term: Term):
        self.term = term


class _LabL:
    __slots__ = ("label",)

    def __init__(self, label: Name):
        self.label = label


def _plug(stack: list, t: Term) -> Term:
    for f in reversed(stack):
        t = App(t, f.term) if isinstance(f, _AppL) else Labeled(f.label, t)
    return t


def step_lstep(t: Term, supply: Optional[NameSupply] = None, check: bool = True) -> Optional[Term]:
    """One parallel step; absent iff t is a (possibly labeled) value."""
    if check and not is_cl(t):
        raise NotConsistentlyLabeled("input is not consistently labeled")
    if supply is None:
        supply = NameSupply.for_term(t)
    control = t
    stack: list = []  # outermost first
    while True:
        if isinstance(control, App):
            stack.append(_AppL(control.arg))
            control = control.fn
        elif isinstance(control, Labeled):
            stack.append(_LabL(control.label))
            control = control.body
        elif isinstance(control, Lam):
            break
        else:
            raise OpenTermError("redex search reached an unbound variable")
    # peel the operator's own label stack
    while stack and isinstance(stack[-1], _LabL):
        stack.pop()  # obsolete labels, discarded by the contraction
    if not stack:
        return None  # labeled value
    app = stack.pop()
    assert isinstance(app, _AppL), "operator labels exhausted without an application"
    argument = app.term
    fresh = supply.fresh(control.binder.base)
    contractum = subst_shared(control.body, control.binder, Labeled(fresh, argument), supply)
    # nearest enclosing label, with only applications between it and the redex
    label_at = None
    for i in range(len(stack) - 1, -1, -1):
        if isinstance(stack[i], _LabL):
            label_at = i
            break
    if label_at is None:
        return _plug(stack, contractum)
    z = stack[label_at].label
    inner = _plug(stack[label_at + 1 :], contractum)
    whole = _plug(stack[:label_at], Labeled(z, inner))
    return substlab(whole, z, inner)


def eval_lstep(t: Term, fuel: int):
    """Inject an unlabeled program and iterate to a labeled value."""
    if not is_closed(t):
        raise OpenTermError("eval_lstep requires a closed term")
    if fuel < 0:
        raise ValueError("fuel must be >= 0")
    supply = NameSupply.for_term(t)
    t = hygienize(t, supply)
    steps = 0
    while True:
        if is_labeled_value(t):
            return Done(t, steps)
        if steps == fuel:
            return Timeout(steps)
        t = step_lstep(t, supply, check=False)
        steps += 1


__all__ = [
    "NotConsistentlyLabeled",
    "erase",
    "eval_lstep",
    "is_cl",
    "is_labeled_value",
    "step_lstep",
    "substlab",
]
