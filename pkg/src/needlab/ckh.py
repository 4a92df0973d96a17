"""Store machine realizing the natural semantics of lazy evaluation.

A state holds a control string, a frame list, and a heap.  Arguments move
to the heap under fresh names when a binder is entered; demanding a heap
variable checks its binding out (a var frame remembers the name), and the
finished value is written back, so each binding is evaluated at most
once.  The heap stays insertion-ordered for deterministic printing only.

The mapping into the labeled semantics folds the frames back into the
control and then closes the result over the heap, wrapping each resolved
binding in a label named after its heap variable.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .frames import ArgF, Frames
from .results import Done, Timeout
from .terms import (
    App,
    Labeled,
    Lam,
    Name,
    NameSupply,
    OpenTermError,
    Term,
    Var,
    hygienize,
    is_closed,
    subst,
    subterms as _subterms,
)

PUSHARG, DESCEND_LAM, LOOKUPVAR, UPDATEHEAP = (
    "pusharg",
    "descend-lam",
    "lookupvar",
    "updateheap",
)


@dataclass(frozen=True, eq=False, slots=True)
class VarF:
    name: Name


@dataclass(frozen=True, eq=False)
class CKHState:
    control: Term
    frames: Frames = ()
    heap: dict = None  # Name -> Term, insertion ordered

    def __post_init__(self):
        if self.heap is None:
            object.__setattr__(self, "heap", {})


class UnboundVariable(AssertionError):
    pass


class UnresolvableVariable(AssertionError):
    pass


def inject_ckh(t: Term) -> CKHState:
    if not is_closed(t):
        raise OpenTermError("inject_ckh requires a closed term")
    return CKHState(t, (), {})


def is_final(s: CKHState) -> bool:
    return isinstance(s.control, Lam) and not s.frames


def step_ckh(s: CKHState, supply: Optional[NameSupply] = None) -> Optional[tuple[str, CKHState]]:
    """One store-machine transition; absent iff the state is final."""
    control, frames, heap = s.control, s.frames, s.heap
    if isinstance(control, App):
        return PUSHARG, CKHState(control.fn, (ArgF(control.arg),) + frames, heap)
    if isinstance(control, Lam):
        if not frames:
            return None
        top = frames[0]
        if isinstance(top, ArgF):
            if supply is None:
                supply = NameSupply.for_terms((control, top.term))
            fresh = supply.fresh(control.binder.base)
            body = subst(control.body, control.binder, Var(fresh), supply)
            new_heap = dict(heap)
            new_heap[fresh] = top.term
            return DESCEND_LAM, CKHState(body, frames[1:], new_heap)
        new_heap = dict(heap)
        new_heap[top.name] = control
        return UPDATEHEAP, CKHState(control, frames[1:], new_heap)
    if isinstance(control, Var):
        name = control.name
        if name not in heap:
            raise UnboundVariable(f"{name} is not in the heap")
        new_heap = dict(heap)
        binding = new_heap.pop(name)
        return LOOKUPVAR, CKHState(binding, (VarF(name),) + frames, new_heap)
    raise UnboundVariable(f"control is {type(control).__name__}")


def buildL(s: CKHState) -> Term:
    """Fold frames back into the control, then close over the heap with
    labels; only reachable bindings are pulled in."""
    heap = dict(s.heap)
    term = s.control
    for f in s.frames:
        if isinstance(f, ArgF):
            term = App(term, f.term)
        else:
            if f.name in heap:
                raise UnresolvableVariable(f"{f.name} is both checked out and bound")
            heap[f.name] = term
            term = Var(f.name)
    closed: dict[Name, Term] = {}

    def heap_refs(t: Term) -> list[Name]:
        out = []
        for node in _subterms(t):
            if isinstance(node, Var) and node.name in heap and node.name not in closed:
                out.append(node.name)
        return out

    def close(t: Term) -> Term:
        """Replace heap references with labeled closed bindings; every
        reachable binding must already be in `closed`."""
        ENTER, EXIT = 0, 1
        work = [(ENTER, t)]
        results: list[Term] = []
        while work:
            phase, node = work.pop()
            if phase == ENTER:
                if isinstance(node, Var) and node.name in heap:
                    results.append(Labeled(node.name, closed[node.name]))
                elif isinstance(node, (Lam, Labeled)):
                    work.append((EXIT, node))
                    work.append((ENTER, node.body))
                elif isinstance(node, App):
                    work.append((EXIT, node))
                    work.append((ENTER, node.arg))
                    work.append((ENTER, node.fn))
                else:
                    results.append(node)
            else:
                if isinstance(node, Lam):
                    body = results.pop()
                    results.append(node if body is node.body else Lam(node.binder, body))
                elif isinstance(node, Labeled):
                    body = results.pop()
                    results.append(node if body is node.body else Labeled(node.label, body))
                else:
                    arg = results.pop()
                    fn = results.pop()
                    results.append(
                        node if fn is node.fn and arg is node.arg else App(fn, arg)
                    )
        return results[0]

    # resolve reachable bindings in dependency order, detecting cycles
    visiting: set[Name] = set()
    stack: list[Name] = heap_refs(term)
    while stack:
        name = stack[-1]
        if name in closed:
            stack.pop()
            continue
        deps = heap_refs(heap[name])
        if not deps:
            closed[name] = close(heap[name])
            visiting.discard(name)
            stack.pop()
            continue
        if name in visiting:
            cyclic = [d for d in deps if d in visiting]
            raise UnresolvableVariable(
                f"cyclic heap reference through {cyclic[0] if cyclic else name}"
            )
        visiting.add(name)
        for d in deps:
            if d in visiting:
                raise UnresolvableVariable(f"cyclic heap reference through {d}")
            stack.append(d)
    return close(term)


def eval_ckh(t: Term, fuel: int):
    """Drive the store machine; the result is the closed final control."""
    if not is_closed(t):
        raise OpenTermError("eval_ckh requires a closed term")
    if fuel < 0:
        raise ValueError("fuel must be >= 0")
    supply = NameSupply.for_term(t)
    state = inject_ckh(hygienize(t, supply))
    steps = 0
    while True:
        r = step_ckh(state, supply)
        if r is None:
            return Done(buildL(state), steps)
        if steps == fuel:
            return Timeout(steps)
        state = r[1]
        steps += 1
