"""Evaluator outcomes shared by every semantics in the package."""
from __future__ import annotations

from dataclasses import dataclass

from .terms import Term


@dataclass(frozen=True, eq=False)
class Done:
    answer: Term
    steps: int


@dataclass(frozen=True)
class Timeout:
    steps: int
