"""Concrete syntax: parser and minimal-parenthesis printer.

Grammar (UTF-8):

    term  ::= '\\' ident '.' term | app
    app   ::= atom+                      (left associative)
    atom  ::= ident | '(' term ')'
    ident ::= [A-Za-z_][A-Za-z0-9_']*

A lambda body extends maximally to the right.  ``λ`` is a synonym for
``\\``.  ``--`` starts a comment running to end of line.  A bare ``%`` is
banned inside identifiers, but an identifier may carry a ``%N`` suffix
denoting a machine-minted name with generation index N; the printer emits
these for fresh names, so printed terms always parse back.
"""
from __future__ import annotations

from .terms import HOLE, App, Labeled, Lam, Name, Term, Var

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | set("0123456789'")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: list[tuple[str, object, int, int]] = []
        self._run()

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def _error(self, msg: str):
        raise ParseError(msg, self.line, self.col)

    def _run(self) -> None:
        text = self.text
        while self.pos < len(text):
            c = text[self.pos]
            if c in " \t\r\n":
                self._advance()
                continue
            if c == "-" and text.startswith("--", self.pos):
                while self.pos < len(text) and text[self.pos] != "\n":
                    self._advance()
                continue
            line, col = self.line, self.col
            if c in "\\λ":
                self.tokens.append(("lambda", None, line, col))
                self._advance()
            elif c == ".":
                self.tokens.append(("dot", None, line, col))
                self._advance()
            elif c == "(":
                self.tokens.append(("lparen", None, line, col))
                self._advance()
            elif c == ")":
                self.tokens.append(("rparen", None, line, col))
                self._advance()
            elif c == "[" and text.startswith("[]", self.pos):
                # the distinguished hole of a one-hole context; printed
                # contexts parse back, though holes never occur in programs
                self.tokens.append(("hole", None, line, col))
                self._advance(2)
            elif c in _IDENT_START:
                start = self.pos
                while self.pos < len(text) and text[self.pos] in _IDENT_CONT:
                    self._advance()
                base = text[start : self.pos]
                index = 0
                if self.pos < len(text) and text[self.pos] == "%":
                    self._advance()
                    dstart = self.pos
                    while self.pos < len(text) and text[self.pos].isdigit():
                        self._advance()
                    if dstart == self.pos:
                        self._error("expected digits after '%'")
                    index = int(text[dstart : self.pos])
                self.tokens.append(("ident", Name(base, index), line, col))
            else:
                self._error(f"unexpected character {c!r}")
        self.tokens.append(("eof", None, self.line, self.col))


class _Group:
    """One term-in-progress: leading binders, then application atoms."""

    __slots__ = ("binders", "atoms", "open_tok")

    def __init__(self, open_tok=None):
        self.binders: list[Name] = []
        self.atoms: list[Term] = []
        self.open_tok = open_tok  # the '(' token for paren groups, else None

    def close(self, tok) -> Term:
        if not self.atoms:
            raise ParseError(f"expected a term, found {tok[0]}", tok[2], tok[3])
        t = self.atoms[0]
        for a in self.atoms[1:]:
            t = App(t, a)
        for b in reversed(self.binders):
            t = Lam(b, t)
        return t


def parse(text: str) -> Term:
    """Explicit-stack parser; machine output can nest thousands deep."""
    tokens = _Lexer(text).tokens
    at = 0
    stack = [_Group()]
    while True:
        kind, value, line, col = tokens[at]
        at += 1
        if kind == "lambda":
            if stack[-1].atoms:
                raise ParseError(
                    "an abstraction here must be parenthesized", line, col
                )
            name_tok = tokens[at]
            at += 1
            if name_tok[0] != "ident":
                raise ParseError(f"expected ident, found {name_tok[0]}", name_tok[2], name_tok[3])
            dot_tok = tokens[at]
            at += 1
            if dot_tok[0] != "dot":
                raise ParseError(f"expected dot, found {dot_tok[0]}", dot_tok[2], dot_tok[3])
            stack[-1].binders.append(name_tok[1])
        elif kind == "ident":
            stack[-1].atoms.append(Var(value))
        elif kind == "hole":
            stack[-1].atoms.append(HOLE)
        elif kind == "lparen":
            stack.append(_Group((kind, value, line, col)))
        elif kind == "rparen":
            group = stack[-1]
            if group.open_tok is None:
                raise ParseError("unexpected trailing rparen", line, col)
            stack.pop()
            stack[-1].atoms.append(group.close((kind, value, line, col)))
        elif kind == "eof":
            group = stack[-1]
            if group.open_tok is not None:
                raise ParseError("unclosed parenthesis", line, col)
            return group.close((kind, value, line, col))
        else:
            raise ParseError(f"unexpected {kind}", line, col)


# Printing contexts: TOP admits anything bare, OPER parenthesizes
# abstractions (operator position), ATOM parenthesizes abstractions and
# applications (argument position).
_TOP, _OPER, _ATOM = 0, 1, 2


def print_term(t: Term) -> str:
    out: list[str] = []
    work: list = [(t, _TOP)]
    while work:
        item = work.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        node, level = item
        if node is HOLE:
            out.append("[]")
        elif isinstance(node, Var):
            out.append(str(node.name))
        elif isinstance(node, Lam):
            if level > _TOP:
                out.append("(")
                work.append(")")
            out.append(f"\\{node.binder}.")
            work.append((node.body, _TOP))
        elif isinstance(node, App):
            if level > _OPER:
                out.append("(")
                work.append(")")
            work.append((node.arg, _ATOM))
            work.append(" ")
            work.append((node.fn, _OPER))
        elif isinstance(node, Labeled):
            out.append(f"{node.label}:(")
            work.append(")")
            work.append((node.body, _TOP))
        else:
            raise TypeError(f"cannot print {node!r}")
    return "".join(out)
