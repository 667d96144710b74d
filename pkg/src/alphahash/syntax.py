"""Concrete syntax for terms and positions.

    term     := '\\' term | '(' term term ')' | index
    index    := DIGIT+
    position := '.' | ('D' | 'L' | 'R')+

Whitespace separates tokens and is otherwise ignored.  Indices are
decimal and capped at 2**63 - 1 (IndexOverflow above that).  Errors
carry 1-based line and column of the offending token.  Both directions
run on explicit stacks; a million binders deep is fine.
"""

from __future__ import annotations

from .errors import (
    IndexOverflow,
    PositionInvalid,
    TermSyntaxError,
    TrailingInput,
    format_steps,
)
from .terms import App, Lam, Term, Var

MAX_INDEX = 2**63 - 1

_LAM = 0
_APP0 = 1
_APP1 = 2


def parse_term(text):
    """Parse one complete term; the whole input must be consumed."""
    cur = None
    stack = []
    i = 0
    n = len(text)
    line = 1
    col = 1
    while True:
        while i < n and text[i] in " \t\r\n":
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1
        tok_line, tok_col = line, col
        if i >= n:
            tok = ""
        else:
            ch = text[i]
            if ch in "\\()":
                tok = ch
                i += 1
                col += 1
            elif ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                tok = text[i:j]
                col += j - i
                i = j
            else:
                tok = ch

        if cur is None:
            if tok == "\\":
                stack.append((_LAM, None))
            elif tok == "(":
                stack.append((_APP0, None))
            elif tok and tok[0].isdigit():
                value = int(tok)
                if value > MAX_INDEX:
                    raise IndexOverflow(
                        tok_line, tok_col, ("an index at most %d" % MAX_INDEX,), tok
                    )
                cur = Var(value)
                cur, stack = _reduce(cur, stack)
            else:
                raise TermSyntaxError(
                    tok_line, tok_col, ("a term",), tok or "end of input"
                )
        elif stack:
            if tok == ")":
                kind, fn = stack.pop()
                cur = App(fn, cur)
                cur, stack = _reduce(cur, stack)
            else:
                raise TermSyntaxError(
                    tok_line, tok_col, ("')'",), tok or "end of input"
                )
        else:
            if tok == "":
                return cur
            raise TrailingInput(tok_line, tok_col, ("end of input",), tok)


def _reduce(cur, stack):
    """Fold the finished term into pending binders and applications."""
    while stack:
        kind, payload = stack[-1]
        if kind == _LAM:
            stack.pop()
            cur = Lam(cur)
        elif kind == _APP0:
            stack[-1] = (_APP1, cur)
            return None, stack
        else:
            return cur, stack
    return cur, stack


def print_term(t):
    """Concrete syntax of a pure or decorated term (g-vars as their index)."""
    out = []
    work = [t]
    while work:
        x = work.pop()
        if type(x) is str:
            out.append(x)
            continue
        node = x.node if type(x) is Term else x
        tp = type(node)
        if tp is Var:
            out.append(str(node.index))
        elif tp is Lam:
            out.append("\\")
            work.append(node.body)
        else:
            out.append("(")
            work.append(")")
            work.append(node.arg)
            work.append(" ")
            work.append(node.fn)
    return "".join(out)


def parse_position(text):
    """'.' is the root; otherwise a run of D/L/R steps."""
    if text == ".":
        return ()
    if not text:
        raise PositionInvalid(text, "empty position text (the root is '.')")
    for ch in text:
        if ch not in "DLR":
            raise PositionInvalid(text, "step %r is not one of D, L, R" % ch)
    return tuple(text)


def print_position(position):
    return format_steps(position)
