"""Reader for instance files.

::

    # lengths and a g table for X = {a, b}, A = {p, q, r}
    X = {a, b}
    A = {p, q, r}
    lA: p -> 2, q -> 0, r -> 1
    g: (0, p) -> a, (1, p) -> b, (0, r) -> a

``lA:`` and ``g:`` lines may be repeated; entries accumulate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .polyadj import Instance, InstanceError
from .setmodel import FinSet


class InstanceFileError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class InstanceFile:
    instance: Instance
    lengths_at: dict = field(default_factory=dict)  # a -> (line, col)
    g_at: dict = field(default_factory=dict)  # (m, a) -> (line, col)


_LEX = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>->|[{}(),=:]))")


class _Line:
    def __init__(self, text: str, lineno: int):
        self.lineno = lineno
        self.toks = []
        pos = 0
        text = text.split("#", 1)[0]
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _LEX.match(text, pos)
            if not m:
                start = len(text) - len(text[pos:].lstrip())
                raise InstanceFileError(f"unexpected character {text[start]!r}", lineno, start + 1)
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind) + 1))
            pos = m.end()
        self.i = 0
        self.end_col = len(text.rstrip()) + 1

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "", self.end_col)

    def col(self) -> int:
        return self.peek()[2]

    def fail(self, message: str):
        kind, text, col = self.peek()
        found = "end of line" if kind == "end" else repr(text)
        raise InstanceFileError(f"{message} (found {found})", self.lineno, col)

    def take(self, kind: str, text: str | None = None) -> str:
        k, t, _ = self.peek()
        if k != kind or (text is not None and t != text):
            self.fail(f"expected {text or kind}")
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        k, t, _ = self.peek()
        return k == "sym" and t == text

    def done(self) -> bool:
        return self.i >= len(self.toks)


def _parse_set(ln: _Line) -> tuple[str, ...]:
    ln.take("sym", "{")
    out: list[str] = []
    if ln.at("}"):
        ln.take("sym", "}")
        return ()
    while True:
        col = ln.col()
        name = ln.take("ident")
        if name in out:
            raise InstanceFileError(f"duplicate element {name}", ln.lineno, col)
        out.append(name)
        if ln.at(","):
            ln.take("sym", ",")
            continue
        ln.take("sym", "}")
        return tuple(out)


def _entries(ln: _Line, one):
    while True:
        one()
        if ln.done():
            return
        ln.take("sym", ",")


def parse_instance(text: str) -> InstanceFile:
    sets: dict[str, tuple[str, ...]] = {}
    lengths: dict[str, int] = {}
    g: dict[tuple[int, str], str] = {}
    lengths_at: dict = {}
    g_at: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        ln = _Line(raw, lineno)
        if ln.done():
            continue
        col = ln.col()
        key = ln.take("ident")
        if key in ("X", "A"):
            if key in sets:
                raise InstanceFileError(f"{key} is declared twice", lineno, col)
            ln.take("sym", "=")
            sets[key] = _parse_set(ln)
        elif key == "lA":
            ln.take("sym", ":")

            def one_length():
                c = ln.col()
                a = ln.take("ident")
                ln.take("sym", "->")
                n = int(ln.take("num"))
                if a in lengths:
                    raise InstanceFileError(f"duplicate length for {a}", lineno, c)
                lengths[a] = n
                lengths_at[a] = (lineno, c)

            _entries(ln, one_length)
        elif key == "g":
            ln.take("sym", ":")

            def one_g():
                c = ln.col()
                ln.take("sym", "(")
                m = int(ln.take("num"))
                ln.take("sym", ",")
                a = ln.take("ident")
                ln.take("sym", ")")
                ln.take("sym", "->")
                x = ln.take("ident")
                if (m, a) in g:
                    raise InstanceFileError(f"duplicate entry g({m}, {a})", lineno, c)
                g[(m, a)] = x
                g_at[(m, a)] = (lineno, c)

            _entries(ln, one_g)
        else:
            raise InstanceFileError(f"unknown declaration {key!r}; expected X, A, lA or g", lineno, col)
        if not ln.done():
            ln.fail("unexpected trailing input")

    last = len(text.splitlines()) + 1
    for name in ("X", "A"):
        if name not in sets:
            raise InstanceFileError(f"no declaration of {name}", last, 1)
    X = FinSet(sets["X"], "X")
    A = FinSet(sets["A"], "A")
    for a, (line, col) in lengths_at.items():
        if a not in A.elements:
            raise InstanceFileError(f"length given for {a}, which is not in A", line, col)
    for (m, a), (line, col) in g_at.items():
        if a not in A.elements:
            raise InstanceFileError(f"g({m}, {a}): {a} is not in A", line, col)
        if a in lengths and m >= lengths[a]:
            raise InstanceFileError(
                f"g({m}, {a}) lies outside m < lA({a}) = {lengths[a]}", line, col
            )
        if g[(m, a)] not in X.elements:
            raise InstanceFileError(f"g({m}, {a}) = {g[(m, a)]} is not in X", line, col)
    for a in A.elements:
        if a not in lengths:
            raise InstanceFileError(f"no length given for {a}", last, 1)
        for m in range(lengths[a]):
            if (m, a) not in g:
                line, col = lengths_at[a]
                raise InstanceFileError(
                    f"g({m}, {a}) is missing (lA({a}) = {lengths[a]} is declared here)", line, col
                )
    try:
        inst = Instance(X, A, lengths, g)
    except InstanceError as exc:  # pragma: no cover - checked above
        raise InstanceFileError(str(exc), last, 1) from exc
    return InstanceFile(inst, lengths_at, g_at)


def read_instance(path) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


SAMPLE = """\
# X = {a, b}; h should send p to [a,b], q to [] and r to [a]
X = {a, b}
A = {p, q, r}
lA: p -> 2, q -> 0, r -> 1
g: (0, p) -> a, (1, p) -> b, (0, r) -> a
"""
