"""Finitely presented groups: parsing and Todd-Coxeter coset enumeration.

The text grammar is

    gens: <name>+ ; rels: <word> (, <word>)*

where a word is a product of ``name``, ``name^k`` (k may be negative),
parenthesized subwords with powers, and the commutator sugar ``[u,v]``
meaning u v u^-1 v^-1.  Words are stored as sequences of signed generator
indices: +(i+1) is generator i, -(i+1) its inverse.

Enumeration uses relator scanning with full path filling and union-find
coincidence handling; definitions happen in first-undefined order, so a
given presentation always produces the same coset numbering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class EnumerationOverflow(RuntimeError):
    """Raised when the coset table would exceed its budget."""

    def __init__(self, max_cosets: int):
        super().__init__(
            f"coset enumeration exceeded {max_cosets} cosets; "
            "raise the budget or the group is too large/infinite"
        )
        self.max_cosets = max_cosets


@dataclass(frozen=True)
class Presentation:
    generator_names: tuple[str, ...]
    relators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.generator_names)
        for rel in self.relators:
            for s in rel:
                if s == 0 or abs(s) > n:
                    raise ValueError(f"relator letter {s} out of range")

    @property
    def generator_count(self) -> int:
        return len(self.generator_names)


# -- lexer / parser ----------------------------------------------------------

_SYMBOLS = set(":;,()[]^-")


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in _SYMBOLS:
            tokens.append((ch, ch, line, col))
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.gen_index: dict[str, int] = {}

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind: str, value: str | None = None):
        tok = self.tokens[self.pos]
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {tok[1]!r}", tok[2], tok[3])
        self.pos += 1
        return tok

    def parse(self) -> Presentation:
        head = self.take("name")
        if head[1] != "gens":
            raise ParseError("presentation must start with 'gens:'", head[2], head[3])
        self.take(":")
        names = []
        while self.peek()[0] == "name" and self.peek()[1] != "rels":
            tok = self.take("name")
            if tok[1] in self.gen_index:
                raise ParseError(f"duplicate generator {tok[1]!r}", tok[2], tok[3])
            self.gen_index[tok[1]] = len(names)
            names.append(tok[1])
        if not names:
            tok = self.peek()
            raise ParseError("at least one generator is required", tok[2], tok[3])
        self.take(";")
        rels_kw = self.take("name")
        if rels_kw[1] != "rels":
            raise ParseError("expected 'rels:' after generators", rels_kw[2], rels_kw[3])
        self.take(":")
        relators = [self._word()]
        while self.peek()[0] == ",":
            self.take(",")
            relators.append(self._word())
        self.take("eof")
        return Presentation(tuple(names), tuple(tuple(w) for w in relators))

    def _word(self) -> list[int]:
        out = self._factor()
        while self.peek()[0] in ("name", "(", "["):
            out += self._factor()
        return out

    def _factor(self) -> list[int]:
        atom = self._atom()
        if self.peek()[0] == "^":
            self.take("^")
            sign = 1
            if self.peek()[0] == "-":
                self.take("-")
                sign = -1
            tok = self.take("int")
            k = sign * int(tok[1])
            return _word_power(atom, k)
        return atom

    def _atom(self) -> list[int]:
        tok = self.peek()
        if tok[0] == "name":
            self.take("name")
            if tok[1] not in self.gen_index:
                raise ParseError(f"unknown generator {tok[1]!r}", tok[2], tok[3])
            return [self.gen_index[tok[1]] + 1]
        if tok[0] == "(":
            self.take("(")
            w = self._word()
            self.take(")")
            return w
        if tok[0] == "[":
            self.take("[")
            u = self._word()
            self.take(",")
            v = self._word()
            self.take("]")
            return u + v + _word_inverse(u) + _word_inverse(v)
        raise ParseError(f"expected a word, found {tok[1]!r}", tok[2], tok[3])


def _word_inverse(w: list[int]) -> list[int]:
    return [-s for s in reversed(w)]


def _word_power(w: list[int], k: int) -> list[int]:
    if k == 0:
        return []
    if k < 0:
        return _word_power(_word_inverse(w), -k)
    return w * k


def parse_presentation(text: str) -> Presentation:
    return _Parser(text).parse()


def print_presentation(p: Presentation) -> str:
    """Render back to the input grammar; parse(print(p)) reproduces p."""
    words = []
    for rel in p.relators:
        parts = []
        i = 0
        while i < len(rel):
            s = rel[i]
            j = i
            while j < len(rel) and rel[j] == s:
                j += 1
            count = j - i
            name = p.generator_names[abs(s) - 1]
            exp = count if s > 0 else -count
            parts.append(name if exp == 1 else f"{name}^{exp}")
            i = j
        words.append(" ".join(parts))
    return f"gens: {' '.join(p.generator_names)} ; rels: {', '.join(words)}"


# -- Todd-Coxeter ------------------------------------------------------------


def _letters(word) -> tuple[int, ...]:
    out = []
    for s in word:
        g = abs(s) - 1
        out.append(2 * g + (1 if s < 0 else 0))
    return tuple(out)


def _reduce_cyclic(letters: tuple[int, ...]) -> tuple[int, ...]:
    stack: list[int] = []
    for l in letters:
        if stack and stack[-1] == (l ^ 1):
            stack.pop()
        else:
            stack.append(l)
    while len(stack) >= 2 and stack[0] == (stack[-1] ^ 1):
        stack = stack[1:-1]
    return tuple(stack)


class _Enumerator:
    def __init__(self, ngens: int, relators, max_cosets: int):
        self.nletters = 2 * ngens
        self.relators = relators
        self.max_cosets = max_cosets
        self.parent: list[int] = []
        self.rows: list[dict[int, int] | None] = []
        self.alloc = 0
        self._new_vertex()

    def _new_vertex(self) -> int:
        if self.alloc >= self.max_cosets:
            raise EnumerationOverflow(self.max_cosets)
        idx = self.alloc
        self.alloc += 1
        self.parent.append(idx)
        self.rows.append({})
        return idx

    def find(self, c: int) -> int:
        parent = self.parent
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def follow(self, c: int, letter: int) -> int:
        row = self.rows[c]
        t = row.get(letter)
        if t is not None:
            t2 = self.find(t)
            if t2 != t:
                row[letter] = t2
            return t2
        v = self._new_vertex()
        row[letter] = v
        self.rows[v][letter ^ 1] = c
        return v

    def unify(self, c1: int, c2: int):
        stack = [(c1, c2)]
        while stack:
            a, b = stack.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if b < a:
                a, b = b, a
            self.parent[b] = a
            dead_row = self.rows[b]
            self.rows[b] = None
            keep_row = self.rows[a]
            for letter, t in dead_row.items():
                t = self.find(t)
                cur = keep_row.get(letter)
                if cur is None:
                    keep_row[letter] = t
                    back = self.rows[t]
                    cur_back = back.get(letter ^ 1)
                    if cur_back is None:
                        back[letter ^ 1] = a
                    else:
                        stack.append((cur_back, a))
                else:
                    stack.append((cur, t))

    def scan(self, c: int, rel: tuple[int, ...]):
        idx = self.find(c)
        start = idx
        for letter in rel:
            idx = self.follow(idx, letter)
        self.unify(idx, self.find(start))

    def fill_row(self, c: int):
        row = self.rows[c]
        if len(row) == self.nletters:
            return
        for letter in range(self.nletters):
            if self.find(c) != c:
                return
            if letter not in self.rows[c]:
                self.follow(c, letter)

    def run(self):
        i = 0
        while i < self.alloc:
            if self.parent[i] == i:
                for rel in self.relators:
                    if self.parent[i] != i:
                        break
                    self.scan(i, rel)
                if self.parent[i] == i:
                    self.fill_row(i)
            i += 1

    def live(self) -> list[int]:
        return [i for i in range(self.alloc) if self.parent[i] == i]


def todd_coxeter(p: Presentation, max_cosets: int = 200_000, label: str | None = None):
    """Enumerate the cosets of the trivial subgroup.

    Returns the resulting group (the regular representation, identity coset
    first) and an evaluator mapping any word of signed generator indices to
    an element index.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    if not p.relators or all(len(r) == 0 for r in p.relators):
        raise ValueError("presentations without relators describe infinite groups")
    rels = []
    seen = set()
    for rel in p.relators:
        red = _reduce_cyclic(_letters(rel))
        if red and red not in seen:
            seen.add(red)
            rels.append(red)
    enum = _Enumerator(p.generator_count, rels, max_cosets)
    enum.run()
    live = enum.live()
    order = len(live)
    first = enum.find(0)
    ordering = [first] + [v for v in live if v != first]
    relabel = {v: i for i, v in enumerate(ordering)}
    nletters = 2 * p.generator_count
    table = np.zeros((order, nletters), dtype=np.int64)
    for v in ordering:
        row = enum.rows[v]
        if row is None or len(row) != nletters:
            raise AssertionError("incomplete coset table after enumeration")
        for letter in range(nletters):
            table[relabel[v], letter] = relabel[enum.find(row[letter])]
    # verify every relator closes at every coset
    for rel in rels:
        idx = np.arange(order)
        for letter in rel:
            idx = table[idx, letter]
        if not np.array_equal(idx, np.arange(order)):
            raise AssertionError("completed table violates a relator")

    # BFS words from the identity coset give the element <-> coset bijection
    words: list[tuple[int, ...] | None] = [None] * order
    words[0] = ()
    queue = [0]
    while queue:
        c = queue.pop(0)
        for letter in range(nletters):
            t = int(table[c, letter])
            if words[t] is None:
                words[t] = words[c] + (letter,)
                queue.append(t)
    cayley = np.zeros((order, order), dtype=np.int64)
    col = np.arange(order)
    for j in range(order):
        idx = col.copy()
        for letter in words[j]:
            idx = table[idx, letter]
        cayley[:, j] = idx

    def evaluator(word) -> int:
        idx = 0
        for letter in _letters(word):
            idx = int(table[idx, letter])
        return idx

    gen_labels = {name: int(table[0, 2 * i]) for i, name in enumerate(p.generator_names)}
    group = FiniteGroup(cayley, label or f"<{','.join(p.generator_names)}>", gen_labels)
    return group, evaluator
