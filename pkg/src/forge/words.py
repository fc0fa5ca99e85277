"""Words and straight-line programs over named letters.

A word is a tuple of ``(letter, exp)`` pairs with ``exp`` in {+1, -1}. The
textual form is whitespace separated, e.g. ``"a z^-1 Sa Sz"``; ``x^k`` expands
to |k| copies of x or x^-1.

An SLP is a DAG of letter / product / inverse nodes with a designated root.
Products are left-acting: evaluating ``mul(u, v)`` on a point applies v first.
"""

from __future__ import annotations

import json
import re
import sys
from typing import Callable, Iterable

Word = tuple

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


def parse_word(text: str, letters: Iterable[str] | None = None) -> Word:
    allowed = set(letters) if letters is not None else None
    out = []
    for tok in text.replace(",", " ").split():
        m = re.fullmatch(r"([A-Za-z][A-Za-z0-9]*)(?:\^(-?\d+))?", tok)
        if not m:
            raise ValueError(f"bad word token {tok!r}")
        name = m.group(1)
        if allowed is not None and name not in allowed:
            raise ValueError(f"unknown letter {name!r}; alphabet is {sorted(allowed)}")
        k = int(m.group(2)) if m.group(2) is not None else 1
        out += [(name, 1 if k > 0 else -1)] * abs(k)
    return tuple(out)


def format_word(word: Word) -> str:
    if not word:
        return "1"
    return " ".join(name if e == 1 else f"{name}^-1" for name, e in word)


def inverse_word(word: Word) -> Word:
    return tuple((name, -e) for name, e in reversed(word))


def free_reduce(word: Iterable) -> Word:
    out = []
    for name, e in word:
        if out and out[-1][0] == name and out[-1][1] == -e:
            out.pop()
        else:
            out.append((name, e))
    return tuple(out)


class SLP:
    """Immutable straight-line program.

    nodes[i] is ("letter", name), ("mul", j, k) or ("inv", j) with j, k < i.
    """

    __slots__ = ("nodes", "root", "_flat")

    def __init__(self, nodes, root: int):
        nodes = tuple(tuple(n) for n in nodes)
        for i, node in enumerate(nodes):
            op = node[0]
            if op == "letter":
                if len(node) != 2:
                    raise ValueError(f"bad letter node {node}")
            elif op == "mul":
                if not (0 <= node[1] < i and 0 <= node[2] < i):
                    raise ValueError(f"node {i} references a later node")
            elif op == "inv":
                if not 0 <= node[1] < i:
                    raise ValueError(f"node {i} references a later node")
            elif op != "one":
                raise ValueError(f"unknown SLP op {op!r}")
        if not 0 <= root < len(nodes):
            raise ValueError("root out of range")
        self.nodes = nodes
        self.root = root
        self._flat = None

    def flat_lengths(self) -> list[int]:
        if self._flat is None:
            out = []
            for node in self.nodes:
                op = node[0]
                if op == "letter":
                    out.append(1)
                elif op == "one":
                    out.append(0)
                elif op == "mul":
                    out.append(out[node[1]] + out[node[2]])
                else:
                    out.append(out[node[1]])
            self._flat = out
        return self._flat

    @property
    def flat_length(self) -> int:
        return self.flat_lengths()[self.root]

    def letters(self) -> set[str]:
        return {n[1] for n in self.nodes if n[0] == "letter"}

    def expand(self, limit: int | None = None) -> Word:
        if limit is not None and self.flat_length > limit:
            raise ValueError(f"flat length {self.flat_length} exceeds limit {limit}")
        memo: dict = {}

        def go(i, sign):
            key = (i, sign)
            if key in memo:
                return memo[key]
            node = self.nodes[i]
            op = node[0]
            if op == "letter":
                w = ((node[1], sign),)
            elif op == "one":
                w = ()
            elif op == "inv":
                w = go(node[1], -sign)
            elif sign > 0:
                w = go(node[1], 1) + go(node[2], 1)
            else:
                w = go(node[2], -1) + go(node[1], -1)
            memo[key] = w
            return w

        return go(self.root, 1)

    def to_json(self) -> dict:
        nodes = []
        for node in self.nodes:
            if node[0] == "letter":
                nodes.append({"op": "letter", "name": node[1]})
            elif node[0] == "mul":
                nodes.append({"op": "mul", "args": [node[1], node[2]]})
            elif node[0] == "inv":
                nodes.append({"op": "inv", "arg": node[1]})
            else:
                nodes.append({"op": "one"})
        return {"nodes": nodes, "root": self.root}

    @classmethod
    def from_json(cls, d: dict | str) -> SLP:
        if isinstance(d, str):
            d = json.loads(d)
        nodes = []
        for n in d["nodes"]:
            if n["op"] == "letter":
                nodes.append(("letter", n["name"]))
            elif n["op"] == "mul":
                nodes.append(("mul", int(n["args"][0]), int(n["args"][1])))
            elif n["op"] == "inv":
                nodes.append(("inv", int(n["arg"])))
            elif n["op"] == "one":
                nodes.append(("one",))
            else:
                raise ValueError(f"unknown SLP op {n['op']!r}")
        return cls(nodes, int(d["root"]))

    @classmethod
    def from_word(cls, word: Word) -> SLP:
        b = Program()
        return b.slp(b.word(word))

    def __repr__(self):
        return f"SLP({len(self.nodes)} nodes, flat length {self.flat_length})"


class Program:
    """Hash-consed SLP builder; node indices stay valid as it grows."""

    def __init__(self):
        self.nodes: list = []
        self._index: dict = {}

    def _add(self, node: tuple) -> int:
        i = self._index.get(node)
        if i is None:
            i = len(self.nodes)
            self.nodes.append(node)
            self._index[node] = i
        return i

    def one(self) -> int:
        return self._add(("one",))

    def letter(self, name: str, exp: int = 1) -> int:
        i = self._add(("letter", name))
        return i if exp > 0 else self.inv(i)

    def mul(self, i: int, j: int) -> int:
        if self.nodes[i][0] == "one":
            return j
        if self.nodes[j][0] == "one":
            return i
        return self._add(("mul", i, j))

    def inv(self, i: int) -> int:
        node = self.nodes[i]
        if node[0] == "inv":
            return node[1]
        if node[0] == "one":
            return i
        return self._add(("inv", i))

    def product(self, items: list[int]) -> int:
        """Balanced product, keeps DAG depth logarithmic."""
        if not items:
            return self.one()
        items = list(items)
        while len(items) > 1:
            nxt = [self.mul(items[k], items[k + 1]) for k in range(0, len(items) - 1, 2)]
            if len(items) % 2:
                nxt.append(items[-1])
            items = nxt
        return items[0]

    def word(self, word: Word) -> int:
        return self.product([self.letter(name, e) for name, e in word])

    def power(self, i: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(i), -k)
        out, base = self.one(), i
        while k:
            if k & 1:
                out = self.mul(out, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return out

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul(g, self.mul(x, self.inv(g)))

    def embed(self, slp: SLP) -> int:
        remap = []
        for node in slp.nodes:
            op = node[0]
            if op == "letter":
                remap.append(self.letter(node[1]))
            elif op == "one":
                remap.append(self.one())
            elif op == "mul":
                remap.append(self.mul(remap[node[1]], remap[node[2]]))
            else:
                remap.append(self.inv(remap[node[1]]))
        return remap[slp.root]

    def slp(self, root: int) -> SLP:
        """Freeze the sub-DAG below `root` into a compact SLP."""
        keep: dict[int, int] = {}
        order = []
        stack = [root]
        seen = set()
        while stack:
            i = stack.pop()
            if i in seen:
                continue
            seen.add(i)
            order.append(i)
            node = self.nodes[i]
            if node[0] == "mul":
                stack += [node[1], node[2]]
            elif node[0] == "inv":
                stack.append(node[1])
        order.sort()
        nodes = []
        for i in order:
            node = self.nodes[i]
            keep[i] = len(nodes)
            if node[0] == "mul":
                nodes.append(("mul", keep[node[1]], keep[node[2]]))
            elif node[0] == "inv":
                nodes.append(("inv", keep[node[1]]))
            else:
                nodes.append(node)
        return SLP(nodes, keep[root])


def as_slp(w) -> SLP:
    return w if isinstance(w, SLP) else SLP.from_word(tuple(w))


def flat_length(w) -> int:
    return w.flat_length if isinstance(w, SLP) else len(w)


def evaluate_element(w, value: Callable[[str], object], mul: Callable, inv: Callable, identity):
    """Fold a word or SLP into a group element, memoized per SLP node."""
    if not isinstance(w, SLP):
        out = identity
        for name, e in w:
            v = value(name)
            out = mul(out, v if e > 0 else inv(v))
        return out
    vals: list = []
    for node in w.nodes:
        op = node[0]
        if op == "letter":
            vals.append(value(node[1]))
        elif op == "one":
            vals.append(identity)
        elif op == "mul":
            vals.append(mul(vals[node[1]], vals[node[2]]))
        else:
            vals.append(inv(vals[node[1]]))
    return vals[w.root]


def apply_to_point(w, act: Callable, x, height: Callable = None):
    """Act on x by a word or SLP; `act(name, exp, x)` applies one letter.

    Returns (image, max height over the trajectory) when `height` is given,
    otherwise just the image. SLP evaluation is memoized on (node, sign, x).
    """
    if not isinstance(w, SLP):
        h = height(x) if height else None
        for name, e in reversed(w):
            x = act(name, e, x)
            if height:
                h = max(h, height(x))
        return (x, h) if height else x

    nodes = w.nodes
    memo: dict = {}

    def go(i, sign, x):
        key = (i, sign, x)
        r = memo.get(key)
        if r is not None:
            return r
        node = nodes[i]
        op = node[0]
        if op == "letter":
            y = act(node[1], sign, x)
            r = (y, max(height(x), height(y)) if height else None)
        elif op == "one":
            r = (x, height(x) if height else None)
        elif op == "inv":
            r = go(node[1], -sign, x)
        else:
            first, second = (node[2], node[1]) if sign > 0 else (node[1], node[2])
            y, h1 = go(first, sign, x)
            y, h2 = go(second, sign, y)
            r = (y, max(h1, h2) if height else None)
        memo[key] = r
        return r

    y, h = go(w.root, 1, x)
    return (y, h) if height else y
