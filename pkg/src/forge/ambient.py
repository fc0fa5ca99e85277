"""The ambient group G = G0 x <z> with generating set S = S0 + {z}.

Points of G double as the set every group in this package acts on, so the
`Point` type is a plain named tuple: hashable, cheap, and ordered.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Any, NamedTuple

from forge.base_group import BaseGroup, parse_base

Word = tuple  # tuple of (letter, exp) pairs, exp = +-1


class Point(NamedTuple):
    base: Any
    z: int


@dataclass(frozen=True)
class AmbientBall:
    radius: int
    members: tuple  # BFS discovery order
    geodesics: dict  # Point -> Word over S

    def __contains__(self, p):
        return p in self.geodesics

    def __len__(self):
        return len(self.members)


class Ambient:
    def __init__(self, base: BaseGroup | str):
        if isinstance(base, str):
            base = parse_base(base)
        self.base = base
        e = base.identity()
        self.id = Point(e, 0)
        self.zgen = Point(e, 1)
        self.gens = [(name, Point(g, 0)) for name, g in base.generators()]
        self.gens.append(("z", self.zgen))
        self.letters = [name for name, _ in self.gens]
        self.values = dict(self.gens)
        self._base_names = [name for name, _ in base.generators()]
        self._balls: dict[int, AmbientBall] = {}
        self._disp: int | None = None

    @property
    def spec(self) -> str:
        return self.base.spec

    def mul(self, a: Point, b: Point) -> Point:
        return Point(self.base.mul(a.base, b.base), a.z + b.z)

    def inv(self, a: Point) -> Point:
        return Point(self.base.inv(a.base), -a.z)

    def zpow(self, k: int) -> Point:
        return Point(self.id.base, k)

    def validate(self, a: Point) -> None:
        if not isinstance(a, Point) or not isinstance(a.z, int):
            raise ValueError(f"{a!r} is not a point of {self.spec} x Z")
        self.base.validate(a.base)

    def norm(self, a: Point) -> int:
        return self.base.norm(a.base) + abs(a.z)

    def letter_value(self, name: str, exp: int = 1) -> Point:
        g = self.values[name]
        return g if exp > 0 else self.inv(g)

    def evaluate(self, word) -> Point:
        out = self.id
        for name, exp in word:
            out = self.mul(out, self.letter_value(name, exp))
        return out

    def geodesic(self, a: Point) -> Word:
        word = [(self._base_names[i], e) for i, e in self.base.geodesic(a.base)]
        word += [("z", 1 if a.z > 0 else -1)] * abs(a.z)
        return tuple(word)

    def ball(self, radius: int) -> AmbientBall:
        """Vertices of norm <= radius, BFS over S then S^-1 in generator order."""
        if radius < 0:
            raise ValueError("radius must be non-negative")
        if radius not in self._balls:
            steps = [(name, 1, g) for name, g in self.gens]
            steps += [(name, -1, self.inv(g)) for name, g in self.gens]
            geo = {self.id: ()}
            order = [self.id]
            frontier = deque([self.id])
            while frontier:
                x = frontier.popleft()
                w = geo[x]
                if len(w) == radius:
                    continue
                for name, e, g in steps:
                    y = self.mul(x, g)
                    if y not in geo:
                        geo[y] = w + ((name, e),)
                        order.append(y)
                        frontier.append(y)
            self._balls[radius] = AmbientBall(radius, tuple(order), geo)
        return self._balls[radius]

    def displacement(self) -> int:
        """Max distance between x and s.x over generators s and points x."""
        if self._disp is None:
            self._disp = self.base.displacement()
        return self._disp

    # point literal grammar: id | tok(*tok)*, tok = letter[^int]

    def parse_point(self, text: str) -> Point:
        text = text.strip()
        if text in ("id", "1", "e", ""):
            return self.id
        out = self.id
        for tok in text.split("*"):
            m = re.fullmatch(r"\s*([A-Za-z][A-Za-z0-9]*)\s*(?:\^\s*(-?\d+))?\s*", tok)
            if not m or m.group(1) not in self.values:
                raise ValueError(f"bad point literal {text!r}; letters are {self.letters}")
            k = int(m.group(2)) if m.group(2) is not None else 1
            g = self.values[m.group(1)]
            if k < 0:
                g, k = self.inv(g), -k
            for _ in range(k):
                out = self.mul(out, g)
        return out

    def format_point(self, p: Point) -> str:
        word = self.geodesic(p)
        if not word:
            return "id"
        toks = []
        for name, e in word:
            if toks and toks[-1][0] == name:
                toks[-1][1] += e
            else:
                toks.append([name, e])
        return "*".join(name if k == 1 else f"{name}^{k}" for name, k in toks)


def amb_multiply(ambient: Ambient, a: Point, b: Point) -> Point:
    ambient.validate(a)
    ambient.validate(b)
    return ambient.mul(a, b)


def amb_ball(ambient: Ambient, radius: int) -> AmbientBall:
    return ambient.ball(radius)


def amb_norm(ambient: Ambient, g: Point) -> int:
    return ambient.norm(g)
