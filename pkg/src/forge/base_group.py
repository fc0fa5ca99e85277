"""Finitely generated base groups G0 with exact normal forms.

Supported kinds, with the textual grammar used on the command line:

    cyclic:N        Z/N, elements are residues 0..N-1
    sym:N           symmetric group on 1..N, elements are image tuples
    zfree:D         Z^D, elements are integer tuples
    prod(A,B)       direct product, elements are pairs (x, y)

Every kind supplies identity/mul/inv, a canonical generating set, a word norm
over the symmetrized generators and a geodesic word for every element.
"""

from __future__ import annotations

import itertools
import string
from collections import deque
from typing import Any, Iterator

Elem = Any

GENERATOR_NAMES = [c for c in string.ascii_lowercase if c != "z"]


def generator_name(i: int) -> str:
    if i < len(GENERATOR_NAMES):
        return GENERATOR_NAMES[i]
    return f"g{i}"


class BaseGroup:
    """Common interface; subclasses override the arithmetic."""

    kind = "abstract"
    abelian = True

    def identity(self) -> Elem:
        raise NotImplementedError

    def mul(self, a: Elem, b: Elem) -> Elem:
        raise NotImplementedError

    def inv(self, a: Elem) -> Elem:
        raise NotImplementedError

    def raw_generators(self) -> list[Elem]:
        """Generators before naming; identity removed, no duplicates."""
        raise NotImplementedError

    def order(self) -> int | None:
        return None

    def elements(self) -> Iterator[Elem]:
        raise ValueError(f"{self.spec} is infinite")

    def validate(self, a: Elem) -> None:
        raise NotImplementedError

    def norm(self, a: Elem) -> int:
        raise NotImplementedError

    def geodesic(self, a: Elem) -> list[tuple[int, int]]:
        """Word of length norm(a) as (generator index, +-1) pairs."""
        raise NotImplementedError

    @property
    def spec(self) -> str:
        raise NotImplementedError

    def displacement(self) -> int:
        """Max norm of x^-1 s x over generators s and elements x (1 if abelian)."""
        return 1

    def generators(self) -> list[tuple[str, Elem]]:
        return [(generator_name(i), g) for i, g in enumerate(self.raw_generators())]

    def power(self, a: Elem, k: int) -> Elem:
        if k < 0:
            a, k = self.inv(a), -k
        out = self.identity()
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def __eq__(self, other):
        return isinstance(other, BaseGroup) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"BaseGroup({self.spec!r})"


class _FiniteMixin:
    """BFS norm/geodesic tables for finite groups, built on first use."""

    _table: dict | None = None

    def _bfs_table(self) -> dict:
        if self._table is None:
            gens = self.raw_generators()
            steps = [(i, 1, g) for i, g in enumerate(gens)]
            steps += [(i, -1, self.inv(g)) for i, g in enumerate(gens)]
            e = self.identity()
            table = {e: (0, None, None)}
            queue = deque([e])
            while queue:
                x = queue.popleft()
                d = table[x][0]
                for i, sign, g in steps:
                    y = self.mul(x, g)
                    if y not in table:
                        table[y] = (d + 1, x, (i, sign))
                        queue.append(y)
            self._table = table
        return self._table

    def norm(self, a):
        self.validate(a)
        return self._bfs_table()[a][0]

    def geodesic(self, a):
        self.validate(a)
        table = self._bfs_table()
        word = []
        while table[a][1] is not None:
            _, parent, letter = table[a]
            word.append(letter)
            a = parent
        return word[::-1]


class Cyclic(_FiniteMixin, BaseGroup):
    kind = "cyclic"

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"cyclic order must be >= 1, got {n}")
        self.n = n

    @property
    def spec(self):
        return f"cyclic:{self.n}"

    def identity(self):
        return 0

    def mul(self, a, b):
        return (a + b) % self.n

    def inv(self, a):
        return (-a) % self.n

    def raw_generators(self):
        return [] if self.n == 1 else [1]

    def order(self):
        return self.n

    def elements(self):
        return iter(range(self.n))

    def validate(self, a):
        if not isinstance(a, int) or isinstance(a, bool) or not 0 <= a < self.n:
            raise ValueError(f"{a!r} is not an element of {self.spec}")

    def norm(self, a):
        self.validate(a)
        return min(a, self.n - a)

    def geodesic(self, a):
        self.validate(a)
        if a <= self.n - a:
            return [(0, 1)] * a
        return [(0, -1)] * (self.n - a)


class Symmetric(_FiniteMixin, BaseGroup):
    """Sym(1..n) acting on the left: (pq)(i) = p(q(i))."""

    kind = "sym"
    abelian = False

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"symmetric degree must be >= 1, got {n}")
        self.n = n
        self.abelian = n <= 2

    @property
    def spec(self):
        return f"sym:{self.n}"

    def identity(self):
        return tuple(range(1, self.n + 1))

    def mul(self, a, b):
        return tuple(a[j - 1] for j in b)

    def inv(self, a):
        out = [0] * self.n
        for i, j in enumerate(a, start=1):
            out[j - 1] = i
        return tuple(out)

    def raw_generators(self):
        if self.n == 1:
            return []
        swap = (2, 1) + tuple(range(3, self.n + 1))
        cycle = tuple(range(2, self.n + 1)) + (1,)
        return [swap] if swap == cycle else [swap, cycle]

    def order(self):
        out = 1
        for i in range(2, self.n + 1):
            out *= i
        return out

    def elements(self):
        return iter(itertools.permutations(range(1, self.n + 1)))

    def displacement(self):
        best = 1
        for x in self.elements():
            xi = self.inv(x)
            for g in self.raw_generators():
                best = max(best, self.norm(self.mul(xi, self.mul(g, x))))
        return best

    def validate(self, a):
        if not isinstance(a, tuple) or sorted(a) != list(range(1, self.n + 1)):
            raise ValueError(f"{a!r} is not an element of {self.spec}")


class FreeAbelian(BaseGroup):
    kind = "zfree"

    def __init__(self, d: int):
        if d < 1:
            raise ValueError(f"free abelian rank must be >= 1, got {d}")
        self.d = d

    @property
    def spec(self):
        return f"zfree:{self.d}"

    def identity(self):
        return (0,) * self.d

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def raw_generators(self):
        return [tuple(int(i == j) for j in range(self.d)) for i in range(self.d)]

    def validate(self, a):
        if not isinstance(a, tuple) or len(a) != self.d or not all(isinstance(x, int) for x in a):
            raise ValueError(f"{a!r} is not an element of {self.spec}")

    def norm(self, a):
        self.validate(a)
        return sum(abs(x) for x in a)

    def geodesic(self, a):
        self.validate(a)
        word = []
        for i, x in enumerate(a):
            word += [(i, 1 if x > 0 else -1)] * abs(x)
        return word


class Product(BaseGroup):
    kind = "prod"

    def __init__(self, left: BaseGroup, right: BaseGroup):
        self.left = left
        self.right = right
        self.abelian = left.abelian and right.abelian

    @property
    def spec(self):
        return f"prod({self.left.spec},{self.right.spec})"

    def identity(self):
        return (self.left.identity(), self.right.identity())

    def mul(self, a, b):
        return (self.left.mul(a[0], b[0]), self.right.mul(a[1], b[1]))

    def inv(self, a):
        return (self.left.inv(a[0]), self.right.inv(a[1]))

    def raw_generators(self):
        e1, e2 = self.left.identity(), self.right.identity()
        gens = [(g, e2) for g in self.left.raw_generators()]
        gens += [(e1, g) for g in self.right.raw_generators()]
        return gens

    def order(self):
        a, b = self.left.order(), self.right.order()
        return None if a is None or b is None else a * b

    def elements(self):
        return iter(itertools.product(self.left.elements(), self.right.elements()))

    def validate(self, a):
        if not isinstance(a, tuple) or len(a) != 2:
            raise ValueError(f"{a!r} is not an element of {self.spec}")
        self.left.validate(a[0])
        self.right.validate(a[1])

    def displacement(self):
        return max(self.left.displacement(), self.right.displacement())

    def norm(self, a):
        self.validate(a)
        return self.left.norm(a[0]) + self.right.norm(a[1])

    def geodesic(self, a):
        self.validate(a)
        offset = len(self.left.raw_generators())
        word = list(self.left.geodesic(a[0]))
        word += [(i + offset, e) for i, e in self.right.geodesic(a[1])]
        return word


def parse_base(text: str) -> BaseGroup:
    """Parse `cyclic:N`, `sym:N`, `zfree:D` or `prod(A,B)`."""
    text = text.strip()
    group, rest = _parse(text, 0)
    if rest != len(text):
        raise ValueError(f"trailing characters in base spec {text!r}")
    return group


def _parse(text: str, i: int) -> tuple[BaseGroup, int]:
    for prefix in ("prod(", "direct("):
        if text.startswith(prefix, i):
            left, i = _parse(text, i + len(prefix))
            if i >= len(text) or text[i] != ",":
                raise ValueError(f"expected ',' in base spec {text!r}")
            right, i = _parse(text, _skip_ws(text, i + 1))
            if i >= len(text) or text[i] != ")":
                raise ValueError(f"expected ')' in base spec {text!r}")
            return Product(left, right), i + 1
    for kind, cls in (("cyclic:", Cyclic), ("sym:", Symmetric), ("symmetric:", Symmetric),
                      ("zfree:", FreeAbelian), ("free-abelian:", FreeAbelian)):
        if text.startswith(kind, i):
            j = i + len(kind)
            k = j
            while k < len(text) and text[k].isdigit():
                k += 1
            if k == j:
                raise ValueError(f"missing integer parameter in base spec {text!r}")
            return cls(int(text[j:k])), k
    raise ValueError(f"unknown base spec {text[i:]!r}; expected cyclic:N, sym:N, zfree:D or prod(A,B)")


def _skip_ws(text: str, i: int) -> int:
    while i < len(text) and text[i] == " ":
        i += 1
    return i


# Thin functional aliases.

def base_identity(group: BaseGroup) -> Elem:
    return group.identity()


def base_multiply(group: BaseGroup, a: Elem, b: Elem) -> Elem:
    group.validate(a)
    group.validate(b)
    return group.mul(a, b)


def base_generators(group: BaseGroup) -> list[tuple[str, Elem]]:
    return group.generators()
