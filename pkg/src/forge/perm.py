"""Finitely supported permutations of G and indexed involution families.

An `IndexedInvolution` for a letter s encodes the product of disjoint
transpositions

    s in S0:  prod_{m in I} (z^m, z^m s)
    s = z:    prod_{m in I} (z^m, z^(m+1)),   all m even

as the bare index set I. Conjugating by z^t shifts I by t, so the commutator
update used by the construction becomes a symmetric difference of index sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from forge.ambient import Ambient, Point


class FinPerm:
    """Finite bijection of G stored without fixed points.

    Equality and hashing are by the stored mapping, which is canonical.
    Treat instances as immutable.
    """

    __slots__ = ("_map", "_key")

    def __init__(self, mapping: dict | Iterable = (), check: bool = True):
        m = {x: y for x, y in dict(mapping).items() if x != y}
        if check and set(m) != set(m.values()):
            raise ValueError("mapping is not a permutation of its support")
        self._map = m
        self._key = None

    @classmethod
    def _raw(cls, m: dict) -> FinPerm:
        p = cls.__new__(cls)
        p._map = m
        p._key = None
        return p

    @classmethod
    def transposition(cls, a: Point, b: Point) -> FinPerm:
        if a == b:
            raise ValueError("transposition needs two distinct points")
        return cls._raw({a: b, b: a})

    @classmethod
    def identity(cls) -> FinPerm:
        return cls._raw({})

    def __call__(self, x):
        return self._map.get(x, x)

    @property
    def support(self) -> frozenset:
        return frozenset(self._map)

    @property
    def mapping(self) -> dict:
        return dict(self._map)

    def items(self):
        return self._map.items()

    def __len__(self):
        return len(self._map)

    def __bool__(self):
        return bool(self._map)

    def is_identity(self) -> bool:
        return not self._map

    @property
    def key(self) -> frozenset:
        if self._key is None:
            self._key = frozenset(self._map.items())
        return self._key

    def __eq__(self, other):
        return isinstance(other, FinPerm) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def compose(self, other: FinPerm) -> FinPerm:
        """self o other: apply `other` first."""
        if not other._map:
            return self
        if not self._map:
            return other
        p, q = self._map, other._map
        out = {}
        for x in p.keys() | q.keys():
            y = q.get(x, x)
            y = p.get(y, y)
            if y != x:
                out[x] = y
        return FinPerm._raw(out)

    def inverse(self) -> FinPerm:
        return FinPerm._raw({y: x for x, y in self._map.items()})

    def conjugate(self, ambient: Ambient, g: Point) -> FinPerm:
        """x -> g.p(g^-1.x); the support moves to g.Supp(p)."""
        if g == ambient.id or not self._map:
            return self
        if ambient.base.abelian:
            gb, gz, bmul = g.base, g.z, ambient.base.mul
            return FinPerm._raw({
                Point(bmul(gb, x.base), x.z + gz): Point(bmul(gb, y.base), y.z + gz)
                for x, y in self._map.items()
            })
        mul = ambient.mul
        return FinPerm._raw({mul(g, x): mul(g, y) for x, y in self._map.items()})

    def order(self) -> int:
        from math import lcm

        seen, out = set(), 1
        for x in self._map:
            if x in seen:
                continue
            n, y = 0, x
            while True:
                seen.add(y)
                y = self._map[y]
                n += 1
                if y == x:
                    break
            out = lcm(out, n)
        return out

    def to_pairs(self, ambient: Ambient) -> list[list[str]]:
        pairs = sorted(self._map.items())
        return [[ambient.format_point(x), ambient.format_point(y)] for x, y in pairs]

    @classmethod
    def from_pairs(cls, ambient: Ambient, pairs) -> FinPerm:
        return cls({ambient.parse_point(a): ambient.parse_point(b) for a, b in pairs})

    def __repr__(self):
        return f"FinPerm({dict(sorted(self._map.items()))!r})"


def perm_compose(p: FinPerm, q: FinPerm) -> FinPerm:
    return p.compose(q)


def perm_conjugate_by_translation(ambient: Ambient, p: FinPerm, g: Point) -> FinPerm:
    return p.conjugate(ambient, g)


def pair_for(ambient: Ambient, s: str, m: int) -> tuple[Point, Point]:
    """The transposition (z^m, z^m s) indexed by m."""
    zm = ambient.zpow(m)
    return zm, ambient.mul(zm, ambient.values[s])


def check_parity(s: str, indices: Iterable[int]) -> None:
    if s == "z":
        odd = [m for m in indices if m % 2]
        if odd:
            raise ValueError(f"indices for s=z must be even, got {sorted(odd)}")


def indexed_apply(ambient: Ambient, s: str, member: Callable[[int], bool], x: Point) -> Point:
    """Image of x under the involution with index-membership predicate `member`.

    Only the index sets matter, so this also serves lazily defined families.
    """
    e = ambient.id.base
    if s == "z":
        if x.base != e:
            return x
        if x.z % 2 == 0:
            return Point(e, x.z + 1) if member(x.z) else x
        return Point(e, x.z - 1) if member(x.z - 1) else x
    sb = ambient.values[s].base
    if x.base == e:
        return Point(sb, x.z) if member(x.z) else x
    if x.base == sb:
        return Point(e, x.z) if member(x.z) else x
    return x


@dataclass(frozen=True)
class IndexedInvolution:
    s: str
    indices: frozenset

    def __post_init__(self):
        object.__setattr__(self, "indices", frozenset(self.indices))
        check_parity(self.s, self.indices)

    def __contains__(self, m: int) -> bool:
        return m in self.indices

    def shift_xor(self, shift: int) -> IndexedInvolution:
        """Index set of z^shift v z^-shift v: I symmetric-difference (I + shift)."""
        if shift <= 0:
            raise ValueError("shift must be positive")
        if self.s == "z" and shift % 2:
            raise ValueError("shift for s=z must be even")
        return IndexedInvolution(self.s, self.indices ^ {m + shift for m in self.indices})

    def disjoint_after_shift(self, shift: int) -> bool:
        return not (self.indices & {m + shift for m in self.indices})

    def to_finperm(self, ambient: Ambient) -> FinPerm:
        out = {}
        for m in self.indices:
            a, b = pair_for(ambient, self.s, m)
            out[a] = b
            out[b] = a
        return FinPerm._raw(out)

    def apply(self, ambient: Ambient, x: Point) -> Point:
        return indexed_apply(ambient, self.s, self.indices.__contains__, x)

    def support_radius(self, ambient: Ambient) -> int:
        best = 0
        for m in self.indices:
            for p in pair_for(ambient, self.s, m):
                best = max(best, ambient.norm(p))
        return best

    def to_json(self) -> dict:
        return {"s": self.s, "indices": sorted(self.indices)}

    @classmethod
    def from_json(cls, d: dict) -> IndexedInvolution:
        return cls(d["s"], frozenset(d["indices"]))


def indexed_to_finperm(ambient: Ambient, v: IndexedInvolution) -> FinPerm:
    return v.to_finperm(ambient)


def indexed_shift_xor(v: IndexedInvolution, shift: int) -> IndexedInvolution:
    return v.shift_xor(shift)
