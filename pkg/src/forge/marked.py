"""Exact arithmetic in <G, Sym_f(G)> and marked Cayley balls.

An element is stored as a pair (perm, trans) acting by x -> perm(trans.x).
Both parts are canonical, so the pair is a hashable normal form and equality
of pairs is equality of permutations of G.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from forge.ambient import Ambient, Point
from forge.perm import FinPerm
from forge.words import SLP, Word, evaluate_element, format_word


class BudgetExceeded(RuntimeError):
    """A configured resource cap was hit; the check is inconclusive."""


class AugElement(NamedTuple):
    perm: FinPerm
    trans: Point


class AugGroup:
    def __init__(self, ambient: Ambient):
        self.ambient = ambient
        self.one = AugElement(FinPerm.identity(), ambient.id)

    def translation(self, g: Point) -> AugElement:
        return AugElement(FinPerm.identity(), g)

    def permutation(self, p: FinPerm) -> AugElement:
        return AugElement(p, self.ambient.id)

    def mul(self, u: AugElement, v: AugElement) -> AugElement:
        amb = self.ambient
        perm = u.perm.compose(v.perm.conjugate(amb, u.trans))
        return AugElement(perm, amb.mul(u.trans, v.trans))

    def inv(self, u: AugElement) -> AugElement:
        amb = self.ambient
        ti = amb.inv(u.trans)
        return AugElement(u.perm.inverse().conjugate(amb, ti), ti)

    def apply(self, u: AugElement, x: Point) -> Point:
        return u.perm(self.ambient.mul(u.trans, x))

    def is_identity(self, u: AugElement) -> bool:
        return not u.perm and u.trans == self.ambient.id

    def moved_point(self, u: AugElement) -> Point | None:
        if u.trans == self.ambient.id:
            return min(u.perm.support) if u.perm else None
        # below every support point the element is a pure translation
        low = min((p.z for p in u.perm.support), default=0) - abs(u.trans.z) - 1
        return self.ambient.zpow(low)


def aug_multiply(group: AugGroup, u: AugElement, v: AugElement) -> AugElement:
    return group.mul(u, v)


@dataclass
class MarkedAlphabet:
    """Ordered letters with stage values; S letters first, then sigma letters."""

    letters: tuple
    values: dict
    label: str = ""

    def __post_init__(self):
        self.letters = tuple(self.letters)
        missing = [a for a in self.letters if a not in self.values]
        if missing:
            raise ValueError(f"unassigned letters {missing}")
        self._inverses: dict = {}

    def value(self, name: str) -> AugElement:
        try:
            return self.values[name]
        except KeyError:
            raise ValueError(f"unassigned letter {name!r}") from None

    def directions(self, group: AugGroup) -> list[tuple[tuple[str, int], AugElement]]:
        """Letters then inverses, each with its element value."""
        out = [((a, 1), self.values[a]) for a in self.letters]
        for a in self.letters:
            if a not in self._inverses:
                self._inverses[a] = group.inv(self.values[a])
            out.append(((a, -1), self._inverses[a]))
        return out


def aug_evaluate_word(group: AugGroup, alphabet: MarkedAlphabet, w: Word | SLP) -> AugElement:
    return evaluate_element(w, alphabet.value, group.mul, group.inv, group.one)


@dataclass
class MarkedBall:
    radius: int
    vertices: list
    index: dict
    depth: list
    geodesics: list
    edges: dict = field(default_factory=dict)  # (vertex, (letter, exp)) -> vertex | None

    def __len__(self):
        return len(self.vertices)

    def to_dot(self, letters, name: str = "ball") -> str:
        lines = [f"digraph {name} {{"]
        for i, w in enumerate(self.geodesics):
            lines.append(f'  v{i} [label="{format_word(w)}"];')
        for (i, (a, e)), j in sorted(self.edges.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            if e == 1 and j is not None and a in letters:
                lines.append(f'  v{i} -> v{j} [label="{a}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def marked_ball(group: AugGroup, alphabet: MarkedAlphabet, k: int, cap: int | None = None,
                with_edges: bool = True) -> MarkedBall:
    """BFS ball of radius k in the Cayley graph of (H, alphabet)."""
    if k < 0:
        raise ValueError("radius must be non-negative")
    dirs = alphabet.directions(group)
    one = group.one
    verts, depth, geo = [one], [0], [()]
    index = {one: 0}
    edges = {}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        d = depth[i]
        g = verts[i]
        for letter, v in dirs:
            h = group.mul(g, v)
            j = index.get(h)
            if j is None:
                if d == k:
                    if with_edges:
                        edges[i, letter] = None
                    continue
                j = len(verts)
                if cap is not None and j >= cap:
                    raise BudgetExceeded(f"marked ball of radius {k} exceeds {cap} vertices")
                index[h] = j
                verts.append(h)
                depth.append(d + 1)
                geo.append(geo[i] + (letter,))
                queue.append(j)
            if with_edges:
                edges[i, letter] = j
    return MarkedBall(k, verts, index, depth, geo, edges)


@dataclass
class IsoResult:
    ok: bool
    radius: int
    vertices: int
    witness: tuple | None = None  # (u, v): equal on exactly one side

    def __bool__(self):
        return self.ok


def marked_ball_iso(group_a: AugGroup, alph_a: MarkedAlphabet, group_b: AugGroup,
                    alph_b: MarkedAlphabet, k: int, cap: int | None = None,
                    on_vertex=None) -> IsoResult:
    """Synchronized BFS comparison of the radius-k marked balls.

    Both balls are explored in lockstep with a shared vertex numbering; the
    balls are isomorphic as marked balls iff every expansion step agrees on
    whether the product is new and, if not, which vertex it equals.
    `on_vertex(element_a)` is called on every admitted A-vertex.
    """
    if alph_a.letters != alph_b.letters:
        raise ValueError("alphabets must share letter names and order")
    dirs_a = alph_a.directions(group_a)
    dirs_b = alph_b.directions(group_b)
    va, vb = [group_a.one], [group_b.one]
    ia, ib = {group_a.one: 0}, {group_b.one: 0}
    depth, geo = [0], [()]
    if on_vertex is not None:
        on_vertex(group_a.one)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        d = depth[i]
        if d == k:
            continue
        ga, gb = va[i], vb[i]
        for (letter, xa), (_, xb) in zip(dirs_a, dirs_b):
            ha = group_a.mul(ga, xa)
            hb = group_b.mul(gb, xb)
            ja, jb = ia.get(ha), ib.get(hb)
            if ja is None and jb is None:
                j = len(va)
                if cap is not None and j >= cap:
                    raise BudgetExceeded(f"ball comparison at radius {k} exceeds {cap} vertices")
                ia[ha], ib[hb] = j, j
                va.append(ha)
                vb.append(hb)
                depth.append(d + 1)
                geo.append(geo[i] + (letter,))
                queue.append(j)
                if on_vertex is not None:
                    on_vertex(ha)
            elif ja != jb:
                u = geo[i] + (letter,)
                v = geo[ja if ja is not None else jb]
                return IsoResult(False, k, len(va), (u, v))
    return IsoResult(True, k, len(va))
