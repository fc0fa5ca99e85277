"""Explicit high-transitivity witnesses inside H_inf.

trim:                  sigma_s^(inf) -> an involution (id, s) * prod_{m in J} (z^m, z^m s)
                       with J free of indices in [1, n], by repeated
                       sigma <- z^p sigma z^-p sigma, p = least positive index.
realize_transposition: conjugating a trimmed involution by f gives an element
                       acting on the radius-n ball as the transposition (f, fs).
witness:               route tokens along a BFS spanning tree of the ball; each
                       tree-edge swap is one realizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from forge.ambient import Point
from forge.construction import Certificate, ConstructionError, sigma_name
from forge.limit import HorizonError, LimitInvolution, limit_apply
from forge.perm import indexed_apply
from forge.words import SLP, Program, inverse_word


@dataclass
class TrimmedInvolution:
    cert: Certificate
    s: str
    n: int
    shifts: tuple
    slp: SLP
    _memo: dict = field(default_factory=dict, repr=False)

    def contains(self, m: int, level: int | None = None) -> bool:
        """Membership of index m in J after `level` trimming steps (default: all)."""
        level = len(self.shifts) if level is None else level
        if m < 0:
            return False
        if level == 0:
            return m in LimitInvolution(self.cert, self.s)
        key = (m, level)
        r = self._memo.get(key)
        if r is None:
            p = self.shifts[level - 1]
            r = self.contains(m, level - 1) != self.contains(m - p, level - 1)
            self._memo[key] = r
        return r

    def apply(self, x: Point) -> Point:
        return indexed_apply(self.cert.ambient, self.s, self.contains, x)


def trim(cert: Certificate, s: str, n: int) -> TrimmedInvolution:
    if s not in cert.ambient.values:
        raise ValueError(f"unknown generator {s!r}")
    b = Program()
    zi = b.letter("z")
    node = b.letter(sigma_name(s))
    t = TrimmedInvolution(cert, s, n, (), None)
    last = 0
    while True:
        try:
            p = next((m for m in range(1, n + 1) if t.contains(m)), None)
        except HorizonError as exc:
            raise HorizonError(f"trim({s}, {n}) needs a deeper certificate: {exc}") from None
        if p is None:
            break
        if p <= last:
            raise ConstructionError(f"trim did not advance: least positive index {p} after {last}")
        if s == "z" and p % 2:
            raise ConstructionError("odd index in a z-family")
        last = p
        node = b.mul(b.conj(b.power(zi, p), node), node)
        t.shifts = t.shifts + (p,)
        t._memo.clear()
    t.slp = b.slp(node)
    return t


@dataclass
class TranspositionRealizer:
    s: str
    f: Point
    n: int
    m: int
    slp: SLP


class TransitivityEngine:
    """Caches trims and realizers for one certificate."""

    def __init__(self, cert: Certificate):
        self.cert = cert
        self.amb = cert.ambient
        self._trims: dict = {}
        self._realizers: dict = {}

    def trim(self, s: str, n: int) -> TrimmedInvolution:
        key = (s, n)
        if key not in self._trims:
            self._trims[key] = trim(self.cert, s, n)
        return self._trims[key]

    def realize_transposition(self, s: str, f: Point, n: int) -> TranspositionRealizer:
        key = (s, f, n)
        if key in self._realizers:
            return self._realizers[key]
        amb = self.amb
        ball = amb.ball(n)
        fs = amb.mul(f, amb.values[s])
        if f not in ball or fs not in ball:
            raise ValueError("f and f.s must both lie in the radius-n ball")
        m = n + amb.norm(f) + 1
        t = self.trim(s, m)
        b = Program()
        geo = ball.geodesics[f]
        root = b.mul(b.word(geo), b.mul(b.embed(t.slp), b.word(inverse_word(geo))))
        slp = b.slp(root)
        for x in ball.members:
            want = fs if x == f else f if x == fs else x
            got = limit_apply(self.cert, slp, x).point
            if got != want:
                raise ConstructionError(
                    f"realizer for ({amb.format_point(f)}, {amb.format_point(fs)}) sends "
                    f"{amb.format_point(x)} to {amb.format_point(got)}"
                )
        r = TranspositionRealizer(s, f, n, m, slp)
        self._realizers[key] = r
        return r

    def edge_swaps(self, sources: tuple, targets: tuple) -> tuple[int, list]:
        """Transpositions (applied in order) realizing sources[i] -> targets[i] on a ball."""
        amb = self.amb
        n = max(amb.norm(p) for p in sources + targets)
        ball = amb.ball(n)
        members = ball.members
        pi = dict(zip(sources, targets))
        free_src = [x for x in members if x not in pi]
        used = set(targets)
        free_dst = [y for y in members if y not in used]
        pi.update(zip(free_src, free_dst))

        parent, edge = {}, {}
        for v in members[1:]:
            name, e = ball.geodesics[v][-1]
            g = amb.values[name]
            if e > 0:
                p = amb.mul(v, amb.inv(g))
                edge[v] = (name, p)        # v = p.s
            else:
                p = amb.mul(v, g)
                edge[v] = (name, v)        # p = v.s
            parent[v] = p

        def path_to_root(v):
            out = [v]
            while out[-1] in parent:
                out.append(parent[out[-1]])
            return out

        pos = {x: x for x in members}        # token -> position
        occ = {x: x for x in members}        # position -> token
        inv_pi = {y: x for x, y in pi.items()}
        swaps = []
        for v in reversed(members[1:]):
            token = inv_pi[v]
            u = pos[token]
            if u == v:
                continue
            up, down = path_to_root(u), path_to_root(v)
            common = set(up) & set(down)
            lca = next(w for w in up if w in common)
            path = up[:up.index(lca) + 1] + down[:down.index(lca)][::-1]
            for a, b in zip(path, path[1:]):
                child = a if parent.get(a) == b else b
                swaps.append((edge[child], a, b))
                ta, tb = occ[a], occ[b]
                occ[a], occ[b] = tb, ta
                pos[ta], pos[tb] = b, a
        if any(pos[x] != pi[x] for x in members):
            raise ConstructionError("token routing left a token misplaced")
        return n, swaps

    def witness(self, sources, targets) -> Witness:
        amb = self.amb
        sources, targets = tuple(sources), tuple(targets)
        if len(sources) != len(targets) or not sources:
            raise ValueError("tuples must be non-empty and of equal length")
        if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
            raise ValueError("tuple entries must be distinct")
        n, swaps = self.edge_swaps(sources, targets)
        b = Program()
        items = []
        for (s, f), _, _ in reversed(swaps):
            items.append(b.embed(self.realize_transposition(s, f, n).slp))
        slp = b.slp(b.product(items))
        for x, y in zip(sources, targets):
            got = limit_apply(self.cert, slp, x).point
            if got != y:
                raise ConstructionError(
                    f"witness sends {amb.format_point(x)} to {amb.format_point(got)}, "
                    f"expected {amb.format_point(y)}"
                )
        return Witness(sources, targets, n, len(swaps), slp)


@dataclass
class Witness:
    sources: tuple
    targets: tuple
    radius: int
    transpositions: int
    slp: SLP


def realize_transposition(cert: Certificate, s: str, f: Point, n: int) -> TranspositionRealizer:
    return TransitivityEngine(cert).realize_transposition(s, f, n)


def witness(cert: Certificate, sources, targets) -> Witness:
    return TransitivityEngine(cert).witness(sources, targets)
