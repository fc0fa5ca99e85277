"""The limit group H_inf: lazy sigma_s^(inf), point evaluation, word problem.

Every update after stage n only adds indices >= nu_(n+1), so on points of
height (z-exponent) below nu_(n+1) the limit involutions agree with the
stage-n ones. Evaluation therefore runs a word at stage n = 0, 1, ... and
accepts the first stage whose whole trajectory stays below nu_(n+1).
"""

from __future__ import annotations

from dataclasses import dataclass

from forge.ambient import Ambient, Point
from forge.construction import Certificate, is_sigma
from forge.marked import AugElement, aug_evaluate_word
from forge.perm import indexed_apply
from forge.words import SLP, Word, apply_to_point, flat_length, format_word


class HorizonError(RuntimeError):
    """The certificate is too shallow to answer the query."""


@dataclass(frozen=True)
class LimitInvolution:
    cert: Certificate
    s: str

    @property
    def horizon(self) -> int:
        """Membership of every index below this is settled."""
        return self.cert.top.nu

    def __contains__(self, m: int) -> bool:
        if m < 0:
            return False
        top = self.cert.top.sigma[self.s].indices
        if m < self.horizon or m in top:
            return m in top
        raise HorizonError(f"index {m} of sigma_{self.s} lies beyond the certified horizon {self.horizon}")

    def apply(self, x: Point) -> Point:
        return indexed_apply(self.cert.ambient, self.s, self.__contains__, x)


@dataclass(frozen=True)
class StageWord:
    """A word with its interpretation: a stage index, or None for the limit."""

    word: object
    stage: int | None

    def __str__(self):
        w = self.word.expand() if isinstance(self.word, SLP) else self.word
        where = "inf" if self.stage is None else str(self.stage)
        return f"{format_word(w)} @ {where}"


def xi_substitute(word, stage: int | None) -> StageWord:
    """Read a proxy word over P as a word over S_n (or S_inf): letters keep their names."""
    return StageWord(word, stage)


def eta(w: StageWord, n: int) -> StageWord:
    if w.stage is not None:
        raise ValueError("eta substitutes limit letters; the word is already at a stage")
    return StageWord(w.word, n)


def _stage_actor(cert: Certificate, n: int):
    amb = cert.ambient
    sig = {"S" + s: v.indices.__contains__ for s, v in cert.stages[n].sigma.items()}
    vals = amb.values
    mul, inv = amb.mul, amb.inv

    def act(name, e, x):
        f = sig.get(name)
        if f is not None:
            return indexed_apply(amb, name[1:], f, x)
        g = vals.get(name)
        if g is None:
            raise ValueError(f"unknown letter {name!r}")
        return mul(g if e > 0 else inv(g), x)
    return act


def _height(x: Point) -> int:
    return x.z


def stage_apply(cert: Certificate, w, n: int, x: Point) -> tuple[Point, int]:
    """eta_n(w).x and the max height along the trajectory."""
    return apply_to_point(w, _stage_actor(cert, n), x, _height)


@dataclass(frozen=True)
class LimitEval:
    point: Point
    stage: int
    height: int


def limit_apply(cert: Certificate, w, x: Point) -> LimitEval:
    best = None
    for n in range(cert.depth):
        y, h = stage_apply(cert, w, n, x)
        if h < cert.stages[n + 1].nu:
            return LimitEval(y, n, h)
        best = h
    need = best if best is not None else x.z
    raise HorizonError(
        f"evaluation does not stabilize within {cert.depth} stages: trajectory reaches height "
        f"{need} but the deepest certified nu is {cert.top.nu}; build more stages"
    )


def approximation_stage(cert: Certificate, w) -> int:
    """Least m whose trajectories from id and from z^nu_m both stay below nu_(m+1).

    From there on eta_m(w) agrees with w at id and at z^nu_m.
    """
    amb = cert.ambient
    for m in range(cert.depth):
        bound = cert.stages[m + 1].nu
        if (stage_apply(cert, w, m, amb.id)[1] < bound
                and stage_apply(cert, w, m, amb.zpow(cert.stages[m].nu))[1] < bound):
            return m
    raise HorizonError(f"no approximation stage within {cert.depth} stages")


def quotient_to_G(ambient: Ambient, w) -> Point:
    """Image under H_inf -> G: sigma letters die, S letters multiply."""
    if isinstance(w, SLP):
        w = w.expand()
    return ambient.evaluate((a, e) for a, e in w if not is_sigma(a))


def sound_horizon(cert: Certificate, w) -> int:
    return (flat_length(w) + 1) * cert.ambient.displacement()


def find_moved_point(cert: Certificate, w, radius: int | None = None) -> Point | None:
    """First point of the radius ball (canonical order) moved by w in H_inf."""
    radius = sound_horizon(cert, w) if radius is None else radius
    for x in cert.ambient.ball(radius).members:
        if limit_apply(cert, w, x).point != x:
            return x
    return None


class WordTooLong(RuntimeError):
    pass


@dataclass
class WordProblemResult:
    verdict: str  # "trivial" | "nontrivial" | "undecided"
    stage: int | None
    element: AugElement | None = None
    quotient: Point | None = None
    moved_point: Point | None = None

    @property
    def trivial(self) -> bool:
        return self.verdict == "trivial"

    def to_json(self, ambient: Ambient) -> dict:
        out = {"verdict": self.verdict, "stage": self.stage}
        if self.quotient is not None:
            out["quotient"] = ambient.format_point(self.quotient)
        if self.moved_point is not None:
            out["moved_point"] = ambient.format_point(self.moved_point)
        return out


def reduction_stage(cert: Certificate, length: int) -> int | None:
    for st in cert.stages:
        if st.k >= length:
            return st.n
    return None


def word_problem(cert: Certificate, w, fallback: bool = False, evidence: bool = True) -> WordProblemResult:
    """Decide w = 1 in H_inf for flat length <= k_N via the marked ball of H_n."""
    amb = cert.ambient
    n = reduction_stage(cert, flat_length(w))
    q = quotient_to_G(amb, w) if not isinstance(w, SLP) or w.flat_length < 10**6 else None
    if n is None:
        if not fallback:
            raise WordTooLong(
                f"flat length {flat_length(w)} exceeds k_{cert.depth} = {cert.top.k}; "
                "rebuild the certificate with more stages"
            )
        try:
            moved = find_moved_point(cert, w)
        except HorizonError:
            moved = None
        decided = moved is not None or (q is not None and q != amb.id)
        return WordProblemResult("nontrivial" if decided else "undecided", None,
                                 quotient=q, moved_point=moved)
    v = aug_evaluate_word(cert.group, cert.alphabet(n), w)
    if cert.group.is_identity(v):
        return WordProblemResult("trivial", n, v, q)
    moved = None
    if evidence:
        try:
            moved = find_moved_point(cert, w)
        except HorizonError:
            moved = None
    return WordProblemResult("nontrivial", n, v, q, moved)
