"""Mixed-identity-freeness through the finitely-supported criterion.

A nontrivial element w of H_inf cannot be finitely supported: after moving
a displaced point to the identity, w' = g^-1 w g satisfies

    w'.z^nu_m = eta_m(w').z^nu_m = z^nu_m.(eta_m(w').id) != z^nu_m

for large m, so w moves points arbitrarily far out. `escape_certificate`
records those identities stage by stage; `mif_scan` runs them on random words.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field

from forge.ambient import Point
from forge.construction import Certificate, enumerate_pi, finiteness_witness, is_sigma, sigma_name
from forge.limit import (
    HorizonError,
    find_moved_point,
    limit_apply,
    sound_horizon,
    stage_apply,
    word_problem,
)
from forge.words import Word, flat_length, format_word, free_reduce, inverse_word, parse_word


class InconsistencyError(RuntimeError):
    """Two independent decision routes disagree; indicates a bug."""


@dataclass
class StageCheck:
    m: int
    nu: int
    image: str            # w'.z^nu_m in H_inf
    stage_image: str      # z^nu_m.(eta_m(w').id)
    displaced: bool       # w'.z^nu_m != z^nu_m
    approx: bool          # eta_m(w').z^nu_m == w'.z^nu_m and eta_m(w').id == w'.id
    shifted: bool         # w'.z^nu_m == z^nu_m.(eta_m(w').id)
    reach: int            # norm of the displaced point g.z^nu_m
    certified: bool       # |w'| <= k_m, so the displacement identity is certified at m


@dataclass
class EscapeReport:
    word: str
    moved_point: str
    conjugated: str
    checks: list = field(default_factory=list)
    verdict: str = "inconclusive"  # escaped | inconclusive | falsifier

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> EscapeReport:
        return cls(d["word"], d["moved_point"], d["conjugated"],
                   [StageCheck(**c) for c in d["checks"]], d["verdict"])


def _stage_check(cert: Certificate, w: Word, g: Point, m: int) -> StageCheck:
    amb = cert.ambient
    nu = cert.stages[m].nu
    znu = amb.zpow(nu)
    lim = limit_apply(cert, w, znu).point
    at_id = stage_apply(cert, w, m, amb.id)[0]
    at_nu = stage_apply(cert, w, m, znu)[0]
    lim_id = limit_apply(cert, w, amb.id).point
    shifted = amb.mul(znu, at_id)
    return StageCheck(
        m=m,
        nu=nu,
        image=amb.format_point(lim),
        stage_image=amb.format_point(shifted),
        displaced=lim != znu,
        approx=at_nu == lim and at_id == lim_id,
        shifted=lim == shifted,
        reach=amb.norm(amb.mul(g, znu)),
        certified=flat_length(w) <= cert.stages[m].k,
    )


def checkable_stages(cert: Certificate, w: Word) -> list[int]:
    """Stages m >= 1 whose far point z^nu_m has a stabilized H_inf image, deepest first."""
    out = []
    for m in range(cert.depth, 0, -1):
        try:
            limit_apply(cert, w, cert.ambient.zpow(cert.stages[m].nu))
        except HorizonError:
            continue
        out.append(m)
    return out


def escape_certificate(cert: Certificate, w: Word, stages_to_check: int = 2) -> EscapeReport:
    amb = cert.ambient
    w = tuple(w)
    wp = word_problem(cert, w, fallback=True, evidence=False)
    if wp.trivial:
        raise ValueError(f"{format_word(w)} is trivial in H_inf; nothing to certify")
    g = find_moved_point(cert, w)
    if g is None:
        raise InconsistencyError(
            f"{format_word(w)} is nontrivial by the ball reduction but moves no point "
            f"of the radius-{sound_horizon(cert, w)} ball"
        )
    geo = amb.ball(amb.norm(g)).geodesics[g]
    wc = inverse_word(geo) + w + geo
    report = EscapeReport(format_word(w), amb.format_point(g), format_word(wc))
    ms = checkable_stages(cert, wc)[:stages_to_check]
    report.checks = [_stage_check(cert, wc, g, m) for m in ms]
    report.verdict = _verdict(report.checks)
    return report


def _verdict(checks: list) -> str:
    # only stages whose displacement identity is certified for |w'| count
    valid = [c for c in checks if c.certified]
    if valid and all(c.displaced and c.approx and c.shifted for c in valid):
        return "escaped"
    if any(c.approx and not c.displaced for c in valid):
        return "falsifier"
    return "inconclusive"


def verify_escape(cert: Certificate, report: EscapeReport) -> bool:
    """Recompute every recorded stage check from the stored words."""
    amb = cert.ambient
    w = parse_word(report.conjugated)
    g = amb.parse_point(report.moved_point)
    orig = parse_word(report.word)
    if limit_apply(cert, orig, g).point == g:
        return False
    if limit_apply(cert, w, amb.id).point == amb.id:
        return False
    for c in report.checks:
        if _stage_check(cert, w, g, c.m) != c:
            return False
    return report.verdict == _verdict(report.checks)


def random_word(rng: random.Random, letters, max_flat: int) -> Word:
    symbols = [(a, e) for a in letters for e in (1, -1)]
    length = rng.randint(1, max_flat)
    out = []
    while len(out) < length:
        a, e = rng.choice(symbols)
        if out and out[-1] == (a, -e):
            continue
        out.append((a, e))
    return tuple(out)


@dataclass
class ScanSummary:
    samples: int
    max_flat: int
    seed: int
    trivial: int = 0
    escaped: int = 0
    inconclusive: int = 0
    falsifiers: int = 0
    falsifier_words: list = field(default_factory=list)
    inconclusive_words: list = field(default_factory=list)

    @property
    def conclusive_rate(self) -> float:
        nontrivial = self.samples - self.trivial
        return 1.0 if nontrivial == 0 else self.escaped / nontrivial

    def to_json(self) -> dict:
        d = asdict(self)
        d["conclusive_rate"] = round(self.conclusive_rate, 6)
        return d


def mif_scan(cert: Certificate, samples: int, max_flat: int, seed: int,
             stages_to_check: int = 2, reports: list | None = None) -> ScanSummary:
    if max_flat > cert.top.k:
        raise ValueError(f"max_flat {max_flat} exceeds k_{cert.depth} = {cert.top.k}")
    rng = random.Random(seed)
    letters = cert.letters()
    summary = ScanSummary(samples, max_flat, seed)
    for _ in range(samples):
        w = random_word(rng, letters, max_flat)
        if word_problem(cert, w, evidence=False).trivial:
            summary.trivial += 1
            continue
        rep = escape_certificate(cert, w, stages_to_check)
        if reports is not None:
            reports.append(rep)
        if rep.verdict == "escaped":
            summary.escaped += 1
        elif rep.verdict == "falsifier":
            summary.falsifiers += 1
            summary.falsifier_words.append(rep.word)
        else:
            summary.inconclusive += 1
            if len(summary.inconclusive_words) < 20:
                summary.inconclusive_words.append(rep.word)
    return summary


@dataclass
class ClosureResult:
    x_count: int
    order: int | None
    stage: int | None = None
    stage_order: int | None = None
    max_length: int = 0
    blocking_length: int | None = None

    @property
    def conclusive(self) -> bool:
        return self.order is not None

    @property
    def matches(self) -> bool:
        return self.order is not None and self.order == self.stage_order

    def to_json(self) -> dict:
        d = asdict(self)
        d["conclusive"] = self.conclusive
        d["matches"] = self.matches
        return d


def pi_closure(cert: Certificate, x_count: int, budget: int = 10_000) -> ClosureResult:
    """Order of <xi_inf(X)> by word closure with ball-certified equality."""
    xs = enumerate_pi(cert.ambient.letters, x_count)
    kmax = cert.top.k
    reps: list = [()]
    frontier: list = [()]
    longest = 0
    while frontier:
        nxt = []
        for u in frontier:
            for x in xs:
                w = free_reduce(u + x)
                need = len(w) + max(len(r) for r in reps)
                if need > kmax:
                    return ClosureResult(x_count, None, blocking_length=need, max_length=longest)
                if any(word_problem(cert, inverse_word(r) + w, evidence=False).trivial for r in reps):
                    continue
                reps.append(w)
                nxt.append(w)
                if len(reps) > budget:
                    return ClosureResult(x_count, None, blocking_length=need, max_length=longest)
        if nxt:
            longest = max(longest, max(len(w) for w in nxt))
        frontier = nxt
    n = min(x_count, cert.depth)
    stage_order, _ = finiteness_witness(cert.group, cert.alphabet(n), xs)
    return ClosureResult(x_count, len(reps), n, stage_order, longest)


def sigma_letters(cert: Certificate) -> list[str]:
    return [sigma_name(s) for s in cert.ambient.letters]


def kernel_contains_sigmas(cert: Certificate) -> bool:
    from forge.limit import quotient_to_G

    return all(quotient_to_G(cert.ambient, ((a, 1),)) == cert.ambient.id
               for a in cert.letters() if is_sigma(a))
