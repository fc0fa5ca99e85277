"""Inductive stage builder and certificates.

Stage 0 has sigma_s = (id, s) for every s in S and nu = k = 0. Each step
searches the least even nu above the previous one such that the commutator
update sigma_s <- z^nu sigma_s z^-nu sigma_s

  (i)   has disjoint halves, so every sigma_s stays an involution,
  (ii)  preserves the marked ball of every earlier stage l at radius k_l,
  (iii) satisfies f.z^nu = z^nu.(f.id) on the radius-k_n ball,

then picks k from the finiteness witness of the next prefix of Pi.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterator

from forge.ambient import Ambient
from forge.config import Config
from forge.marked import (
    AugGroup,
    BudgetExceeded,
    MarkedAlphabet,
    aug_evaluate_word,
    marked_ball,
    marked_ball_iso,
)
from forge.perm import FinPerm, IndexedInvolution
from forge.words import Word, format_word, free_reduce

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


class ConstructionError(RuntimeError):
    """A stage condition failed; the implementation (not a budget) is at fault."""


def sigma_name(s: str) -> str:
    return "S" + s


def is_sigma(name: str) -> bool:
    return name.startswith("S")


@dataclass(frozen=True)
class Stage:
    n: int
    nu: int
    k: int
    sigma: dict  # letter -> IndexedInvolution
    support_radius: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "nu": self.nu,
            "k": self.k,
            "sigma": {s: sorted(v.indices) for s, v in self.sigma.items()},
            "support_radius": self.support_radius,
        }

    @classmethod
    def from_json(cls, d: dict) -> Stage:
        sigma = {s: IndexedInvolution(s, frozenset(ix)) for s, ix in d["sigma"].items()}
        return cls(int(d["n"]), int(d["nu"]), int(d["k"]), sigma, int(d["support_radius"]))


def support_radius(ambient: Ambient, sigma: dict) -> int:
    return max((v.support_radius(ambient) for v in sigma.values()), default=0)


def initial_stage(ambient: Ambient) -> Stage:
    sigma = {s: IndexedInvolution(s, frozenset({0})) for s in ambient.letters}
    return Stage(0, 0, 0, sigma, support_radius(ambient, sigma))


def stage_alphabet(ambient: Ambient, group: AugGroup, sigma: dict, label: str = "") -> MarkedAlphabet:
    letters = list(ambient.letters) + [sigma_name(s) for s in ambient.letters]
    values = {s: group.translation(ambient.values[s]) for s in ambient.letters}
    for s in ambient.letters:
        values[sigma_name(s)] = group.permutation(sigma[s].to_finperm(ambient))
    return MarkedAlphabet(tuple(letters), values, label)


@dataclass
class Certificate:
    base: str
    stages: list
    checks: list = field(default_factory=list)
    complete: bool = True
    budgets: dict = field(default_factory=dict)
    note: str = ""

    @cached_property
    def ambient(self) -> Ambient:
        return Ambient(self.base)

    @cached_property
    def group(self) -> AugGroup:
        return AugGroup(self.ambient)

    @property
    def top(self) -> Stage:
        return self.stages[-1]

    @property
    def depth(self) -> int:
        return len(self.stages) - 1

    def alphabet(self, n: int) -> MarkedAlphabet:
        cache = self.__dict__.setdefault("_alphabets", {})
        if n not in cache:
            cache[n] = stage_alphabet(self.ambient, self.group, self.stages[n].sigma, f"stage:{n}")
        return cache[n]

    def letters(self) -> tuple:
        return self.alphabet(0).letters

    def to_json(self) -> dict:
        return {
            "version": FORMAT_VERSION,
            "base": self.base,
            "complete": self.complete,
            "budgets": self.budgets,
            "stages": [st.to_json() for st in self.stages],
            "checks": self.checks,
            "note": self.note,
        }

    @classmethod
    def from_json(cls, d: dict) -> Certificate:
        if d.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported certificate version {d.get('version')!r}")
        return cls(
            base=d["base"],
            stages=[Stage.from_json(s) for s in d["stages"]],
            checks=list(d.get("checks", [])),
            complete=bool(d.get("complete", True)),
            budgets=dict(d.get("budgets", {})),
            note=d.get("note", ""),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> Certificate:
        return cls.from_json(json.loads(Path(path).read_text()))


# -- the normal closure Pi of the sigma letters in the free group F(P) --

def proxy_symbols(s_letters) -> list[tuple[str, int]]:
    """P and P^-1 in fixed order: each letter immediately followed by its inverse."""
    letters = list(s_letters) + [sigma_name(s) for s in s_letters]
    return [(a, e) for a in letters for e in (1, -1)]


def in_pi(word: Word) -> bool:
    """Kernel membership: deleting sigma letters leaves the trivial word."""
    return not free_reduce((a, e) for a, e in word if not is_sigma(a))


def iter_pi(s_letters) -> Iterator[Word]:
    """Nontrivial reduced words of Pi in shortlex order."""
    symbols = proxy_symbols(s_letters)
    length = 1
    while True:
        # depth-first in symbol order is lexicographic within one length
        stack = [()]
        while stack:
            w = stack.pop()
            if len(w) == length:
                if in_pi(w):
                    yield w
                continue
            for sym in reversed(symbols):
                if w and w[-1][0] == sym[0] and w[-1][1] == -sym[1]:
                    continue
                stack.append(w + (sym,))
        length += 1


def enumerate_pi(s_letters, count: int) -> list[Word]:
    if count < 0:
        raise ValueError("count must be non-negative")
    out = []
    if count == 0:
        return out
    for w in iter_pi(s_letters):
        out.append(w)
        if len(out) == count:
            break
    return out


# -- stage steps --

def permutation_closure(gens: list[FinPerm], cap: int) -> int:
    """Order of the group generated by finitely supported permutations."""
    gens = [g for g in gens if g]
    one = FinPerm.identity()
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g.compose(x)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise BudgetExceeded(f"closure exceeds {cap} elements")
                    nxt.append(y)
        frontier = nxt
    return len(seen)


def finiteness_witness(group: AugGroup, alphabet: MarkedAlphabet, xs: list[Word],
                       cap: int = 200_000) -> tuple[int, int]:
    """(order of <xi(X)>, max flat length over xi(X)) at the alphabet's stage."""
    perms = []
    for w in xs:
        v = aug_evaluate_word(group, alphabet, w)
        if v.trans != group.ambient.id:
            raise ConstructionError(f"Pi-word {format_word(w)} has a nontrivial translation part")
        perms.append(v.perm)
    order = permutation_closure(perms, cap)
    return order, max((len(w) for w in xs), default=0)


def choose_k(k_prev: int, order: int, max_len: int) -> int:
    if order < 1 or max_len < 0:
        raise ValueError("order must be >= 1 and max_len >= 0")
    return max(k_prev + 1, (order + 1) * max_len)


class _Displaced(Exception):
    pass


def displacement_holds(group: AugGroup, nu: int):
    """Callback raising _Displaced when f.z^nu != z^nu.(f.id)."""
    amb = group.ambient
    znu = amb.zpow(nu)

    def check(f):
        if group.apply(f, znu) != amb.mul(znu, group.apply(f, amb.id)):
            raise _Displaced(f)
    return check


def check_candidate(cert_like, stages: list, nu: int, cap: int) -> tuple[bool, str]:
    """Run conditions (i)-(iii) for a nu candidate on top of `stages`."""
    amb, group = cert_like.ambient, cert_like.group
    cur = stages[-1]
    for v in cur.sigma.values():
        if not v.disjoint_after_shift(nu):
            return False, f"(i) shifted support of sigma_{v.s} meets the original"
    sigma = {s: v.shift_xor(nu) for s, v in cur.sigma.items()}
    cand = stage_alphabet(amb, group, sigma, "candidate")
    try:
        res = marked_ball_iso(group, cand, group, cert_like.alphabet(cur.n), cur.k, cap,
                              on_vertex=displacement_holds(group, nu))
    except _Displaced:
        return False, "(iii) displacement identity fails"
    if not res:
        return False, f"(ii) ball mismatch with stage {cur.n} at radius {cur.k}"
    for st in reversed(stages[:-1]):
        res = marked_ball_iso(group, cand, group, cert_like.alphabet(st.n), st.k, cap)
        if not res:
            return False, f"(ii) ball mismatch with stage {st.n} at radius {st.k}"
    return True, "ok"


def search_nu(cert: Certificate, config: Config) -> tuple[int, int]:
    """Least even nu > nu_n passing (i)-(iii); returns (nu, candidates tried)."""
    cur = cert.top
    nu = cur.nu + 2
    tried = 0
    while nu <= config.nu_cap:
        tried += 1
        ok, why = check_candidate(cert, cert.stages, nu, config.ball_cap)
        log.debug("stage %d candidate nu=%d: %s", cur.n + 1, nu, why)
        if ok:
            return nu, tried
        nu += 2
    raise BudgetExceeded(f"no admissible nu <= {config.nu_cap} for stage {cur.n + 1} (inconclusive)")


def next_stage(cert: Certificate, config: Config) -> Stage:
    cur = cert.top
    nu, tried = search_nu(cert, config)
    sigma = {s: v.shift_xor(nu) for s, v in cur.sigma.items()}
    amb = cert.ambient
    alph = stage_alphabet(amb, cert.group, sigma)
    xs = enumerate_pi(amb.letters, cur.n + 1)
    order, max_len = finiteness_witness(cert.group, alph, xs, config.closure_cap)
    k = choose_k(cur.k, order, max_len)
    log.info("stage %d: nu=%d (%d candidates) k=%d order=%d", cur.n + 1, nu, tried, k, order)
    return Stage(cur.n + 1, nu, k, sigma, support_radius(amb, sigma))


def build_stages(base: str, upto: int, config: Config | None = None, verify: bool = True) -> Certificate:
    """Run the induction up to stage `upto`; budget failures give an incomplete certificate."""
    config = config or Config()
    if upto < 0:
        raise ValueError("upto must be non-negative")
    amb = Ambient(base)
    cert = Certificate(amb.spec, [initial_stage(amb)], budgets=config.to_json())
    cert.__dict__["ambient"] = amb
    try:
        for _ in range(upto):
            cert.stages.append(next_stage(cert, config))
            if verify:
                cert.checks += run_checks(cert, planned_checks(cert, only_stage=cert.top.n), config)
        if verify:
            cert.checks = run_checks(cert, planned_checks(cert, only_stage=0), config) + cert.checks
    except BudgetExceeded as exc:
        cert.complete = False
        cert.note = str(exc)
        log.warning("build stopped: %s", exc)
    return cert


# -- re-checkable conditions --

def planned_checks(cert: Certificate, only_stage: int | None = None) -> list[dict]:
    plan = []
    for st in cert.stages:
        q = st.n
        if only_stage is not None and q != only_stage:
            continue
        plan.append({"kind": "involution", "stage": q})
        plan.append({"kind": "finitary", "stage": q})
        if q >= 1:
            plan.append({"kind": "monotone", "stage": q})
            for p in range(q):
                plan.append({"kind": "ball_iso", "stage": q, "against": p,
                             "radius": cert.stages[p].k})
            plan.append({"kind": "finiteness", "stage": q, "x_count": q})
            plan.append({"kind": "displacement", "stage": q, "radius": cert.stages[q - 1].k,
                         "nu": st.nu})
    return plan


def run_check(cert: Certificate, check: dict, config: Config) -> dict:
    kind, q = check["kind"], check["stage"]
    amb, group = cert.ambient, cert.group
    st = cert.stages[q]
    out = {k: v for k, v in check.items() if k not in ("ok", "detail", "seconds")}
    t0 = time.perf_counter()
    ok, detail = True, ""
    if kind == "involution":
        for s, v in st.sigma.items():
            p = v.to_finperm(amb)
            if not p.compose(p).is_identity():
                ok, detail = False, f"sigma_{s} is not an involution"
        if q == 0:
            if any(v.indices != {0} for v in st.sigma.values()) or st.nu or st.k:
                ok, detail = False, "stage 0 must be sigma_s=(id,s), nu=k=0"
        else:
            prev = cert.stages[q - 1]
            for s, v in prev.sigma.items():
                if not v.disjoint_after_shift(st.nu) or v.shift_xor(st.nu) != st.sigma[s]:
                    ok, detail = False, f"sigma_{s} is not the commutator update of stage {q - 1}"
        if st.support_radius != support_radius(amb, st.sigma):
            ok, detail = False, "support_radius mismatch"
    elif kind == "finitary":
        alph = cert.alphabet(q)
        for a in alph.letters:
            v = alph.values[a]
            if is_sigma(a) and v.trans != amb.id:
                ok, detail = False, f"{a} has a translation part"
        for w in enumerate_pi(amb.letters, max(q, 1) + 4):
            v = aug_evaluate_word(group, alph, w)
            if v.trans != amb.id:
                ok, detail = False, f"Pi-word {format_word(w)} is not finitely supported"
        out["pi_samples"] = max(q, 1) + 4
    elif kind == "monotone":
        prev = cert.stages[q - 1]
        if not (st.nu > prev.nu and st.k > prev.k and st.nu % 2 == 0):
            ok, detail = False, "nu/k not strictly increasing or nu odd"
    elif kind == "ball_iso":
        p = check["against"]
        if check["radius"] != cert.stages[p].k:
            ok, detail = False, "recorded radius differs from k_p"
        else:
            res = marked_ball_iso(group, cert.alphabet(q), group, cert.alphabet(p),
                                  cert.stages[p].k, config.ball_cap)
            out["vertices"] = res.vertices
            if not res:
                ok = False
                detail = "words " + " / ".join(format_word(w) for w in res.witness)
    elif kind == "finiteness":
        xs = enumerate_pi(amb.letters, check["x_count"])
        order, max_len = finiteness_witness(group, cert.alphabet(q), xs, config.closure_cap)
        out["order"], out["max_len"] = order, max_len
        want = choose_k(cert.stages[q - 1].k, order, max_len)
        if st.k != want:
            ok, detail = False, f"k={st.k} but the witness rule gives {want}"
    elif kind == "displacement":
        ball = marked_ball(group, cert.alphabet(q), check["radius"], config.ball_cap, with_edges=False)
        out["vertices"] = len(ball)
        check_f = displacement_holds(group, st.nu)
        try:
            for f in ball.vertices:
                check_f(f)
        except _Displaced:
            ok, detail = False, "f.z^nu != z^nu.(f.id) for some ball vertex"
    else:
        raise ValueError(f"unknown check kind {kind!r}")
    out["ok"] = ok
    if detail:
        out["detail"] = detail
    out["seconds"] = round(time.perf_counter() - t0, 3)
    return out


def run_checks(cert: Certificate, plan: list[dict], config: Config) -> list[dict]:
    return [run_check(cert, c, config) for c in plan]


@dataclass
class VerifyReport:
    ok: bool
    results: list
    missing: list

    def to_json(self) -> dict:
        return {"ok": self.ok, "results": self.results, "missing": self.missing}


def verify_certificate(cert: Certificate, config: Config | None = None) -> VerifyReport:
    """Replay every recorded check and every condition the stages imply."""
    config = config or Config()
    plan = planned_checks(cert)
    recorded = {_check_id(c) for c in cert.checks}
    missing = [c for c in plan if _check_id(c) not in recorded]
    todo = [c for c in cert.checks] + missing
    results = run_checks(cert, todo, config)
    for rec, res in zip(todo, results):
        for key in ("order", "max_len"):
            if key in rec and rec[key] != res.get(key):
                res["ok"] = False
                res["detail"] = f"recorded {key}={rec[key]} but replay gives {res.get(key)}"
    ok = all(r["ok"] for r in results)
    return VerifyReport(ok, results, [_check_id(c) for c in missing])


def _check_id(c: dict) -> tuple:
    return (c["kind"], c["stage"], c.get("against"), c.get("radius"), c.get("x_count"))
