import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forge.limit import (HorizonError, LimitInvolution, WordTooLong, approximation_stage, eta,
                         find_moved_point, limit_apply, quotient_to_G, stage_apply, word_problem,
                         xi_substitute)
from forge.mif import random_word
from forge.words import parse_word
from oracles import Oracle, subset_sums


def test_sigma_at_id(c2):
    amb = c2.ambient
    assert limit_apply(c2, parse_word("Sa"), amb.id).point == amb.parse_point("a")
    assert limit_apply(c2, parse_word("Sz"), amb.id).point == amb.zgen


def test_sigma_at_nu2(c2):
    amb = c2.ambient
    z6 = amb.zpow(c2.stages[2].nu)
    r = limit_apply(c2, parse_word("Sa"), z6)
    assert r.point == amb.parse_point("a*z^6")
    # stage 1 has not yet acquired index 6
    assert stage_apply(c2, parse_word("Sa"), 1, z6)[0] == z6


def test_limit_involution_membership(c2):
    s = LimitInvolution(c2, "a")
    assert 0 in s and 2 in s and 6 in s and 8 in s
    assert 4 not in s and 1 not in s and -2 not in s
    assert 30 + 14 + 6 + 2 in s
    with pytest.raises(HorizonError):
        31 in s


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_limit_matches_subset_sum_oracle(c2, seed):
    rng = random.Random(seed)
    w = random_word(rng, c2.letters(), 6)
    amb = c2.ambient
    ball = amb.ball(4).members
    x = ball[rng.randrange(len(ball))]
    assert tuple(limit_apply(c2, w, x).point) == Oracle(c2).apply(w, tuple(x))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_three_stage_agreement(c2, seed):
    rng = random.Random(seed)
    w = random_word(rng, c2.letters(), 5)
    amb = c2.ambient
    x = amb.ball(3).members[rng.randrange(len(amb.ball(3)))]
    r = limit_apply(c2, w, x)
    for m in range(r.stage, min(r.stage + 3, c2.depth + 1)):
        assert stage_apply(c2, w, m, x)[0] == r.point


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_action_approximation(c2, seed):
    rng = random.Random(seed)
    w = random_word(rng, c2.letters(), c2.stages[2].k)
    amb = c2.ambient
    m = approximation_stage(c2, w)
    for q in (m, m + 1):
        znu = amb.zpow(c2.stages[q].nu)
        assert stage_apply(c2, w, q, amb.id)[0] == limit_apply(c2, w, amb.id).point
        assert stage_apply(c2, w, q, znu)[0] == limit_apply(c2, w, znu).point


def test_horizon_error(certs):
    shallow = certs("cyclic:2", 1)
    with pytest.raises(HorizonError):
        limit_apply(shallow, parse_word("Sa"), shallow.ambient.zpow(40))


def test_word_problem_examples(c2):
    assert word_problem(c2, parse_word("Sa Sa")).verdict == "trivial"
    r = word_problem(c2, parse_word("Sa z"))
    assert r.verdict == "nontrivial"
    assert r.moved_point == c2.ambient.id
    assert r.quotient == c2.ambient.zgen
    # z^2 Sa z^-2 Sa has index set I xor (I + 2) with I the subset sums of the nu's
    w = parse_word("z^2 Sa z^-2 Sa")
    r = word_problem(c2, w)
    assert r.verdict == "nontrivial" and r.quotient == c2.ambient.id
    amb = c2.ambient
    sums = subset_sums(st.nu for st in c2.stages[1:])
    idx = {m for m in sums ^ {m + 2 for m in sums} if m <= 8}
    assert idx == {0, 4, 6}
    moved = {(x.base, x.z) for x in amb.ball(9).members if limit_apply(c2, w, x).point != x}
    assert moved == {(b, m) for m in idx for b in (0, 1)}


def test_word_too_long(c2):
    w = parse_word("a " * (c2.top.k + 1))
    with pytest.raises(WordTooLong):
        word_problem(c2, w)
    assert word_problem(c2, w, fallback=True).verdict == "nontrivial"


def test_quotient_examples(c2):
    amb = c2.ambient
    assert quotient_to_G(amb, parse_word("Sa Sz")) == amb.id
    assert quotient_to_G(amb, parse_word("a z^2")) == amb.parse_point("a*z^2")


@given(st.lists(st.sampled_from(["a", "z", "Sa", "Sz"]), max_size=6),
       st.lists(st.sampled_from(["a", "z", "Sa", "Sz"]), max_size=6))
def test_quotient_is_homomorphism(c2, u, v):
    amb = c2.ambient
    u = tuple((x, 1) for x in u)
    v = tuple((x, -1) for x in v)
    assert quotient_to_G(amb, u + v) == amb.mul(quotient_to_G(amb, u), quotient_to_G(amb, v))


def test_nontrivial_quotient_means_nontrivial(c2):
    rng = random.Random(5)
    for _ in range(200):
        w = random_word(rng, c2.letters(), 4)
        if quotient_to_G(c2.ambient, w) != c2.ambient.id:
            assert word_problem(c2, w, evidence=False).verdict == "nontrivial"


def test_moved_point_search(c2):
    assert find_moved_point(c2, parse_word("Sa Sa")) is None
    assert find_moved_point(c2, parse_word("z")) == c2.ambient.id


def test_substitutions():
    w = parse_word("a Sz a^-1")
    lim = xi_substitute(w, None)
    assert eta(lim, 2).word == w and eta(lim, 2).stage == 2
    assert str(lim) == "a Sz a^-1 @ inf"
    with pytest.raises(ValueError):
        eta(eta(lim, 1), 2)
