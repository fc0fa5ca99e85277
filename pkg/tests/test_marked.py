import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forge.ambient import Ambient, Point
from forge.construction import stage_alphabet
from forge.marked import AugGroup, BudgetExceeded, aug_evaluate_word, marked_ball, marked_ball_iso
from forge.perm import FinPerm, IndexedInvolution
from forge.words import format_word

AMB = Ambient("cyclic:2")
G = AugGroup(AMB)


def _alphabet(sigma_indices):
    sigma = {s: IndexedInvolution(s, ix) for s, ix in sigma_indices.items()}
    return stage_alphabet(AMB, G, sigma)


STAGE0 = _alphabet({"a": {0}, "z": {0}})
STAGE1 = _alphabet({"a": {0, 2}, "z": {0, 2}})

points = st.builds(Point, st.integers(0, 1), st.integers(-5, 5))


@st.composite
def elements(draw):
    pts = draw(st.lists(points, unique=True, max_size=5))
    perm = FinPerm(dict(zip(pts, draw(st.permutations(pts)))))
    return G.mul(G.permutation(perm), G.translation(draw(points)))


@given(elements(), elements(), points)
def test_multiplication_is_composition(u, v, x):
    assert G.apply(G.mul(u, v), x) == G.apply(u, G.apply(v, x))


@given(elements(), points)
def test_inverse(u, x):
    assert G.is_identity(G.mul(u, G.inv(u)))
    assert G.apply(G.inv(u), G.apply(u, x)) == x


@given(elements(), elements(), elements())
def test_reassociation(u, v, w):
    assert G.mul(G.mul(u, v), w) == G.mul(u, G.mul(v, w))


@given(elements(), elements())
def test_equality_iff_equal_action(u, v):
    window = set(u.perm.support) | set(v.perm.support) | {AMB.id, AMB.zgen, AMB.zpow(-1)}
    window |= {AMB.mul(AMB.inv(u.trans), p) for p in u.perm.support}
    window |= {AMB.mul(AMB.inv(v.trans), p) for p in v.perm.support}
    same = all(G.apply(u, x) == G.apply(v, x) for x in window)
    assert same == (u == v)


@given(elements())
def test_moved_point(u):
    x = G.moved_point(u)
    if G.is_identity(u):
        assert x is None
    else:
        assert G.apply(u, x) != x


def test_stage0_ball_radius_one():
    ball = marked_ball(G, STAGE0, 1)
    assert len(ball) == 6
    assert {format_word(w) for w in ball.geodesics} == {"1", "a", "z", "Sa", "Sz", "z^-1"}


def test_ball_radius_zero_and_monotone():
    sizes = [len(marked_ball(G, STAGE1, k)) for k in range(5)]
    assert sizes[0] == 1
    assert sizes == sorted(sizes)


def test_ball_geodesics_evaluate():
    ball = marked_ball(G, STAGE1, 3)
    for v, w, d in zip(ball.vertices, ball.geodesics, ball.depth):
        assert aug_evaluate_word(G, STAGE1, w) == v
        assert len(w) == d


def test_ball_cap():
    with pytest.raises(BudgetExceeded):
        marked_ball(G, STAGE1, 4, cap=50)


def test_dot_export():
    ball = marked_ball(G, STAGE0, 1)
    dot = ball.to_dot(STAGE0.letters)
    assert dot.startswith("digraph") and dot.count("[label=") == 6 + dot.count("->")


def test_iso_reflexive_and_symmetric():
    for k in range(4):
        assert marked_ball_iso(G, STAGE1, G, STAGE1, k)
        assert bool(marked_ball_iso(G, STAGE0, G, STAGE1, k)) == bool(marked_ball_iso(G, STAGE1, G, STAGE0, k))


def test_iso_failure_witness_and_monotonicity():
    verdicts = [bool(marked_ball_iso(G, STAGE0, G, STAGE1, k)) for k in range(5)]
    assert verdicts[0]
    # true at k implies true below k
    first_false = verdicts.index(False)
    assert not any(verdicts[first_false:])
    res = marked_ball_iso(G, STAGE0, G, STAGE1, first_false)
    u, v = res.witness
    assert len(u) <= first_false and len(v) <= first_false
    eq0 = aug_evaluate_word(G, STAGE0, u) == aug_evaluate_word(G, STAGE0, v)
    eq1 = aug_evaluate_word(G, STAGE1, u) == aug_evaluate_word(G, STAGE1, v)
    assert eq0 != eq1


def test_iso_requires_matching_letters():
    bad = type(STAGE0)(("a", "Sa"), {"a": STAGE0.values["a"], "Sa": STAGE0.values["Sa"]})
    with pytest.raises(ValueError):
        marked_ball_iso(G, STAGE0, G, bad, 1)


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_random_words_evaluate_pointwise(seed):
    rng = random.Random(seed)
    syms = [(a, e) for a in STAGE1.letters for e in (1, -1)]
    w = tuple(rng.choice(syms) for _ in range(rng.randint(0, 8)))
    v = aug_evaluate_word(G, STAGE1, w)
    x = Point(rng.randint(0, 1), rng.randint(-6, 6))
    y = x
    for a, e in reversed(w):
        val = STAGE1.values[a] if e > 0 else G.inv(STAGE1.values[a])
        y = G.apply(val, y)
    assert G.apply(v, x) == y
