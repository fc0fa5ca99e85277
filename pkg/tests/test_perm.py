import pytest
from hypothesis import given
from hypothesis import strategies as st

from forge.ambient import Ambient, Point
from forge.perm import FinPerm, IndexedInvolution, pair_for

AMB = Ambient("cyclic:2")
points = st.builds(Point, st.integers(0, 1), st.integers(-6, 6))


@st.composite
def perms(draw):
    pts = draw(st.lists(points, unique=True, max_size=6))
    order = draw(st.permutations(pts))
    return FinPerm(dict(zip(pts, order)))


@given(perms(), perms(), perms())
def test_compose_is_associative(p, q, r):
    assert p.compose(q).compose(r) == p.compose(q.compose(r))


@given(perms(), points)
def test_compose_applies_right_first(p, x):
    q = FinPerm.transposition(AMB.id, AMB.zgen)
    assert p.compose(q)(x) == p(q(x))


@given(perms())
def test_inverse(p):
    assert p.compose(p.inverse()).is_identity()
    assert len(p.support) == len(p)


@given(perms(), points, points)
def test_conjugate_by_translation(p, g, x):
    c = p.conjugate(AMB, g)
    # c = g p g^-1 acting on the left
    assert c(x) == AMB.mul(g, p(AMB.mul(AMB.inv(g), x)))


@given(perms())
def test_order_kills(p):
    k = p.order()
    q = FinPerm.identity()
    for _ in range(k):
        q = q.compose(p)
    assert q.is_identity()


def test_equality_ignores_fixed_points():
    assert FinPerm({AMB.id: AMB.id}) == FinPerm.identity()
    with pytest.raises(ValueError):
        FinPerm({AMB.id: AMB.zgen})


def test_shift_xor_example():
    v = IndexedInvolution("a", {0, 2})
    assert v.shift_xor(2).indices == {0, 4}
    assert not v.disjoint_after_shift(2)
    assert v.disjoint_after_shift(4)


def test_z_family_is_even():
    with pytest.raises(ValueError):
        IndexedInvolution("z", {1})
    with pytest.raises(ValueError):
        IndexedInvolution("z", {0}).shift_xor(3)


@given(st.frozensets(st.integers(0, 30).map(lambda m: 2 * m), max_size=6), st.integers(1, 40))
def test_shift_xor_is_the_commutator(indices, half):
    """Index set of z^nu v z^-nu v equals I xor (I + nu), checked as permutations."""
    nu = 2 * half
    for s in ("a", "z"):
        v = IndexedInvolution(s, indices)
        p = v.to_finperm(AMB)
        comm = p.conjugate(AMB, AMB.zpow(nu)).compose(p)
        assert comm == v.shift_xor(nu).to_finperm(AMB)


@given(st.frozensets(st.integers(0, 20), max_size=5), points)
def test_indexed_apply_matches_finperm(indices, x):
    v = IndexedInvolution("a", indices)
    assert v.apply(AMB, x) == v.to_finperm(AMB)(x)
    assert v.apply(AMB, v.apply(AMB, x)) == x


def test_pairs():
    assert pair_for(AMB, "a", 3) == (Point(0, 3), Point(1, 3))
    assert pair_for(AMB, "z", 2) == (Point(0, 2), Point(0, 3))
    v = IndexedInvolution("z", {0, 4})
    assert v.support_radius(AMB) == 5
    assert IndexedInvolution.from_json(v.to_json()) == v
