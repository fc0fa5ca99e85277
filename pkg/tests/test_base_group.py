import itertools

import pytest
import sympy.combinatorics as sc
from hypothesis import given
from hypothesis import strategies as st

from forge.base_group import Cyclic, FreeAbelian, Product, Symmetric, generator_name, parse_base

BASES = ["cyclic:2", "cyclic:3", "cyclic:5", "sym:3", "zfree:1", "zfree:2",
         "prod(cyclic:2,cyclic:2)", "prod(cyclic:3,sym:3)"]


def test_generator_names_skip_z():
    names = [generator_name(i) for i in range(25)]
    assert "z" not in names
    assert names[:3] == ["a", "b", "c"]


@pytest.mark.parametrize("text,cls", [("cyclic:4", Cyclic), ("sym:3", Symmetric),
                                      ("symmetric:4", Symmetric), ("zfree:2", FreeAbelian),
                                      ("free-abelian:1", FreeAbelian),
                                      ("prod(cyclic:2, cyclic:3)", Product),
                                      ("direct(zfree:1,cyclic:2)", Product)])
def test_parse(text, cls):
    assert isinstance(parse_base(text), cls)


@pytest.mark.parametrize("text", ["cyclic:0", "cyclic", "foo:2", "prod(cyclic:2)", "sym:0", "cyclic:2 junk"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_base(text)


@pytest.mark.parametrize("text", BASES)
def test_spec_round_trip(text):
    g = parse_base(text)
    assert parse_base(g.spec) == g


@pytest.mark.parametrize("text", [b for b in BASES if parse_base(b).order() is not None])
def test_group_axioms_exhaustive(text):
    g = parse_base(text)
    els = list(g.elements())
    assert len(els) == g.order()
    e = g.identity()
    for a in els:
        assert g.mul(a, e) == a == g.mul(e, a)
        assert g.mul(a, g.inv(a)) == e
    for a, b, c in itertools.product(els[:6], repeat=3):
        assert g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c))


@pytest.mark.parametrize("n", [3, 4])
def test_symmetric_order_matches_sympy(n):
    g = Symmetric(n)
    perms = [sc.Permutation([i - 1 for i in p]) for _, p in g.generators()]
    assert sc.PermutationGroup(perms).order() == g.order() == len(list(g.elements()))


@pytest.mark.parametrize("text", [b for b in BASES if parse_base(b).order() is not None])
def test_norm_is_word_length(text):
    g = parse_base(text)
    for a in g.elements():
        geo = g.geodesic(a)
        assert len(geo) == g.norm(a)
        v = g.identity()
        gens = [x for _, x in g.generators()]
        for i, e in geo:
            v = g.mul(v, gens[i] if e > 0 else g.inv(gens[i]))
        assert v == a


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=2))
def test_free_abelian_norm_is_l1(v):
    g = FreeAbelian(2)
    assert g.norm(tuple(v)) == sum(map(abs, v))


@given(st.integers(0, 11), st.integers(-20, 20))
def test_cyclic_power(a, k):
    g = Cyclic(12)
    assert g.power(a, k) == (a * k) % 12


def test_validate_rejects_foreign_elements():
    with pytest.raises(ValueError):
        Cyclic(3).validate(3)
    with pytest.raises(ValueError):
        Symmetric(3).validate((1, 1, 2))


def test_displacement():
    assert Cyclic(2).displacement() == 1
    assert parse_base("prod(cyclic:2,sym:3)").displacement() >= 1
