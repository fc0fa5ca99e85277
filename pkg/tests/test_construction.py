import json

import pytest
import sympy.combinatorics as sc

from forge.config import Config, load_config
from forge.construction import (Certificate, build_stages, check_candidate, choose_k, enumerate_pi,
                                finiteness_witness, in_pi, permutation_closure, verify_certificate)
from forge.words import format_word
from oracles import all_words, subset_sums

# nu and k for the first four stages; identical for every base tried so far
NU = [0, 2, 6, 14, 30]
K = [0, 3, 4, 7, 8]


def test_stage_table_cyclic2(c2):
    assert [st.nu for st in c2.stages] == NU
    assert [st.k for st in c2.stages] == K


@pytest.mark.parametrize("base", ["cyclic:3", "zfree:1"])
def test_stage_table_other_bases(certs, base):
    cert = certs(base, 3)
    assert [st.nu for st in cert.stages] == NU[:4]
    assert [st.k for st in cert.stages] == K[:4]


def test_nu_is_least_admissible(c2):
    """Every even candidate skipped by the search really fails a condition."""
    for n in range(1, 4):
        prefix = c2.stages[:n]
        for nu in range(prefix[-1].nu + 2, c2.stages[n].nu, 2):
            ok, why = check_candidate(c2, prefix, nu, 10**6)
            assert not ok, (n, nu)
        assert check_candidate(c2, prefix, c2.stages[n].nu, 10**6)[0]


def test_subset_sum_law(c2):
    for st in c2.stages:
        want = subset_sums(s.nu for s in c2.stages[1:st.n + 1])
        assert len(want) == 2 ** st.n
        for v in st.sigma.values():
            assert v.indices == want


def test_pi_prefix_cyclic2():
    got = [format_word(w) for w in enumerate_pi(["a", "z"], 6)]
    assert got == ["Sa", "Sa^-1", "Sz", "Sz^-1", "Sa Sa", "Sa Sz"]


def test_pi_prefix_against_brute_force():
    """Shortlex over the interleaved order a, a^-1, z, z^-1, Sa, Sa^-1, Sz, Sz^-1."""
    order = [(a, e) for a in ("a", "z", "Sa", "Sz") for e in (1, -1)]
    rank = {s: i for i, s in enumerate(order)}
    words = [w for w in all_words(["a", "z", "Sa", "Sz"], 4) if w]
    words.sort(key=lambda w: (len(w), [rank[s] for s in w]))

    def sigma_free_part_trivial(w):
        stack = []
        for x, e in w:
            if x.startswith("S"):
                continue
            if stack and stack[-1] == (x, -e):
                stack.pop()
            else:
                stack.append((x, e))
        return not stack
    want = [w for w in words if sigma_free_part_trivial(w)]
    got = enumerate_pi(["a", "z"], 60)
    assert got == want[:60]
    assert all(in_pi(w) for w in got)


def test_finiteness_witness_stage1(c2):
    xs = enumerate_pi(c2.ambient.letters, 1)
    assert finiteness_witness(c2.group, c2.alphabet(1), xs) == (2, 1)
    assert choose_k(0, 2, 1) == 3


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_finiteness_order_against_sympy(c2, n):
    xs = enumerate_pi(c2.ambient.letters, n)
    alph = c2.alphabet(n)
    perms = []
    from forge.marked import aug_evaluate_word
    for w in xs:
        perms.append(aug_evaluate_word(c2.group, alph, w).perm)
    support = sorted(set().union(*(p.support for p in perms)) | {c2.ambient.id})
    idx = {x: i for i, x in enumerate(support)}
    gens = [sc.Permutation([idx[p(x)] for x in support]) for p in perms]
    order = sc.PermutationGroup(gens).order()
    assert permutation_closure(perms, 10**6) == order
    assert finiteness_witness(c2.group, alph, xs)[0] == order


def test_certificate_round_trip(c2_verified, tmp_path):
    path = tmp_path / "c.json"
    c2_verified.save(path)
    back = Certificate.load(path)
    assert back.to_json() == c2_verified.to_json()
    assert json.loads(path.read_text())["version"] == 1
    assert verify_certificate(back).ok


def test_verify_detects_tampering(c2_verified):
    d = c2_verified.to_json()
    d["stages"][2]["nu"] = 8
    d["stages"][2]["sigma"] = {s: [0, 2, 8, 10] for s in d["stages"][2]["sigma"]}
    rep = verify_certificate(Certificate.from_json(d))
    assert not rep.ok
    d = c2_verified.to_json()
    d["stages"][3]["k"] += 1
    assert not verify_certificate(Certificate.from_json(d)).ok


def test_verify_replays_unrecorded_checks(c2):
    rep = verify_certificate(c2)
    assert rep.ok and rep.missing


def test_budget_gives_incomplete_certificate():
    cert = build_stages("cyclic:2", 3, Config(nu_cap=8))
    assert not cert.complete
    assert cert.depth == 2
    assert "nu" in cert.note


def test_bad_version():
    with pytest.raises(ValueError):
        Certificate.from_json({"version": 2})


def test_config_profiles(monkeypatch):
    monkeypatch.setenv("FORGE_BUDGET_PROFILE", "small")
    assert load_config().nu_cap == 512
    assert load_config(nu_cap=10).nu_cap == 10
    with pytest.raises(ValueError):
        load_config("huge")
    with pytest.raises(ValueError):
        Config(ball_cap=0)
