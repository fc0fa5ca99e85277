import json
import random

import pytest

from forge.mif import (EscapeReport, escape_certificate, kernel_contains_sigmas, mif_scan, pi_closure,
                       random_word, verify_escape)
from forge.words import format_word, parse_word


def test_escape_simple(c2):
    rep = escape_certificate(c2, parse_word("Sa z"))
    assert rep.verdict == "escaped"
    assert rep.moved_point == "id"
    assert all(c.displaced and c.approx and c.shifted for c in rep.checks)
    assert verify_escape(c2, rep)


def test_escape_reach_grows_with_nu(c2):
    rep = escape_certificate(c2, parse_word("z^2 Sa z^-2 Sa"), stages_to_check=3)
    assert rep.verdict == "escaped"
    for c in rep.checks:
        assert c.reach >= c.nu


def test_escape_rejects_trivial(c2):
    with pytest.raises(ValueError):
        escape_certificate(c2, parse_word("Sa Sa"))


def test_report_json_round_trip(c2):
    rep = escape_certificate(c2, parse_word("Sz a"))
    back = EscapeReport.from_json(json.loads(json.dumps(rep.to_json())))
    assert back == rep
    assert verify_escape(c2, back)


def test_tampered_report_fails(c2):
    rep = escape_certificate(c2, parse_word("Sa z"))
    rep.checks[0].image = "id"
    assert not verify_escape(c2, rep)


def test_uncertified_stage_is_not_a_falsifier(certs):
    """z^-1 Sa z conjugates to a length-5 word; at stage 1 (k = 3) nothing is certified."""
    shallow = certs("zfree:1", 2)
    rep = escape_certificate(shallow, parse_word("z^-1 Sa z"))
    assert rep.verdict == "inconclusive"
    assert not any(c.certified for c in rep.checks)
    deep = certs("zfree:1", 4)
    assert escape_certificate(deep, parse_word("z^-1 Sa z")).verdict == "escaped"


def test_scan_is_deterministic(c2):
    a = mif_scan(c2, 100, 3, seed=7)
    b = mif_scan(c2, 100, 3, seed=7)
    assert a.to_json() == b.to_json()
    assert a.falsifiers == 0


def test_scan_empty(c2):
    s = mif_scan(c2, 0, 3, seed=1)
    assert s.trivial == s.escaped == s.inconclusive == s.falsifiers == 0
    assert s.conclusive_rate == 1.0


def test_scan_max_flat_guard(c2):
    with pytest.raises(ValueError):
        mif_scan(c2, 1, c2.top.k + 1, seed=1)


def test_random_words_are_reduced():
    rng = random.Random(0)
    for _ in range(200):
        w = random_word(rng, ["a", "z", "Sa"], 6)
        assert 1 <= len(w) <= 6
        assert all(w[i] != (w[i + 1][0], -w[i + 1][1]) for i in range(len(w) - 1))


@pytest.mark.parametrize("x_count,order", [(0, 1), (1, 2), (2, 2), (3, 6)])
def test_pi_closure(c2, x_count, order):
    r = pi_closure(c2, x_count)
    assert r.order == order
    assert r.matches


def test_pi_closure_inconclusive_on_shallow_certificate(certs):
    r = pi_closure(certs("zfree:1", 2), 3)
    assert not r.conclusive
    assert r.blocking_length > 4


def test_kernel(c2):
    assert kernel_contains_sigmas(c2)


def test_scan_words_format(c2):
    reports = []
    mif_scan(c2, 30, 3, seed=2, reports=reports)
    for r in reports:
        assert format_word(parse_word(r.word)) == r.word
