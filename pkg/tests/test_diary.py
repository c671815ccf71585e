import itertools
import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import suites
from treembed.diary import (
    alice,
    alice_diary,
    alice_trace_json,
    combined_diary,
    diary_from_finite,
    interleave_embed,
    is_recorded,
    pair_diaries,
    taurus_diary,
    taurus_guarantee,
    taurus_inner_N,
    upsilon_diary,
    virgo_diary,
    virgo_guarantee,
    virgo_params,
)
from treembed.criteria import check_upsilon
from treembed.statistics import base10_length_linear, last_letter, trunc_finite, trunc_linear
from treembed.words import BLACKSTAR, STAR, Alphabet, sentence, sentence_tree_distance, split_at_divergence


def chapters(kappa, *words):
    return tuple("".join(c) for c in alice_diary(kappa, sentence(*words))[0])


# -- Alice's Diary goldens -------------------------------------------------------


def test_two_day_example():
    assert chapters(3, "abac", "cb") == ("cab", "bca")


def test_single_day_exact_fit():
    assert chapters(3, "abc") == ("cba",)


def test_five_day_trace():
    assert chapters(3, "abac", "cb", "accc", "bcbc", "a") == ("cab", "bca", "ccc", "cbc", "aba")


def test_five_day_trace_with_three_letter_third_day():
    # the shorter third day empties the backlog early, so day five gets two pages
    assert chapters(3, "abac", "cb", "acc", "bcbc", "a") == ("cab", "bca", "cca", "cbc", "ab")


def test_provenance_examples():
    _, prov = alice_diary(3, sentence("abac"))
    assert is_recorded(prov, 1, 1) is None
    assert is_recorded(prov, 1, 4) == (1, 1)
    _, prov = alice_diary(3, sentence("abac", "cb"))
    assert is_recorded(prov, 1, 1) == (2, 3)
    assert prov.leftover == (1, 0)


def test_trace_json_shape():
    doc = alice_trace_json(Alphabet("abc"), sentence("abac", "cb"), 3)
    assert doc["chapters"] == ["cab", "bca"]
    assert {"chapter": 2, "page": 3, "day": 1, "position": 1} in doc["provenance"]
    json.dumps(doc)


def test_alice_rejects_bad_input():
    with pytest.raises(ValueError):
        alice_diary(0, sentence("a"))
    with pytest.raises(ValueError):
        alice_diary(2, (("a",), ()))


def test_diary_object_matches_function_and_resumes_from_memo():
    d = alice(3)
    a = sentence("abac", "cb", "accc")
    first = d(a[:2])
    assert d(a) == alice_diary(3, a)[0]
    assert d(a)[:2] == first
    d.clear_memo()
    assert d(a) == alice_diary(3, a)[0]


sentences = st.lists(st.text(alphabet="abc", min_size=1, max_size=8).map(tuple), max_size=8).map(tuple)


@given(sentences, st.integers(1, 6))
def test_alice_matches_stack_model(alpha, kappa):
    assert alice_diary(kappa, alpha)[0] == suites.stack_oracle(kappa, alpha)


@given(sentences, st.integers(1, 6))
def test_events_are_conserved(alpha, kappa):
    out, prov = alice_diary(kappa, alpha)
    recorded = sum(len(c) for c in out)
    assert recorded + (prov.leftover[-1] if alpha else 0) == sum(map(len, alpha))
    assert all(len(c) <= kappa for c in out)
    assert len(set(prov.index)) == recorded
    for (day, pos), (ch, page) in prov.index.items():
        assert out[ch - 1][page - 1] == alpha[day - 1][pos - 1]
        assert ch >= day


@given(sentences, sentences, st.integers(1, 5))
def test_diaries_are_height_and_order_preserving(a, b, kappa):
    da, db = alice_diary(kappa, a)[0], alice_diary(kappa, b)[0]
    assert len(da) == len(a)
    p = split_at_divergence(a, b).p
    assert da[:p] == db[:p]
    assert sentence_tree_distance(da, db) <= sentence_tree_distance(a, b)


starred = st.lists(st.text(alphabet="ab", max_size=5).map(lambda w: (STAR,) + tuple(w)), min_size=1, max_size=6).map(tuple)


@given(starred, st.integers(1, 6))
def test_chapter_before_first_star_is_reversed_day_word(alpha, kappa):
    out, _ = alice_diary(kappa, alpha)
    for i, v in enumerate(out):
        if STAR in v:
            u = v[: v.index(STAR)]
            assert alpha[i][1:] == tuple(reversed(u))


# -- recording and equality properties -----------------------------------------------


def test_recorded_when_kappa_covers_tail():
    r = suites.recorded_when_kappa_covers_tail(2000, seed=1)
    assert r.ok, r.failures


def test_recording_guarantee_is_sharp_enough_to_fail_below_threshold():
    # control: shrink kappa below the tail AWL and unrecorded events must show up
    rng = random.Random(5)
    misses = 0
    for _ in range(500):
        alpha = suites.random_sentence(rng, "abc", 4, 8, 4)
        _, prov = alice_diary(1, alpha)
        misses += sum(is_recorded(prov, 1, k) is None for k in range(1, len(alpha[0]) + 1))
    assert misses > 0


def test_equal_diaries_small_exhaustive():
    r = suites.equal_diary_exhaustive(kappa=2, max_days=3, max_len=4)
    assert r.ok, r.failures


def test_equal_diaries_exhaustive_kappa_one():
    r = suites.equal_diary_exhaustive(kappa=1, max_days=3, max_len=3)
    assert r.ok, r.failures


def test_clash_lower_bound():
    r = suites.clash_lower_bound(500, seed=3)
    assert r.ok, r.failures


# -- finite-statistic diaries --------------------------------------------------------


def test_last_letter_diary_example():
    d = diary_from_finite(last_letter())
    assert d(sentence("abc", "bc", "aa")) == ("c", "c", "a")
    assert diary_from_finite(trunc_finite(2))(sentence("abc")) == (("b", "c"),)
    assert d(()) == ()
    assert len(d(sentence("a"))) == 1


def test_upsilon_constant():
    assert upsilon_diary([last_letter()], 0, 1).guarantee == 2
    assert upsilon_diary([last_letter()], Fraction(1, 2), 2).guarantee == 8


def test_upsilon_bound_exhaustive_small():
    words = [tuple(w) for r in (1, 2) for w in itertools.product("ab", repeat=r)]
    pool = [s for k in range(1, 5) for s in itertools.product(words, repeat=k)]
    d = upsilon_diary([last_letter()], 0, 1)
    image = {a: d(a) for a in pool}
    checked = 0
    for a, b in itertools.combinations(pool, 2):
        dec = split_at_divergence(a, b)
        # with delta = 0 and J = 1 the criterion reads: the first diverging words end differently
        if min(dec.m, dec.n) < 1 or a[dec.p][-1] == b[dec.p][-1]:
            continue
        checked += 1
        assert 2 * sentence_tree_distance(image[a], image[b]) >= dec.m + dec.n
    assert checked > 10_000


def test_upsilon_checker_matches_direct_reading():
    rng = random.Random(2)
    for _ in range(2000):
        a = suites.random_sentence(rng, "ab", rng.randint(1, 4), 2)
        b = suites.random_sentence(rng, "ab", rng.randint(1, 4), 2)
        dec = split_at_divergence(a, b)
        if min(dec.m, dec.n) < 1:
            continue
        direct = a[dec.p][-1] != b[dec.p][-1]
        assert (check_upsilon(a, b, [last_letter()], 0, 1) is not None) == direct


def test_guarantee_suites_small():
    for suite in (suites.leo_guarantee, suites.virgo_guarantee, suites.taurus_guarantee):
        r = suite(200, seed=11)
        assert r.ok, (suite.__name__, r.failures)


# -- interleaving and the linear-statistic diaries -------------------------------------

EMBEDDING_STATS = (trunc_linear(12), base10_length_linear(12))


def test_embedding_diary_parameters():
    p = virgo_params(EMBEDDING_STATS, 0, 2, 18, 1)
    assert (p.tau, p.omega, p.U, p.V, p.kappa) == (12, 12, 505, 529, 8465)
    assert virgo_guarantee(0, 2) == 64
    assert taurus_inner_N(2, 18, 1) == 42
    assert taurus_inner_N(1, 0, 1) == 6
    assert taurus_guarantee(2) == 64


def test_interleave_unfolds_columns():
    out = interleave_embed(sentence("ab"), [trunc_linear(1)], 1)
    word = out[0]
    assert word[0] is BLACKSTAR
    assert tuple(col[0] for col in word[1:]) == ("a", "b")
    # the statistic stream is "ba", reversed into the columns
    assert tuple(col[1] for col in word[1:]) == ("a", "b")


@given(sentences, sentences)
def test_interleave_is_isometric_and_sized(a, b):
    ia, ib = interleave_embed(a, EMBEDDING_STATS, 1), interleave_embed(b, EMBEDDING_STATS, 1)
    assert sentence_tree_distance(ia, ib) == sentence_tree_distance(a, b)
    assert [len(w) for w in ia] == [1 + 12 * len(w) for w in a]


def test_virgo_diary_height_preserving():
    d = virgo_diary(EMBEDDING_STATS, 0, 2, 18, 1)
    assert d.kappa == 8465 and d.guarantee == 64
    rng = random.Random(0)
    for _ in range(1000):
        a = suites.random_sentence(rng, "ab", rng.randint(0, 5), 6)
        assert len(d(a)) == len(a)


def test_taurus_and_combined_constants():
    t = taurus_diary(EMBEDDING_STATS, 2, 18, 1)
    assert t.params.N == 42 and t.guarantee == 64
    c = combined_diary([last_letter()], EMBEDDING_STATS, 2, 2, 18, 1)
    assert c.guarantee == 64


def test_paired_diary_components():
    a = sentence("ab", "ba")
    f, g = diary_from_finite(last_letter()), alice(2)
    p = pair_diaries(f, g)
    assert p(a) == tuple(zip(f(a), g(a)))
    assert p.guarantee is None
