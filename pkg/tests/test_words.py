import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from treembed.words import (
    BLACKSTAR,
    STAR,
    Alphabet,
    Discrimination,
    awl,
    awl_or_zero,
    discriminate_close_words,
    head_sentence,
    is_starred_sentence,
    norm_r,
    sentence,
    sentence_from_json,
    sentence_tree_distance,
    split_at_divergence,
    tail_sentence,
    word_tree_distance,
)

words = st.text(alphabet="ab", max_size=6).map(tuple)
sentences = st.lists(st.text(alphabet="ab", min_size=1, max_size=3).map(tuple), max_size=5).map(tuple)


@pytest.mark.parametrize("u,v,d", [("ab", "ab", 0), ("abc", "ab", 1), ("abab", "aaa", 5)])
def test_word_tree_distance_examples(u, v, d):
    assert word_tree_distance(u, v) == d


def test_word_tree_distance_rejects_foreign_letters():
    with pytest.raises(ValueError):
        word_tree_distance("ax", "a", Alphabet("ab"))


def _bfs_tree_distance(u, v):
    # parent of a word is the word minus its last letter
    def ancestors(w):
        return [w[:i] for i in range(len(w), -1, -1)]

    au = ancestors(u)
    for steps_v, x in enumerate(ancestors(v)):
        if x in au:
            return au.index(x) + steps_v
    raise AssertionError


@given(words, words)
def test_word_tree_distance_matches_ancestor_walk(u, v):
    assert word_tree_distance(u, v) == _bfs_tree_distance(u, v)


@given(sentences, sentences, sentences)
def test_sentence_tree_metric_axioms(a, b, c):
    d = sentence_tree_distance
    assert d(a, b) == d(b, a)
    assert (d(a, b) == 0) == (a == b)
    assert d(a, c) <= d(a, b) + d(b, c)


def test_sentence_tree_distance_examples():
    assert sentence_tree_distance(sentence("abab", "aaa", "ba"), sentence("abab", "aaa")) == 1
    assert sentence_tree_distance(sentence("ab", "a"), sentence("ab", "b")) == 2
    assert sentence_tree_distance(sentence("a"), sentence("a")) == 0


def test_split_at_divergence_examples():
    d = split_at_divergence(sentence("a", "b", "c"), sentence("a", "b"))
    assert (d.p, d.m, d.n) == (2, 1, 0)
    d = split_at_divergence(sentence("a"), sentence("b"))
    assert (d.p, d.m, d.n) == (0, 1, 1)
    a = sentence("ab", "c")
    d = split_at_divergence(a, a)
    assert (d.p, d.m, d.n) == (2, 0, 0)


@given(sentences, sentences)
def test_split_reassembles(a, b):
    d = split_at_divergence(a, b)
    assert d.shared + d.tail_a == a and d.shared + d.tail_b == b
    assert d.distance == sentence_tree_distance(a, b)
    if d.m and d.n:
        assert d.tail_a[0] != d.tail_b[0]


def test_awl_examples():
    assert awl(sentence("abab", "aaa", "ba")) == 3
    assert awl(sentence("ab")) == 2
    assert awl(sentence("a", "a", "a", "a")) == 1
    assert awl_or_zero(()) == 0
    with pytest.raises(ValueError):
        awl(())


def test_tail_and_head_sentences():
    a = sentence("abc", "de")
    assert tail_sentence(a, 1, 2) == sentence("bc", "de")
    assert tail_sentence(a, 2, 2) == sentence("e")
    assert head_sentence(a, 1, 1) == sentence("a")
    with pytest.raises(IndexError):
        tail_sentence(a, 3, 1)


@pytest.mark.parametrize("u,r,out", [("abc", 2, ("a", "b")), ("ab", 4, ("a", "b", STAR, STAR)), ("abc", 3, tuple("abc"))])
def test_norm_r(u, r, out):
    assert norm_r(u, r) == out


def test_discrimination_examples():
    assert discriminate_close_words("aa", "ab", 2) is Discrimination.LAST_LETTERS
    assert discriminate_close_words("a" * 10, "a" * 12, 4) is Discrimination.LENGTH_DIGITS
    # this pair sits at tree distance 6, so k = 4 is outside the precondition
    with pytest.raises(ValueError):
        discriminate_close_words("abcde", "abXde", 4)
    assert discriminate_close_words("abcde", "abXde", 6) is Discrimination.LAST_LETTERS


def test_close_words_always_discriminated_exhaustive():
    # every pair of distinct words over {a, b} up to length 6 within distance k
    pool = [tuple(w) for r in range(1, 7) for w in itertools.product("ab", repeat=r)]
    checked = 0
    for k in range(1, 7):
        for u, v in itertools.combinations(pool, 2):
            if word_tree_distance(u, v) > k:
                continue
            letters = u[-k:] != v[-k:]
            digits = str(len(u))[-k:] != str(len(v))[-k:]
            assert letters or digits  # independent statement of the dichotomy
            got = discriminate_close_words(u, v, k)
            assert got is (Discrimination.LAST_LETTERS if letters else Discrimination.LENGTH_DIGITS)
            checked += 1
    assert checked > 1000


def test_discrimination_preconditions():
    with pytest.raises(ValueError):
        discriminate_close_words("ab", "ab", 3)
    with pytest.raises(ValueError):
        discriminate_close_words("aaaa", "b", 2)


def test_json_round_trip_with_reserved_letters():
    alpha = ((STAR, "a"), (BLACKSTAR, "b", "a"))
    alph = Alphabet([STAR, BLACKSTAR, "a", "b"])
    assert sentence_from_json(alph.to_json(alpha)) == (alph, alpha)
    assert is_starred_sentence(((STAR, "a"), (STAR,)))
    assert not is_starred_sentence(((STAR, "a", STAR),))


def test_alphabet_validation():
    with pytest.raises(ValueError):
        Alphabet("aa")
    with pytest.raises(ValueError):
        Alphabet("")
    with pytest.raises(ValueError):
        sentence("a", "")
    dotted = Alphabet(["a1", "b2"])
    assert dotted.encode_word(("a1", "b2")) == "a1.b2"
    assert dotted.decode_word("a1.b2") == ("a1", "b2")
    assert Fraction(1) == awl(sentence("a"))
