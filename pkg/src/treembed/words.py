"""Words, sentences and the metrics of word-trees and sentence-trees.

A word is a tuple of hashable letters and a sentence is a tuple of words.
Plain tuples keep everything immutable and hashable, which the diary memo
tables and the BFS harnesses rely on.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Sequence, Tuple

Letter = Hashable
Word = Tuple[Letter, ...]
Sentence = Tuple[Word, ...]


class Reserved:
    """A letter that can never collide with a user-supplied token."""

    __slots__ = ("label",)

    def __init__(self, label: str):
        self.label = label

    def __repr__(self) -> str:
        return self.label

    def __reduce__(self):
        return (_reserved, (self.label,))


def _reserved(label: str) -> Reserved:
    return {"⋆": STAR, "★": BLACKSTAR}[label]


STAR = Reserved("⋆")
BLACKSTAR = Reserved("★")
RESERVED = (STAR, BLACKSTAR)


class Alphabet:
    """A finite, ordered, duplicate-free set of letters with a text codec.

    Single-character alphabets encode words by concatenation ("abac"); any
    alphabet with a longer token uses dots ("a1.b2").
    """

    def __init__(self, letters: Iterable[Letter]):
        letters = tuple(letters)
        if not letters:
            raise ValueError("alphabet must be nonempty")
        if len(set(letters)) != len(letters):
            raise ValueError(f"alphabet has duplicate letters: {letters!r}")
        self.letters = letters
        self._index = {a: i for i, a in enumerate(letters)}
        self._by_text = {_token_text(a): a for a in letters}
        self.separator = "" if all(len(_token_text(a)) == 1 for a in letters) else "."

    def __contains__(self, letter) -> bool:
        return letter in self._index

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.letters)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def index(self, letter: Letter) -> int:
        return self._index[letter]

    def check_word(self, w: Sequence[Letter]) -> Word:
        for a in w:
            if a not in self._index:
                raise ValueError(f"letter {a!r} not in {self!r}")
        return tuple(w)

    def encode_word(self, w: Sequence[Letter]) -> str:
        return self.separator.join(_token_text(a) for a in self.check_word(w))

    def decode_word(self, text: str) -> Word:
        if self.separator:
            tokens = text.split(self.separator) if text else []
        else:
            tokens = list(text)
        try:
            return tuple(self._by_text[t] for t in tokens)
        except KeyError as exc:
            raise ValueError(f"unknown letter {exc.args[0]!r} in {text!r}") from None

    def dumps(self, alpha: Sentence) -> str:
        """Canonical JSON form ``{"alphabet": [...], "sentence": [...]}``."""
        return json.dumps(self.to_json(alpha), ensure_ascii=False)

    def to_json(self, alpha: Sentence) -> dict:
        return {
            "alphabet": [_token_text(a) for a in self.letters],
            "sentence": [self.encode_word(w) for w in alpha],
        }


def _token_text(a: Letter) -> str:
    return a.label if isinstance(a, Reserved) else str(a)


def sentence_from_json(doc: dict) -> tuple[Alphabet, Sentence]:
    """Inverse of :meth:`Alphabet.to_json`; reserved glyphs map back to STAR/BLACKSTAR."""
    if not isinstance(doc, dict) or "alphabet" not in doc or "sentence" not in doc:
        raise ValueError("sentence document needs 'alphabet' and 'sentence' keys")
    letters = [_reserved(t) if t in ("⋆", "★") else t for t in doc["alphabet"]]
    alphabet = Alphabet(letters)
    return alphabet, make_sentence(alphabet.decode_word(t) for t in doc["sentence"])


def make_sentence(words: Iterable[Sequence[Letter]]) -> Sentence:
    """Build a sentence, rejecting empty words."""
    out = tuple(tuple(w) for w in words)
    for i, w in enumerate(out):
        if not w:
            raise ValueError(f"word {i + 1} of the sentence is empty")
    return out


def sentence(*words: Sequence[Letter]) -> Sentence:
    """``sentence("abab", "aaa", "ba")`` is the three word sentence."""
    return make_sentence(words)


def is_starred_sentence(alpha: Sentence, star: Letter = STAR) -> bool:
    return all(w and w[0] == star and star not in w[1:] for w in alpha)


def common_prefix_length(u: Sequence, v: Sequence) -> int:
    n = min(len(u), len(v))
    i = 0
    while i < n and u[i] == v[i]:
        i += 1
    return i


def word_tree_distance(w: Sequence[Letter], w2: Sequence[Letter], alphabet: Alphabet | None = None) -> int:
    if alphabet is not None:
        alphabet.check_word(w)
        alphabet.check_word(w2)
    return len(w) + len(w2) - 2 * common_prefix_length(w, w2)


@dataclass(frozen=True)
class DivergenceDecomposition:
    """alpha = shared + tail_a, beta = shared + tail_b, with p = len(shared)."""

    p: int
    m: int
    n: int
    shared: Sentence
    tail_a: Sentence
    tail_b: Sentence

    @property
    def distance(self) -> int:
        return self.m + self.n


def split_at_divergence(alpha: Sequence, beta: Sequence) -> DivergenceDecomposition:
    alpha, beta = tuple(alpha), tuple(beta)
    p = common_prefix_length(alpha, beta)
    return DivergenceDecomposition(
        p=p,
        m=len(alpha) - p,
        n=len(beta) - p,
        shared=alpha[:p],
        tail_a=alpha[p:],
        tail_b=beta[p:],
    )


def sentence_tree_distance(alpha: Sequence, beta: Sequence) -> int:
    # Also used on diary outputs, whose "words" are arbitrary hashable entries.
    return len(alpha) + len(beta) - 2 * common_prefix_length(alpha, beta)


def letter_count(alpha: Sentence) -> int:
    return sum(len(w) for w in alpha)


def awl(alpha: Sentence) -> Fraction:
    """Average word length: letters divided by words."""
    if not alpha:
        raise ValueError("average word length of an empty sentence is undefined")
    return Fraction(letter_count(alpha), len(alpha))


def awl_or_zero(alpha: Sentence) -> Fraction:
    return awl(alpha) if alpha else Fraction(0)


def _check_letter(alpha: Sentence, i: int, k: int) -> None:
    if not 1 <= i <= len(alpha) or not 1 <= k <= len(alpha[i - 1]):
        raise IndexError(f"no letter at word {i}, position {k}")


def tail_sentence(alpha: Sentence, i: int, k: int) -> Sentence:
    """Tail-sentence of the k-th letter of word i (both 1-based)."""
    _check_letter(alpha, i, k)
    return (alpha[i - 1][k - 1 :],) + alpha[i:]


def head_sentence(alpha: Sentence, i: int, k: int) -> Sentence:
    _check_letter(alpha, i, k)
    return alpha[: i - 1] + (alpha[i - 1][:k],)


def reverse(w: Sequence[Letter]) -> Word:
    return tuple(reversed(w))


def norm_r(u: Sequence[Letter], r: int, pad: Letter = STAR) -> Word:
    """Truncate or STAR-pad ``u`` to exactly ``r`` letters."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    u = tuple(u)
    return u[:r] if r <= len(u) else u + (pad,) * (r - len(u))


class Discrimination(enum.Enum):
    LAST_LETTERS = "last_letters"
    LENGTH_DIGITS = "length_digits"


def final_letters(w: Sequence, k: int) -> tuple:
    w = tuple(w)
    return w[max(len(w) - k, 0) :]


def final_length_digits(w: Sequence, k: int) -> str:
    return str(len(w))[-k:] if k > 0 else ""


def discriminate_close_words(w: Sequence[Letter], w2: Sequence[Letter], k: int) -> Discrimination:
    """Say which alternative separates two distinct nearby words.

    Either their final k letters differ or the final k digits of their
    lengths differ; the letters are checked first.
    """
    w, w2 = tuple(w), tuple(w2)
    if not w or not w2:
        raise ValueError("words must be nonempty")
    if w == w2:
        raise ValueError("words must be distinct")
    if word_tree_distance(w, w2) > k:
        raise ValueError(f"words are at distance {word_tree_distance(w, w2)} > k={k}")
    if final_letters(w, k) != final_letters(w2, k):
        return Discrimination.LAST_LETTERS
    if final_length_digits(w, k) != final_length_digits(w2, k):
        return Discrimination.LENGTH_DIGITS
    raise AssertionError(f"neither alternative separates {w!r} and {w2!r} at k={k}")
