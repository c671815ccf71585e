"""The right-angled Coxeter group on a1, a2, a3, b1, b2, b3.

Every generator is an involution, ``a_k`` commutes with ``b_l`` exactly when
``k != l``, and no two letters of the same family commute.  Elements are
represented by their canonical word: the lexicographically least geodesic
word under a1 < a2 < a3 < b1 < b2 < b3.  That word is a plain tuple of
letter strings, so elements hash and compare directly.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .words import Alphabet, Sentence

A_LETTERS = ("a1", "a2", "a3")
B_LETTERS = ("b1", "b2", "b3")
LETTERS = A_LETTERS + B_LETTERS
ALPHABET = Alphabet(LETTERS)
IDENTITY: tuple = ()

DEFAULT_BALL_CAP = 12

_ORDER = {s: i for i, s in enumerate(LETTERS)}


def family(s: str) -> str:
    return s[0]


def commutes(s: str, t: str) -> bool:
    """True for distinct commuting generators."""
    return s[0] != t[0] and s[1] != t[1]


def _check(word: Iterable[str]) -> tuple:
    word = tuple(word)
    for s in word:
        if s not in _ORDER:
            raise ValueError(f"unknown generator {s!r}")
    return word


def _append(reduced: list, s: str) -> None:
    # Deletion rule: s cancels an earlier s iff everything after it commutes with s.
    for i in range(len(reduced) - 1, -1, -1):
        t = reduced[i]
        if t == s:
            del reduced[i]
            return
        if not commutes(s, t):
            break
    reduced.append(s)


def _canonical(word: Sequence[str]) -> tuple:
    # Lexicographically least linear extension of the commutation order.
    rest = list(word)
    out = []
    while rest:
        best = None
        for i, s in enumerate(rest):
            if all(commutes(s, t) for t in rest[:i]) and (best is None or _ORDER[s] < _ORDER[rest[best]]):
                best = i
            if _ORDER[s] == 0 and best == i:
                break
        out.append(rest.pop(best))
    return tuple(out)


def reduce(word: Iterable[str]) -> tuple:
    reduced: list = []
    for s in _check(word):
        _append(reduced, s)
    return _canonical(reduced)


def multiply(g: Sequence[str], h: Sequence[str]) -> tuple:
    return reduce(tuple(g) + tuple(h))


def inverse(g: Sequence[str]) -> tuple:
    return reduce(reversed(tuple(g)))


def word_metric(g: Sequence[str], h: Sequence[str]) -> int:
    # Free reduction alone already yields a geodesic; no canonical form needed.
    reduced: list = []
    for s in _check(tuple(reversed(tuple(g))) + tuple(h)):
        _append(reduced, s)
    return len(reduced)


def _bubble(word: Sequence[str], first: str) -> tuple:
    w = list(word)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i][0] != first and w[i + 1][0] == first and commutes(w[i], w[i + 1]):
                w[i], w[i + 1] = w[i + 1], w[i]
                changed = True
    return tuple(w)


def a_left_rep(g: Sequence[str]) -> tuple:
    """Geodesic word for g with every A-letter commuted as far left as it goes."""
    return _bubble(reduce(g), "a")


def b_left_rep(g: Sequence[str]) -> tuple:
    return _bubble(reduce(g), "b")


def _split_after(word: Sequence[str], fam: str) -> Sentence:
    out, current = [], []
    for s in word:
        current.append(s)
        if s[0] == fam:
            out.append(tuple(current))
            current = []
    return tuple(out)  # a trailing block without a `fam` letter is dropped


def F_A(g: Sequence[str]) -> Sentence:
    return _split_after(a_left_rep(g), "a")


def F_B(g: Sequence[str]) -> Sentence:
    return _split_after(b_left_rep(g), "b")


def ball(R: int, cap: int = DEFAULT_BALL_CAP) -> list:
    """All elements of word length at most R, in BFS order (then canonical order)."""
    if R < 0:
        raise ValueError("radius must be nonnegative")
    if R > cap:
        raise ValueError(f"radius {R} exceeds the configured cap {cap}")
    seen = {IDENTITY}
    layer = [IDENTITY]
    out = [IDENTITY]
    for _ in range(R):
        nxt = set()
        for g in layer:
            for s in LETTERS:
                h = multiply(g, (s,))
                if h not in seen:
                    nxt.add(h)
        seen |= nxt
        layer = sorted(nxt, key=lambda w: [_ORDER[s] for s in w])
        out.extend(layer)
    return out


def sphere_sizes(R: int, cap: int = DEFAULT_BALL_CAP) -> list:
    sizes = [0] * (R + 1)
    for g in ball(R, cap):
        sizes[len(g)] += 1
    return sizes


def format_element(g: Sequence[str]) -> str:
    return ".".join(g) if g else "e"


def parse_element(text: str) -> tuple:
    text = text.strip()
    if text in ("", "e"):
        return IDENTITY
    return reduce(text.split("."))
