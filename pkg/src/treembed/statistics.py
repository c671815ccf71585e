"""Finite and linear statistics on sentence-trees.

A finite statistic maps a sentence into a finite set.  A linear statistic is
a family ``stat_c`` of words over some alphabet B with ``len(stat_c) <= tau*c``
where a larger ``c`` only ever extends the word; ``limit`` is the untruncated
value (every built-in here has a finite limit because sentences are finite).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from .words import Alphabet, Sentence, Word

YES = "yes"
NO = "no"


@dataclass(frozen=True)
class FiniteStatistic:
    name: str
    fn: Callable[[Sentence], Hashable]
    # Membership test for the declared codomain; ``size`` is None when the
    # codomain is only finite relative to an unstated alphabet.
    contains: Callable[[Hashable], bool] = field(default=lambda v: True, repr=False)
    size: int | None = None

    def __call__(self, alpha: Sentence) -> Hashable:
        if not alpha:
            raise ValueError(f"{self.name}: statistics are evaluated on nonempty sentences")
        value = self.fn(alpha)
        if not self.contains(value):
            raise ValueError(f"{self.name} produced {value!r} outside its codomain")
        return value


@dataclass(frozen=True)
class LinearStatistic:
    name: str
    tau: Fraction
    _at: Callable[[int, Sentence], Word] = field(repr=False)
    _limit: Callable[[Sentence], Word] = field(repr=False)
    alphabet: Alphabet | None = None

    def at(self, c: int, alpha: Sentence) -> Word:
        if c < 0:
            raise ValueError("c must be nonnegative")
        out = self._at(c, alpha)
        if len(out) > self.tau * c:
            raise AssertionError(f"{self.name}: length {len(out)} exceeds tau*c = {self.tau * c}")
        return out

    def limit(self, alpha: Sentence) -> Word:
        return self._limit(alpha)

    def cap(self, c: int) -> int:
        return math.floor(self.tau * c)


def _stream_statistic(name: str, tau, stream: Callable[[Sentence], Word], alphabet=None) -> LinearStatistic:
    tau = Fraction(tau)
    if tau < 1:
        raise ValueError("tau must be at least 1")

    def at(c: int, alpha: Sentence) -> Word:
        return stream(alpha)[: math.floor(tau * c)]

    return LinearStatistic(name, tau, at, stream, alphabet)


# -- finite statistics ---------------------------------------------------------


def last_letter(alphabet: Alphabet | None = None) -> FiniteStatistic:
    contains = (lambda v: v in alphabet) if alphabet is not None else (lambda v: True)
    return FiniteStatistic(
        "last_letter",
        lambda alpha: alpha[-1][-1],
        contains,
        len(alphabet) if alphabet is not None else None,
    )


def trunc_finite(kappa: int, alphabet: Alphabet | None = None) -> FiniteStatistic:
    if kappa < 1:
        raise ValueError("kappa must be positive")
    size = None
    if alphabet is not None:
        size = sum(len(alphabet) ** r for r in range(kappa + 1))
    return FiniteStatistic(
        f"trunc_{kappa}",
        lambda alpha: alpha[-1][-kappa:],
        lambda v: isinstance(v, tuple) and len(v) <= kappa,
        size,
    )


def length_mod(m: int) -> FiniteStatistic:
    if m < 1:
        raise ValueError("modulus must be positive")
    return FiniteStatistic(
        f"length_mod_{m}",
        lambda alpha: len(alpha[-1]) % m,
        lambda v: isinstance(v, int) and 0 <= v < m,
        m,
    )


def predicate_stat(q: Callable[[Sentence], bool], name: str = "predicate") -> FiniteStatistic:
    return FiniteStatistic(name, lambda alpha: YES if q(alpha) else NO, lambda v: v in (YES, NO), 2)


def product_stat(stats: Sequence[FiniteStatistic]) -> FiniteStatistic:
    """Componentwise tuple of several finite statistics."""
    stats = tuple(stats)
    sizes = [s.size for s in stats]
    size = math.prod(sizes) if all(s is not None for s in sizes) else None

    def contains(v) -> bool:
        return isinstance(v, tuple) and len(v) == len(stats) and all(s.contains(x) for s, x in zip(stats, v))

    return FiniteStatistic(
        "product(" + ",".join(s.name for s in stats) + ")",
        lambda alpha: tuple(s(alpha) for s in stats),
        contains,
        size,
    )


# -- linear statistics ---------------------------------------------------------


def trunc_linear(tau=1, alphabet: Alphabet | None = None) -> LinearStatistic:
    """Final tau*c letters of the last word, newest first."""
    return _stream_statistic(f"trunc_linear_{tau}", tau, lambda alpha: tuple(reversed(alpha[-1])), alphabet)


DIGITS = Alphabet("0123456789")


def base10_length_linear(tau=1) -> LinearStatistic:
    """Final tau*c base-10 digits of the last word's length, least significant first."""
    return _stream_statistic(
        f"base10_length_{tau}", tau, lambda alpha: tuple(reversed(str(len(alpha[-1])))), DIGITS
    )


HOWMANY_ALPHABET = Alphabet("0")


def howmany() -> LinearStatistic:
    """The question "does the last word have at most c letters?"."""

    def at(c: int, alpha: Sentence) -> Word:
        return ("0",) if len(alpha[-1]) <= c else ()

    return LinearStatistic("howmany", Fraction(1), at, lambda alpha: ("0",), HOWMANY_ALPHABET)


def oop(sigma: Callable[[int], Sequence[int]], tau=1, name: str = "oop") -> LinearStatistic:
    """Order of priority: the letter stream of the whole sentence permuted by ``sigma(l)``.

    ``sigma(l)`` must return a permutation of ``range(l)`` where ``l`` is the
    total letter count; position t of the output is letter ``sigma(l)[t]``.
    """

    def stream(alpha: Sentence) -> Word:
        letters = [a for w in alpha for a in w]
        perm = list(sigma(len(letters)))
        if sorted(perm) != list(range(len(letters))):
            raise ValueError(f"{name}: sigma({len(letters)}) is not a permutation of the letter count")
        return tuple(letters[t] for t in perm)

    return _stream_statistic(name, tau, stream)


def identity_priority(l: int) -> list[int]:
    return list(range(l))


def reversal_priority(l: int) -> list[int]:
    return list(range(l - 1, -1, -1))


def max_tau(stats: Iterable[LinearStatistic]) -> Fraction:
    return max((s.tau for s in stats), default=Fraction(1))
