"""Diaries: height- and order-preserving maps from sentence-trees to word-trees.

Every diary here is driven by a step function ``step(state, prefix) ->
(state, entry)`` run once per day, so order preservation holds by
construction.  Entries are memoised per prefix.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Hashable, Sequence

from .statistics import FiniteStatistic, LinearStatistic, max_tau, product_stat
from .words import BLACKSTAR, STAR, Alphabet, Sentence, Word, norm_r, reverse

Step = Callable[[Any, Sentence], "tuple[Any, Hashable]"]


class Diary:
    """A diary ``D`` with ``D(w1..wi) = (entry(w1), entry(w1 w2), ..., entry(w1..wi))``.

    ``guarantee`` is the constant M with ``d(D a, D b) >= d(a, b) / M`` on
    pairs satisfying the criterion the diary was built for (None for
    diaries that carry no such promise).
    """

    def __init__(
        self,
        name: str,
        step: Step,
        initial: Any = None,
        guarantee: Fraction | None = None,
        params: Any = None,
        memo_size: int = 1 << 16,
    ):
        self.name = name
        self.step = step
        self.initial = initial
        self.guarantee = guarantee
        self.params = params
        self._memo: dict[Sentence, tuple[Any, Hashable]] = {}
        self._memo_size = memo_size
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"Diary({self.name!r}, M={self.guarantee})"

    def _states(self, alpha: Sentence) -> list[tuple[Any, Hashable]]:
        alpha = tuple(alpha)
        out = []
        state = self.initial
        start = 0
        # resume from the longest memoised prefix
        with self._lock:
            for i in range(len(alpha), 0, -1):
                hit = self._memo.get(alpha[:i])
                if hit is not None:
                    start = i
                    break
            cached = [self._memo[alpha[:i]] for i in range(1, start + 1)]
        out.extend(cached)
        if cached:
            state = cached[-1][0]
        fresh = []
        for i in range(start + 1, len(alpha) + 1):
            state, entry = self.step(state, alpha[:i])
            out.append((state, entry))
            fresh.append((alpha[:i], (state, entry)))
        if fresh:
            with self._lock:
                if len(self._memo) + len(fresh) > self._memo_size:
                    self._memo.clear()
                self._memo.update(fresh)
        return out

    def __call__(self, alpha: Sentence) -> tuple:
        return tuple(entry for _, entry in self._states(alpha))

    def entry(self, alpha: Sentence) -> Hashable:
        if not alpha:
            raise ValueError("the empty sentence has no entry")
        return self._states(alpha)[-1][1]

    def clear_memo(self) -> None:
        with self._lock:
            self._memo.clear()


# -- diaries from finite statistics ---------------------------------------------


def diary_from_finite(stat: FiniteStatistic) -> Diary:
    return Diary(f"diary[{stat.name}]", lambda state, prefix: (None, stat(prefix)))


def upsilon_guarantee(delta, J: int) -> Fraction:
    return Fraction(2 * J) / (1 - Fraction(delta))


def upsilon_diary(stats: Sequence[FiniteStatistic], delta, J: int) -> Diary:
    stat = product_stat(stats)
    d = diary_from_finite(stat)
    d.guarantee = upsilon_guarantee(delta, J)
    d.params = {"delta": Fraction(delta), "J": J}
    return d


# -- Alice's Diary ----------------------------------------------------------------


@dataclass(frozen=True)
class DiaryProvenance:
    """Where every recorded event landed.

    Events are ``(day, position)`` with both coordinates 1-based; pages are
    ``(chapter, page)`` likewise.  ``leftover`` holds the number of events
    still unrecorded at the end of each day.
    """

    kappa: int
    pages: tuple  # pages[j-1][k-1] = source event of page k of chapter j
    leftover: tuple

    @property
    def index(self) -> dict:
        return {ev: (j + 1, k + 1) for j, chapter in enumerate(self.pages) for k, ev in enumerate(chapter)}

    def to_json(self) -> list:
        return [
            {"chapter": j + 1, "page": k + 1, "day": ev[0], "position": ev[1]}
            for j, chapter in enumerate(self.pages)
            for k, ev in enumerate(chapter)
        ]


def alice_step(kappa: int):
    """Step function of Alice's Diary; the state is the unrecorded leftover word."""
    if kappa < 1:
        raise ValueError("kappa must be a positive integer")

    def step(leftover: Word, prefix: Sentence):
        r = leftover + tuple(prefix[-1])
        cut = max(len(r) - kappa, 0)
        return r[:cut], reverse(r[cut:])

    return step


def alice_diary(kappa: int, alpha: Sentence) -> tuple[Sentence, DiaryProvenance]:
    """Alice records the most recent unrecorded event first, ``kappa`` pages a day."""
    if kappa < 1:
        raise ValueError("kappa must be a positive integer")
    leftover: list = []
    chapters, pages, sizes = [], [], []
    for day, w in enumerate(alpha, start=1):
        if not w:
            raise ValueError(f"day {day} has an empty word")
        r = leftover + [(a, (day, pos)) for pos, a in enumerate(w, start=1)]
        cut = max(len(r) - kappa, 0)
        recorded = r[cut:][::-1]
        leftover = r[:cut]
        chapters.append(tuple(a for a, _ in recorded))
        pages.append(tuple(ev for _, ev in recorded))
        sizes.append(len(leftover))
    return tuple(chapters), DiaryProvenance(kappa, tuple(pages), tuple(sizes))


def alice(kappa: int) -> Diary:
    return Diary(f"AD_{kappa}", alice_step(kappa), initial=())


def is_recorded(prov: DiaryProvenance, day: int, pos: int) -> tuple[int, int] | None:
    for j, chapter in enumerate(prov.pages):
        for k, ev in enumerate(chapter):
            if ev == (day, pos):
                return (j + 1, k + 1)
    return None


def alice_trace_json(alphabet: Alphabet, alpha: Sentence, kappa: int) -> dict:
    chapters, prov = alice_diary(kappa, alpha)
    return {
        "kappa": kappa,
        "input": alphabet.to_json(alpha),
        "chapters": [alphabet.encode_word(v) for v in chapters],
        "provenance": prov.to_json(),
    }


# -- the interleaving construction --------------------------------------------------


@dataclass(frozen=True)
class VirgoDiaryParams:
    tau: Fraction
    omega: int
    U: Fraction
    V: Fraction
    kappa: int
    delta: Fraction
    J: int
    N: Fraction
    eps: Fraction

    @property
    def thresholds(self) -> tuple[Fraction, ...]:
        d = 1 - self.delta
        return (
            16 * self.U / d,
            64 * self.J * self.tau / d,
            16 * self.V / d,
            64 * self.J * (self.tau + self.eps) / d,
        )


def smallest_natural_at_least(x: Fraction) -> int:
    return max(1, math.ceil(x))


def virgo_params(stats: Sequence[LinearStatistic], delta, J: int, N, eps) -> VirgoDiaryParams:
    delta, N, eps = Fraction(delta), Fraction(N), Fraction(eps)
    if not 0 <= delta < 1 or J < 1 or N <= 0 or eps <= 0:
        raise ValueError("need 0 <= delta < 1, J >= 1, N > 0, eps > 0")
    tau = max_tau(stats)
    omega = smallest_natural_at_least(tau / eps)
    U = 12 * tau * J / (1 - delta) + omega * N + 1
    V = 12 * (tau + eps) * J / (1 - delta) + omega * N + 1
    p = VirgoDiaryParams(tau, omega, U, V, 0, delta, J, N, eps)
    kappa = math.floor(max(p.thresholds)) + 1
    return VirgoDiaryParams(tau, omega, U, V, kappa, delta, J, N, eps)


def hat_stat(stat: LinearStatistic, prefix: Sentence, omega: int) -> Word:
    return reverse(norm_r(stat.limit(prefix), omega * len(prefix[-1])))


def interleave_word(prefix: Sentence, stats: Sequence[LinearStatistic], omega: int) -> Word:
    """The starred word standing for the last day of ``prefix``.

    It is BLACKSTAR followed by ``omega * len(w)`` column letters; column t
    is ``(w^omega[t], hat_1[t], ..., hat_K[t])``.
    """
    w = prefix[-1]
    rows = [tuple(w) * omega] + [hat_stat(s, prefix, omega) for s in stats]
    return (BLACKSTAR,) + tuple(zip(*rows))


def interleave_embed(alpha: Sentence, stats: Sequence[LinearStatistic], eps) -> Sentence:
    omega = smallest_natural_at_least(max_tau(stats) / Fraction(eps))
    return tuple(interleave_word(alpha[: i + 1], stats, omega) for i in range(len(alpha)))


def virgo_guarantee(delta, J: int) -> Fraction:
    d = 1 - Fraction(delta)
    return max(Fraction(3), 8 / d, 32 * J / d)


def virgo_diary(stats: Sequence[LinearStatistic], delta, J: int, N, eps, kappa: int | None = None) -> Diary:
    """``AD_kappa`` composed with the interleaving map.

    ``kappa`` may be overridden for experiments; the attached guarantee is
    only backed by the computed value.
    """
    stats = tuple(stats)
    params = virgo_params(stats, delta, J, N, eps)
    k = params.kappa if kappa is None else kappa
    ad = alice_step(k)
    omega = params.omega

    def step(leftover, prefix):
        return ad(leftover, (interleave_word(prefix, stats, omega),))

    d = Diary(f"virgo[kappa={k}]", step, initial=(), guarantee=virgo_guarantee(params.delta, J), params=params)
    d.kappa = k
    return d


def taurus_inner_N(J: int, N, eps) -> Fraction:
    return Fraction(N) + 6 * J * J * Fraction(eps)


def taurus_guarantee(J: int) -> Fraction:
    return max(Fraction(3), virgo_guarantee(0, J))


def taurus_diary(stats: Sequence[LinearStatistic], J: int, N, eps) -> Diary:
    d = virgo_diary(stats, 0, J, taurus_inner_N(J, N, eps), eps)
    d.name = "taurus" + d.name[len("virgo") :]
    d.guarantee = taurus_guarantee(J)
    return d


def pair_diaries(first: Diary, second: Diary, name: str | None = None) -> Diary:
    """Entry ``(first entry, second entry)``; the guarantee is the larger one."""

    def step(state, prefix):
        s1, e1 = first.step(state[0], prefix)
        s2, e2 = second.step(state[1], prefix)
        return (s1, s2), (e1, e2)

    g = None
    if first.guarantee is not None and second.guarantee is not None:
        g = max(first.guarantee, second.guarantee)
    d = Diary(name or f"({first.name}, {second.name})", step, (first.initial, second.initial), g)
    d.parts = (first, second)
    return d


def combined_diary(
    finite_stats: Sequence[FiniteStatistic],
    linear_stats: Sequence[LinearStatistic],
    J_finite: int,
    J_linear: int,
    N,
    eps,
) -> Diary:
    return pair_diaries(
        upsilon_diary(finite_stats, 0, J_finite),
        taurus_diary(linear_stats, J_linear, N, eps),
        name="combined",
    )
