"""Property suites shared by the unit tests and the acceptance run.

Each suite returns a :class:`SuiteResult`; an empty ``failures`` list means
every generated case satisfied the property.
"""
from __future__ import annotations

import itertools
import math
import random
from collections import defaultdict
from dataclasses import dataclass, field

from treembed.criteria import check_leo, check_taurus, check_virgo
from treembed.diary import alice_diary, is_recorded, taurus_diary, upsilon_diary, virgo_diary
from treembed.statistics import base10_length_linear, last_letter, length_mod, trunc_linear
from treembed.words import STAR, awl, sentence_tree_distance, split_at_divergence, tail_sentence


@dataclass
class SuiteResult:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.checked > 0 and not self.failures

    def fail(self, case) -> None:
        if len(self.failures) < 20:
            self.failures.append(case)


# -- independent model of Alice's Diary -------------------------------------------


def stack_oracle(kappa: int, alpha) -> tuple:
    """Push every event as it happens; each evening pop up to kappa of them."""
    stack, chapters = [], []
    for w in alpha:
        stack.extend(w)
        chapter = []
        while stack and len(chapter) < kappa:
            chapter.append(stack.pop())
        chapters.append(tuple(chapter))
    return tuple(chapters)


def random_sentence(rng: random.Random, letters: str, days: int, max_len: int, min_len: int = 1) -> tuple:
    return tuple(tuple(rng.choice(letters) for _ in range(rng.randint(min_len, max_len))) for _ in range(days))


def random_starred(rng: random.Random, letters: str, days: int, max_payload: int) -> tuple:
    return tuple((STAR,) + w for w in random_sentence(rng, letters, days, max_payload, 0))


# -- recording guarantee ------------------------------------------------------------


def recorded_when_kappa_covers_tail(n_cases: int = 10_000, seed: int = 0) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult()
    while res.checked < n_cases:
        alpha = random_sentence(rng, "abc", rng.randint(1, 7), rng.choice([2, 5, 12]))
        i = rng.randint(1, len(alpha))
        k = rng.randint(1, len(alpha[i - 1]))
        N = awl(tail_sentence(alpha, i, k))
        kappa = math.ceil(N) + rng.choice([0, 0, 1, 3])
        _, prov = alice_diary(kappa, alpha)
        res.checked += 1
        if is_recorded(prov, i, k) is None:
            res.fail((alpha, i, k, kappa))
    return res


# -- equal diaries force equal letters ---------------------------------------------


def starred_words(letters: str = "ab", max_len: int = 4) -> list:
    return [(STAR,) + p for r in range(max_len) for p in itertools.product(letters, repeat=r)]


def equal_diary_exhaustive(kappa: int = 2, max_days: int = 4, max_len: int = 4) -> SuiteResult:
    """Every pair of starred sentences with equal diaries.

    Short words must agree, and letters recorded in both diaries at the same
    distance from the end of the same day sit on the same page and agree.
    """
    words = starred_words("ab", max_len)
    res = SuiteResult()
    for days in range(1, max_days + 1):
        groups = defaultdict(list)
        for alpha in itertools.product(words, repeat=days):
            chapters, prov = alice_diary(kappa, alpha)
            groups[chapters].append((alpha, prov.index))
        for members in groups.values():
            for (a, ia), (b, ib) in itertools.combinations(members, 2):
                res.checked += 1
                for d in range(days):
                    if (len(a[d]) <= kappa or len(b[d]) <= kappa) and a[d] != b[d]:
                        res.fail(("short word differs", a, b, d + 1))
                    for t in range(min(len(a[d]), len(b[d]))):
                        ea, eb = (d + 1, len(a[d]) - t), (d + 1, len(b[d]) - t)
                        if ea in ia and eb in ib:
                            if ia[ea] != ib[eb] or a[d][-1 - t] != b[d][-1 - t]:
                                res.fail(("recorded letters differ", a, b, ea))
    return res


# -- distance lower bound from two recorded clashing letters -----------------------


def clash_lower_bound(n_cases: int = 1000, seed: int = 0) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult()
    while res.checked < n_cases:
        p, m, n = rng.randint(0, 3), rng.randint(1, 6), rng.randint(1, 6)
        shared = random_starred(rng, "abc", p, 4)
        ta = random_starred(rng, "abc", m, rng.choice([2, 5, 9]))
        tb = random_starred(rng, "abc", n, rng.choice([2, 5, 9]))
        if ta[0] == tb[0]:
            continue
        alpha, beta = shared + ta, shared + tb
        j = rng.randint(1, min(m, n))
        i = rng.randint(0, min(m, n) - j)
        u, u2 = alpha[p + j - 1], beta[p + j - 1]
        clashes = [t for t in range(min(len(u), len(u2))) if u[-1 - t] != u2[-1 - t]]
        if not clashes:
            continue
        t = rng.choice(clashes)
        N = awl(tail_sentence(alpha, p + j, len(u) - t))
        N2 = awl(tail_sentence(beta, p + j, len(u2) - t))
        kappa = max(1, math.ceil(N * (m - j + 1) / (i + 1)), math.ceil(N2 * (n - j + 1) / (i + 1)))
        kappa += rng.choice([0, 0, 2])
        got = sentence_tree_distance(alice_diary(kappa, alpha)[0], alice_diary(kappa, beta)[0])
        res.checked += 1
        if got < m + n - 2 * j - 2 * i:
            res.fail((alpha, beta, j, i, t, kappa, got))
    return res


# -- constructed diaries meet their declared constants -------------------------------

GUARANTEE_J = 2
GUARANTEE_N = 3
GUARANTEE_EPS = 1
LINEAR_STATS = (trunc_linear(1), base10_length_linear(1))
FINITE_STATS = (last_letter(), length_mod(3))


def _random_pair(rng: random.Random, long_words: bool) -> tuple:
    p = rng.randint(0, 3)
    shared = random_sentence(rng, "ab", p, 3)
    m, n = rng.randint(1, 40), rng.randint(1, 40)
    ta = random_sentence(rng, "ab", m, rng.choice([1, 2, 3]))
    tb = random_sentence(rng, "ab", n, rng.choice([1, 2, 3]))
    if long_words and rng.random() < 0.3:
        # a word longer than kappa forces leftovers into later chapters
        big = tuple(rng.choice("ab") for _ in range(rng.randint(900, 1400)))
        if shared and rng.random() < 0.5:
            shared = shared[:-1] + (big,)
        else:
            ta = (big,) + ta[1:]
    return shared + ta, shared + tb


def _guarantee_suite(diary, certify, n_pairs: int, seed: int, long_words: bool) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult()
    attempts = 0
    while res.checked < n_pairs:
        attempts += 1
        if attempts > 200 * n_pairs:
            res.fail(("could not generate enough certified pairs", res.checked))
            break
        alpha, beta = _random_pair(rng, long_words)
        dec = split_at_divergence(alpha, beta)
        if alpha == beta or min(dec.m, dec.n) < 1 or certify(alpha, beta) is None:
            continue
        res.checked += 1
        image = sentence_tree_distance(diary(alpha), diary(beta))
        if image * diary.guarantee < dec.m + dec.n:
            res.fail((alpha, beta, image))
    return res


def leo_guarantee(n_pairs: int = 1000, seed: int = 0) -> SuiteResult:
    diary = upsilon_diary(FINITE_STATS, 0, GUARANTEE_J)
    return _guarantee_suite(
        diary, lambda a, b: check_leo(a, b, FINITE_STATS, GUARANTEE_J), n_pairs, seed, long_words=False
    )


def virgo_guarantee(n_pairs: int = 1000, seed: int = 0) -> SuiteResult:
    diary = virgo_diary(LINEAR_STATS, 0, GUARANTEE_J, GUARANTEE_N, GUARANTEE_EPS)
    return _guarantee_suite(
        diary,
        lambda a, b: check_virgo(a, b, LINEAR_STATS, 0, GUARANTEE_J, GUARANTEE_N, GUARANTEE_EPS),
        n_pairs,
        seed,
        long_words=True,
    )


def taurus_guarantee(n_pairs: int = 1000, seed: int = 0) -> SuiteResult:
    diary = taurus_diary(LINEAR_STATS, GUARANTEE_J, GUARANTEE_N, GUARANTEE_EPS)
    return _guarantee_suite(
        diary,
        lambda a, b: check_taurus(a, b, LINEAR_STATS, GUARANTEE_J, GUARANTEE_N, GUARANTEE_EPS),
        n_pairs,
        seed,
        long_words=True,
    )
