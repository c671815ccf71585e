"""Decision procedures for the four divergence criteria on sentence pairs.

Each checker returns a :class:`CriterionWitness` naming the index ``j`` and
the statistic that separated the two truncations, or ``None``.  Indices are
searched in ascending ``j`` and then in statistic declaration order.

Indices are capped at ``min(m, n)``: both truncations must actually have
``p + j`` words for the comparison to be about the same day.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Sequence

from .statistics import FiniteStatistic, LinearStatistic
from .words import Sentence, awl_or_zero, split_at_divergence


@dataclass(frozen=True)
class CriterionWitness:
    criterion: str
    j: int
    stat_index: int
    stat_name: str
    value_a: Hashable
    value_b: Hashable
    level: int | None = None  # the c at which a linear statistic was evaluated
    clauses: dict = field(default_factory=dict)


def _admissible_j(delta, J: int, m: int, n: int) -> int:
    bound = Fraction(delta) * min(m, n) + J
    return min(math.floor(bound), min(m, n))


def _check_delta(delta) -> Fraction:
    delta = Fraction(delta)
    if not 0 <= delta < 1:
        raise ValueError("delta must lie in [0, 1)")
    return delta


def _decompose(alpha: Sentence, beta: Sentence):
    if tuple(alpha) == tuple(beta):
        raise ValueError("criteria are defined for distinct sentences")
    return split_at_divergence(alpha, beta)


def check_upsilon(
    alpha: Sentence, beta: Sentence, stats: Sequence[FiniteStatistic], delta, J: int
) -> CriterionWitness | None:
    delta = _check_delta(delta)
    dec = _decompose(alpha, beta)
    for j in range(1, _admissible_j(delta, J, dec.m, dec.n) + 1):
        a_pref, b_pref = alpha[: dec.p + j], beta[: dec.p + j]
        for k, stat in enumerate(stats):
            va, vb = stat(a_pref), stat(b_pref)
            if va != vb:
                return CriterionWitness("upsilon", j, k, stat.name, va, vb)
    return None


def check_leo(alpha: Sentence, beta: Sentence, stats: Sequence[FiniteStatistic], J: int) -> CriterionWitness | None:
    w = check_upsilon(alpha, beta, stats, 0, J)
    if w is None:
        return None
    return CriterionWitness("leo", w.j, w.stat_index, w.stat_name, w.value_a, w.value_b)


def _tail_awls(alpha: Sentence, beta: Sentence, p: int, j: int) -> tuple[Fraction, Fraction]:
    # An empty tail carries no letters; its AWL is taken as 0.
    return awl_or_zero(alpha[p + j :]), awl_or_zero(beta[p + j :])


def _linear_separation(alpha, beta, p: int, j: int, stats: Sequence[LinearStatistic], c: int):
    a_pref, b_pref = alpha[: p + j], beta[: p + j]
    for k, stat in enumerate(stats):
        va, vb = stat.at(c, a_pref), stat.at(c, b_pref)
        if va != vb:
            return k, stat, va, vb
    return None


def check_virgo(
    alpha: Sentence, beta: Sentence, stats: Sequence[LinearStatistic], delta, J: int, N, eps
) -> CriterionWitness | None:
    delta = _check_delta(delta)
    N, eps = Fraction(N), Fraction(eps)
    dec = _decompose(alpha, beta)
    if min(dec.m, dec.n) < 1:
        raise ValueError("virgo needs both tails nonempty (min(m, n) >= 1)")
    p, c = dec.p, dec.m + dec.n
    for j in range(1, _admissible_j(delta, J, dec.m, dec.n) + 1):
        awl_a, awl_b = _tail_awls(alpha, beta, p, j)
        if awl_a > N or awl_b > N:
            continue
        u, u2 = alpha[p + j - 1], beta[p + j - 1]
        if len(u) >= eps * c:
            m2 = "long_a"
        elif len(u2) >= eps * c:
            m2 = "long_b"
        elif u != u2:
            m2 = "differ"
        else:
            continue
        hit = _linear_separation(alpha, beta, p, j, stats, c)
        if hit is None:
            continue
        k, stat, va, vb = hit
        clauses = {"M1": (awl_a, awl_b), "M2": m2, "M3": stat.name}
        return CriterionWitness("virgo", j, k, stat.name, va, vb, level=c, clauses=clauses)
    return None


def check_taurus(
    alpha: Sentence, beta: Sentence, stats: Sequence[LinearStatistic], J: int, N, eps
) -> CriterionWitness | None:
    N, eps = Fraction(N), Fraction(eps)
    dec = _decompose(alpha, beta)
    p, c = dec.p, dec.m + dec.n
    limit = eps * c

    def short(jj: int) -> bool:
        return len(alpha[p + jj - 1]) <= limit and len(beta[p + jj - 1]) <= limit

    for j in range(1, min(J, dec.m, dec.n) + 1):
        awl_a, awl_b = _tail_awls(alpha, beta, p, j)
        if awl_a > N or awl_b > N:
            continue
        separated = {}
        ok = True
        for jp in range(1, j + 1):
            if not all(short(jj) for jj in range(jp + 1, j + 1)):
                continue  # exempted by a long word after jp
            hit = _linear_separation(alpha, beta, p, jp, stats, c)
            if hit is None:
                ok = False
                break
            separated[jp] = hit
        if not ok:
            continue
        k, stat, va, vb = separated[j]
        clauses = {"T1": (awl_a, awl_b), "T2": sorted(separated)}
        return CriterionWitness("taurus", j, k, stat.name, va, vb, level=c, clauses=clauses)
    return None


def check_taurus_strong(
    alpha: Sentence, beta: Sentence, stats: Sequence[LinearStatistic], J: int, N
) -> bool:
    """The stronger variant where every j' <= j must be separated."""
    N = Fraction(N)
    dec = _decompose(alpha, beta)
    p, c = dec.p, dec.m + dec.n
    for j in range(1, min(J, dec.m, dec.n) + 1):
        awl_a, awl_b = _tail_awls(alpha, beta, p, j)
        if awl_a > N or awl_b > N:
            continue
        if all(_linear_separation(alpha, beta, p, jp, stats, c) for jp in range(1, j + 1)):
            return True
    return False


def reverify(witness: CriterionWitness, alpha: Sentence, beta: Sentence, stats: Sequence) -> bool:
    """Re-evaluate the cited statistic on the cited truncations."""
    p = split_at_divergence(alpha, beta).p
    stat = stats[witness.stat_index]
    a_pref, b_pref = alpha[: p + witness.j], beta[: p + witness.j]
    if witness.level is None:
        va, vb = stat(a_pref), stat(b_pref)
    else:
        va, vb = stat.at(witness.level, a_pref), stat.at(witness.level, b_pref)
    return va == witness.value_a and vb == witness.value_b and va != vb
