"""The hexagonal Coxeter group mapped into a product of two bounded-valence trees.

``g`` goes to ``(F_A g, F_B g)`` in the sentence-tree squared, and the
paired diary below maps each component into a word-tree.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import coxeter
from .criteria import check_leo, check_virgo
from .diary import Diary, pair_diaries, upsilon_diary, virgo_diary
from .statistics import base10_length_linear, last_letter, trunc_linear
from .words import sentence_tree_distance, split_at_divergence

# Pairs closer than this carry no lower-bound claim.
LOWER_BOUND_FROM = 12
FULL_ENUMERATION_LIMIT = 10**6


@dataclass(frozen=True)
class CoxeterEmbeddingParams:
    J_fin: int = 2
    delta: Fraction = Fraction(0)
    J_lin: int = 2
    N: Fraction = Fraction(18)
    eps: Fraction = Fraction(1)
    tau: int = 12

    @property
    def finite_stats(self) -> tuple:
        return (last_letter(coxeter.ALPHABET),)

    @property
    def linear_stats(self) -> tuple:
        return (trunc_linear(self.tau, coxeter.ALPHABET), base10_length_linear(self.tau))


def coxeter_diary(params: CoxeterEmbeddingParams = CoxeterEmbeddingParams(), kappa: int | None = None) -> Diary:
    fin = upsilon_diary(params.finite_stats, params.delta, params.J_fin)
    lin = virgo_diary(params.linear_stats, params.delta, params.J_lin, params.N, params.eps, kappa=kappa)
    d = pair_diaries(fin, lin, name="coxeter_embedding")
    d.kappa = lin.kappa
    d.params = params
    return d


def embed(g: Sequence[str], diary: Diary) -> tuple:
    return diary(coxeter.F_A(g)), diary(coxeter.F_B(g))


def classify_pair(alpha, beta, params: CoxeterEmbeddingParams) -> str:
    """Which step of the lower-bound argument covers this sentence pair.

    "height" when the tails are lopsided (min(m, n) < (m+n)/3), otherwise
    the first of "leo" and "virgo" whose checker certifies the pair, and
    "none" when neither does.
    """
    if tuple(alpha) == tuple(beta):
        return "equal"
    dec = split_at_divergence(alpha, beta)
    if 3 * min(dec.m, dec.n) < dec.m + dec.n:
        return "height"
    if check_leo(alpha, beta, params.finite_stats, params.J_fin) is not None:
        return "leo"
    w = check_virgo(alpha, beta, params.linear_stats, params.delta, params.J_lin, params.N, params.eps)
    return "virgo" if w is not None else "none"


@dataclass
class PairRow:
    g: tuple
    h: tuple
    d_G: int
    d_F: int
    d_DF: int
    criterion: str

    def csv_fields(self) -> list:
        return [coxeter.format_element(self.g), coxeter.format_element(self.h), self.d_G, self.d_F, self.d_DF, self.criterion]


@dataclass
class DistortionReport:
    rows: list | None  # None when only the tallies were kept
    M: Fraction
    kappa: int
    radius: int
    sampled: bool
    seed: int | None
    ball_size: int
    pairs: int = 0
    max_distortion: float | None = None
    criteria: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    failure_counts: dict = field(default_factory=dict)

    def add(self, row: PairRow, keep: bool) -> None:
        self.pairs += 1
        if keep:
            self.rows.append(row)
        self.criteria[row.criterion] = self.criteria.get(row.criterion, 0) + 1
        if row.d_G >= LOWER_BOUND_FROM:
            ratio = row.d_G / row.d_DF if row.d_DF else math.inf
            if self.max_distortion is None or ratio > self.max_distortion:
                self.max_distortion = ratio
        for why in pair_failures(row, self.M):
            self.failure_counts[why] = self.failure_counts.get(why, 0) + 1
            if len(self.failures) < 100:
                self.failures.append((coxeter.format_element(row.g), coxeter.format_element(row.h), why))

    @property
    def ok(self) -> bool:
        return not self.failure_counts

    def summary(self) -> dict:
        md = self.max_distortion
        return {
            "M": str(self.M),
            "kappa": self.kappa,
            "radius": self.radius,
            "ball_size": self.ball_size,
            "pairs": self.pairs,
            "sampled": self.sampled,
            "seed": self.seed,
            "lower_bound_from": LOWER_BOUND_FROM,
            "max_distortion": None if md is None else (md if math.isfinite(md) else "inf"),
            "distortion_bound": str(2 * self.M),
            "criteria": dict(sorted(self.criteria.items())),
            "failures": dict(sorted(self.failure_counts.items())),
            "ok": self.ok,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["g", "g'", "d_G", "d_F", "d_DF", "criterion_used"])
        for r in self.rows:
            w.writerow(r.csv_fields())
        return buf.getvalue()

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"


def sample_pairs(elements: Sequence, n_pairs: int | None, seed: int | None):
    """All unordered pairs when that is at most ``FULL_ENUMERATION_LIMIT`` (or n_pairs is None); else a seeded sample."""
    total = len(elements) * (len(elements) - 1) // 2
    if n_pairs is None or len(elements) ** 2 <= FULL_ENUMERATION_LIMIT:
        return itertools.combinations(elements, 2), False
    rng = random.Random(seed)
    pairs = []
    seen = set()
    while len(pairs) < min(n_pairs, total):
        i, j = rng.randrange(len(elements)), rng.randrange(len(elements))
        if i == j:
            continue
        key = (min(i, j), max(i, j))
        if key in seen:
            continue
        seen.add(key)
        pairs.append((elements[key[0]], elements[key[1]]))
    return pairs, True


def measure_pair(g, h, cache: dict, diary: Diary, params: CoxeterEmbeddingParams, classify: bool = True) -> PairRow:
    def lookup(x):
        hit = cache.get(x)
        if hit is None:
            fa, fb = coxeter.F_A(x), coxeter.F_B(x)
            hit = cache[x] = (fa, fb, diary(fa), diary(fb))
        return hit

    fa, fb, da, db = lookup(g)
    fa2, fb2, da2, db2 = lookup(h)
    d_G = coxeter.word_metric(g, h)
    dA, dB = sentence_tree_distance(fa, fa2), sentence_tree_distance(fb, fb2)
    d_DF = sentence_tree_distance(da, da2) + sentence_tree_distance(db, db2)
    crit = "skipped"
    if classify and d_G >= LOWER_BOUND_FROM:
        # the dominant component carries at least half the distance
        crit = classify_pair(fa, fa2, params) if dA >= dB else classify_pair(fb, fb2, params)
    return PairRow(g, h, d_G, dA + dB, d_DF, crit)


def pair_failures(row: PairRow, M: Fraction) -> list:
    out = []
    if row.d_F != row.d_G:
        out.append("d_F != d_G")
    if row.d_DF > row.d_F:
        out.append("d_DF > d_F")
    if row.d_G >= LOWER_BOUND_FROM and 2 * M * row.d_DF < row.d_G:
        out.append("d_DF < d_G/(2M)")
    if row.d_G >= LOWER_BOUND_FROM and row.criterion == "none":
        out.append("no criterion applies")
    return out


def distortion_report(
    radius: int,
    n_pairs: int | None = None,
    seed: int | None = 0,
    pairs: Sequence | None = None,
    diary: Diary | None = None,
    classify: bool = True,
    cap: int = coxeter.DEFAULT_BALL_CAP,
    keep_rows: bool = True,
) -> DistortionReport:
    params = CoxeterEmbeddingParams()
    diary = diary or coxeter_diary(params)
    elements = coxeter.ball(radius, cap)
    if pairs is None:
        pairs, sampled = sample_pairs(elements, n_pairs, seed)
    else:
        sampled = True
    cache: dict = {}
    report = DistortionReport([] if keep_rows else None, diary.guarantee, diary.kappa, radius, sampled, seed, len(elements))
    for g, h in pairs:
        report.add(measure_pair(g, h, cache, diary, params, classify), keep_rows)
    if report.pairs == 0:
        raise ValueError("no pairs to measure")
    return report
