"""Corpus-level BLEU and chrF with every intermediate count exposed.

Both metrics reduce each segment to a row of integer sufficient statistics;
corpus scores are computed from column sums. The bootstrap in
``geez_forge.stats_sig`` reuses this by summing resampled rows.

BLEU tokenization: every Unicode punctuation character (categories P*,
including ፡ and ።) is detached as its own token, then text is split on
whitespace. If a corpus-level n-gram precision is zero it is floored to
``1 / (2 * hyp_ngram_count)`` for that order. An order for which neither side
has any n-grams counts as precision 1; one where only the hypothesis side is
empty counts as 0 and the score is 0.

chrF: whitespace is removed, character n-grams of order 1..max_n are counted,
and the score is the mean per-order F-beta over the orders where either side
has at least one n-gram.
"""
from __future__ import annotations

import json
import math
import unicodedata
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .errors import DataError

BLEU_ORDER = 4
CHRF_ORDER = 6
CHRF_BETA = 2.0


def bleu_tokenize(text: str) -> list[str]:
    out = []
    for ch in text:
        if unicodedata.category(ch).startswith("P"):
            out.append(f" {ch} ")
        else:
            out.append(ch)
    return "".join(out).split()


def _ngram_counts(seq: Sequence, n: int) -> Counter:
    return Counter(tuple(seq[i:i + n]) for i in range(len(seq) - n + 1))


def _check_pairs(hypotheses: Sequence[str], references: Sequence[str]) -> None:
    if len(hypotheses) != len(references):
        raise DataError(f"length mismatch: {len(hypotheses)} hypotheses vs {len(references)} references")
    if not hypotheses:
        raise DataError("empty hypothesis/reference lists")


@dataclass(frozen=True)
class BleuScore:
    score: float
    precisions: tuple[float, ...]
    brevity_penalty: float
    hyp_length: int
    ref_length: int
    matches: tuple[int, ...]
    totals: tuple[int, ...]

    def __str__(self):
        return f"BLEU = {self.score:.2f}"

    def to_dict(self) -> dict:
        return {"metric": "bleu", **asdict(self)}


@dataclass(frozen=True)
class ChrfScore:
    score: float
    beta: float
    max_n: int
    per_order_f: tuple[float, ...]
    per_order_precision: tuple[float, ...]
    per_order_recall: tuple[float, ...]
    orders_present: tuple[bool, ...]

    def __str__(self):
        return f"chrF = {self.score:.2f}"

    def to_dict(self) -> dict:
        return {"metric": "chrf", **asdict(self)}


def score_json(score: BleuScore | ChrfScore) -> str:
    return json.dumps(score.to_dict(), ensure_ascii=False, indent=2) + "\n"


# --- BLEU ------------------------------------------------------------------

def bleu_segment_stats(hypotheses: Sequence[str], references: Sequence[str], max_n: int = BLEU_ORDER) -> np.ndarray:
    """Rows of ``[matches_1..n, hyp_totals_1..n, ref_totals_1..n, hyp_len, ref_len]``."""
    _check_pairs(hypotheses, references)
    rows = np.zeros((len(hypotheses), 3 * max_n + 2), dtype=np.int64)
    for i, (h, r) in enumerate(zip(hypotheses, references)):
        ht, rt = bleu_tokenize(h), bleu_tokenize(r)
        for n in range(1, max_n + 1):
            hc, rc = _ngram_counts(ht, n), _ngram_counts(rt, n)
            rows[i, n - 1] = sum(min(k, rc[g]) for g, k in hc.items())
            rows[i, max_n + n - 1] = max(len(ht) - n + 1, 0)
            rows[i, 2 * max_n + n - 1] = max(len(rt) - n + 1, 0)
        rows[i, 3 * max_n] = len(ht)
        rows[i, 3 * max_n + 1] = len(rt)
    return rows


def bleu_from_stats(stats: Sequence[int], max_n: int = BLEU_ORDER) -> BleuScore:
    """BLEU from column sums of :func:`bleu_segment_stats`."""
    stats = [int(x) for x in stats]
    matches, totals, ref_totals = stats[:max_n], stats[max_n:2 * max_n], stats[2 * max_n:3 * max_n]
    hyp_len, ref_len = stats[3 * max_n], stats[3 * max_n + 1]
    precisions = []
    collapsed = False
    for m, t, rt in zip(matches, totals, ref_totals):
        if t == 0:
            if rt > 0:
                collapsed = True
            precisions.append(0.0 if rt > 0 else 1.0)
        elif m == 0:
            precisions.append(1.0 / (2 * t))
        else:
            precisions.append(m / t)
    if hyp_len >= ref_len:
        bp = 1.0
    elif hyp_len == 0:
        bp = 0.0
    else:
        bp = math.exp(1.0 - ref_len / hyp_len)
    if collapsed or bp == 0.0:
        score = 0.0
    else:
        score = 100.0 * bp * math.exp(sum(math.log(p) for p in precisions) / max_n)
    return BleuScore(
        score=score,
        precisions=tuple(precisions),
        brevity_penalty=bp,
        hyp_length=hyp_len,
        ref_length=ref_len,
        matches=tuple(matches),
        totals=tuple(totals),
    )


def corpus_bleu(hypotheses: Sequence[str], references: Sequence[str]) -> BleuScore:
    """Corpus BLEU (n = 1..4) against a single reference per segment.

    ``precisions`` are the values entering the geometric mean, i.e. after the
    zero-floor; the raw clipped counts are in ``matches`` and ``totals``.
    """
    return bleu_from_stats(bleu_segment_stats(hypotheses, references).sum(axis=0))


# --- chrF ------------------------------------------------------------------

def _strip_ws(text: str) -> str:
    return "".join(text.split())


def chrf_segment_stats(hypotheses: Sequence[str], references: Sequence[str], max_n: int = CHRF_ORDER) -> np.ndarray:
    """Rows of ``[matches_1..n, hyp_totals_1..n, ref_totals_1..n]``."""
    _check_pairs(hypotheses, references)
    rows = np.zeros((len(hypotheses), 3 * max_n), dtype=np.int64)
    for i, (h, r) in enumerate(zip(hypotheses, references)):
        hs, rs = _strip_ws(h), _strip_ws(r)
        for n in range(1, max_n + 1):
            hc, rc = _ngram_counts(hs, n), _ngram_counts(rs, n)
            rows[i, n - 1] = sum(min(k, rc[g]) for g, k in hc.items())
            rows[i, max_n + n - 1] = max(len(hs) - n + 1, 0)
            rows[i, 2 * max_n + n - 1] = max(len(rs) - n + 1, 0)
    return rows


def f_beta(precision: float, recall: float, beta: float) -> float:
    b2 = beta * beta
    denom = b2 * precision + recall
    return (1 + b2) * precision * recall / denom if denom > 0 else 0.0


def chrf_from_stats(stats: Sequence[int], beta: float = CHRF_BETA, max_n: int = CHRF_ORDER) -> ChrfScore:
    if beta <= 0:
        raise DataError("beta must be positive")
    stats = [int(x) for x in stats]
    matches, hyp_tot, ref_tot = stats[:max_n], stats[max_n:2 * max_n], stats[2 * max_n:3 * max_n]
    ps, rs, fs, present = [], [], [], []
    for m, h, r in zip(matches, hyp_tot, ref_tot):
        p = m / h if h else 0.0
        rec = m / r if r else 0.0
        ps.append(p)
        rs.append(rec)
        fs.append(f_beta(p, rec, beta))
        present.append(h > 0 or r > 0)
    used = [f for f, ok in zip(fs, present) if ok]
    # both sides empty of characters: trivially identical
    score = 100.0 * sum(used) / len(used) if used else 100.0
    return ChrfScore(
        score=score,
        beta=beta,
        max_n=max_n,
        per_order_f=tuple(fs),
        per_order_precision=tuple(ps),
        per_order_recall=tuple(rs),
        orders_present=tuple(present),
    )


def corpus_chrf(
    hypotheses: Sequence[str], references: Sequence[str], beta: float = CHRF_BETA, max_n: int = CHRF_ORDER
) -> ChrfScore:
    stats = chrf_segment_stats(hypotheses, references, max_n)
    return chrf_from_stats(stats.sum(axis=0), beta, max_n)
