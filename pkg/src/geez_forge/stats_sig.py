"""Paired bootstrap significance testing with Bonferroni correction.

Resample index sets come from :class:`~geez_forge.rng.Lcg64`, the same
documented generator used for corpus splits. All ``n_resamples`` index sets
are drawn up front, in order, so the result does not depend on how the
per-resample scoring is evaluated.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, DataError
from .metrics import bleu_from_stats, bleu_segment_stats, chrf_from_stats, chrf_segment_stats
from .rng import Lcg64

DEFAULT_RESAMPLES = 1000
DEFAULT_SEED = 42
DEFAULT_ALPHA = 0.05

_METRICS: dict[str, tuple[Callable, Callable]] = {
    "bleu": (bleu_segment_stats, bleu_from_stats),
    "chrf": (chrf_segment_stats, chrf_from_stats),
}


@dataclass(frozen=True)
class SignificanceResult:
    metric_name: str
    score_a: float
    score_b: float
    delta: float
    p_value: float
    n_resamples: int
    seed: int
    alpha: float
    adjusted_alpha: float
    significant: bool
    label: str = ""

    def render(self) -> str:
        mark = "*" if self.significant else " "
        name = f"{self.label} " if self.label else ""
        return (
            f"{mark} {name}{self.metric_name}: A={self.score_a:.2f} B={self.score_b:.2f} "
            f"delta={self.delta:+.2f} p={self.p_value:.4f} "
            f"(alpha={self.alpha:g}, adjusted_alpha={self.adjusted_alpha:g}, "
            f"resamples={self.n_resamples}, seed={self.seed})"
        )


def bonferroni(alpha: float, m: int) -> float:
    """Per-test threshold ``alpha / m`` for a family of ``m`` tests."""
    if not 0 < alpha < 1:
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 1:
        raise ConfigError(f"family size must be an integer >= 1, got {m!r}")
    return alpha / m


def resample_counts(n: int, n_resamples: int, seed: int) -> np.ndarray:
    """``(n_resamples, n)`` matrix of how often each segment is drawn per resample."""
    rng = Lcg64(seed)
    counts = np.zeros((n_resamples, n), dtype=np.int64)
    for r in range(n_resamples):
        for i in rng.indices(n, n):
            counts[r, i] += 1
    return counts


def paired_bootstrap(
    hyp_a: Sequence[str],
    hyp_b: Sequence[str],
    refs: Sequence[str],
    metric: str = "chrf",
    n_resamples: int = DEFAULT_RESAMPLES,
    seed: int = DEFAULT_SEED,
    alpha: float = DEFAULT_ALPHA,
    label: str = "",
) -> SignificanceResult:
    """Two-sided paired bootstrap test of system B against system A.

    ``p = min(1, 2 * min(P(delta <= 0), P(delta >= 0)))`` over resampled
    deltas ``score_b - score_a``. The result is uncorrected: its
    ``adjusted_alpha`` equals ``alpha`` until :func:`apply_correction` runs.
    """
    if metric not in _METRICS:
        raise ConfigError(f"unknown metric {metric!r}; expected one of {sorted(_METRICS)}")
    if not (len(hyp_a) == len(hyp_b) == len(refs)):
        raise DataError(f"length mismatch: {len(hyp_a)}, {len(hyp_b)}, {len(refs)}")
    if len(refs) < 2:
        raise DataError("paired bootstrap needs at least two segments")
    if n_resamples < 1:
        raise ConfigError("n_resamples must be >= 1")
    bonferroni(alpha, 1)

    seg_stats, from_stats = _METRICS[metric]
    stats_a = seg_stats(hyp_a, refs)
    stats_b = seg_stats(hyp_b, refs)
    score_a = from_stats(stats_a.sum(axis=0)).score
    score_b = from_stats(stats_b.sum(axis=0)).score

    counts = resample_counts(len(refs), n_resamples, seed)
    sums_a = counts @ stats_a
    sums_b = counts @ stats_b
    deltas = np.array([from_stats(b).score - from_stats(a).score for a, b in zip(sums_a, sums_b)])
    frac_le = np.count_nonzero(deltas <= 0) / n_resamples
    frac_ge = np.count_nonzero(deltas >= 0) / n_resamples
    p = min(1.0, 2.0 * min(frac_le, frac_ge))
    return SignificanceResult(
        metric_name=metric,
        score_a=score_a,
        score_b=score_b,
        delta=score_b - score_a,
        p_value=p,
        n_resamples=n_resamples,
        seed=seed,
        alpha=alpha,
        adjusted_alpha=alpha,
        significant=p < alpha,
        label=label,
    )


def apply_correction(
    results: Sequence[SignificanceResult], alpha: float = DEFAULT_ALPHA, family_size: int | None = None
) -> list[SignificanceResult]:
    """Treat ``results`` as one family and apply the Bonferroni threshold to each.

    ``family_size`` defaults to ``len(results)``; pass it explicitly when the
    comparisons submitted are only part of a larger family.
    """
    if not results:
        raise DataError("no results to correct")
    m = len(results) if family_size is None else family_size
    if m < len(results):
        raise ConfigError(f"family size {m} is smaller than the {len(results)} results submitted")
    adjusted = bonferroni(alpha, m)
    return [replace(r, alpha=alpha, adjusted_alpha=adjusted, significant=r.p_value < adjusted) for r in results]


def results_json(results: Sequence[SignificanceResult]) -> str:
    return json.dumps([asdict(r) for r in results], ensure_ascii=False, indent=2) + "\n"


def render_results(results: Sequence[SignificanceResult]) -> str:
    return "".join(r.render() + "\n" for r in results)
