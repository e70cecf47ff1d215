"""Parallel-corpus ingestion, cleaning, alignment checks, splitting and statistics."""
from __future__ import annotations

import json
import os
import re
from collections import Counter
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ConfigError, DataError
from .rng import Lcg64
from .script_norm import NormalizationConfig, default_config, normalize, script_profile

DOMAINS = ("religious", "news", "health", "education", "other")

FILTERS = ("non_empty", "token_bounds", "length_ratio", "script_purity", "numeral_consistency")

_DIGIT_GROUP = re.compile(r"(?<=[0-9])[,،](?=[0-9])")
_DIGIT_RUN = re.compile(r"[0-9]+")


@dataclass(frozen=True)
class SentencePair:
    id: int
    source_text: str
    target_text: str
    domain: str | None = None

    def __post_init__(self):
        if self.domain is not None and self.domain not in DOMAINS:
            raise DataError(f"unknown domain tag {self.domain!r}; expected one of {DOMAINS}")


@dataclass(frozen=True)
class FilterConfig:
    max_tokens: int = 128
    min_tokens: int = 1
    max_length_ratio: float = 3.0
    min_target_ethiopic_fraction: float = 0.5
    require_numeral_consistency: bool = True

    def __post_init__(self):
        if self.max_length_ratio < 1:
            raise ConfigError("max_length_ratio must be >= 1")
        if not 0 <= self.min_target_ethiopic_fraction <= 1:
            raise ConfigError("min_target_ethiopic_fraction must be in [0, 1]")
        if self.min_tokens < 0 or self.max_tokens < self.min_tokens:
            raise ConfigError("token bounds must satisfy 0 <= min_tokens <= max_tokens")

    @classmethod
    def from_dict(cls, d: dict) -> "FilterConfig":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown filter config keys: {sorted(unknown)}")
        try:
            return cls(**d)
        except TypeError as e:
            raise ConfigError(str(e)) from e

    @classmethod
    def load(cls, path: str | os.PathLike) -> "FilterConfig":
        with open(path, encoding="utf-8") as f:
            try:
                return cls.from_dict(json.load(f))
            except json.JSONDecodeError as e:
                raise ConfigError(f"{path}: invalid JSON: {e}") from e


@dataclass
class CleaningReport:
    input_count: int = 0
    kept_count: int = 0
    removed_count: int = 0
    per_filter_counts: dict[str, int] = field(default_factory=lambda: dict.fromkeys(FILTERS, 0))
    removed_ids: list[int] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class DomainManifest:
    domain: str
    source_label: str = ""
    sentence_count: int = 0
    avg_len_source: float | None = None
    avg_len_target: float | None = None
    notes: str = ""


@dataclass(frozen=True)
class AlignmentVerdict:
    aligned: bool
    reasons: tuple[str, ...] = ()

    def __str__(self):
        return "aligned" if self.aligned else f"suspect({', '.join(self.reasons)})"


# --- ingestion -------------------------------------------------------------

def _read_utf8(path: str | os.PathLike) -> str:
    with open(path, "rb") as f:
        raw = f.read()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise DataError(f"{path}: invalid UTF-8 at byte offset {e.start}") from e


def _lines(text: str) -> list[str]:
    if not text:
        return []
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    return [line[:-1] if line.endswith("\r") else line for line in lines]


def read_parallel(paths: str | os.PathLike | Sequence[str | os.PathLike], format: str = "tsv") -> list[SentencePair]:
    """Read a TSV corpus (``source<TAB>target[<TAB>domain]``) or a Moses file pair.

    Blank lines are kept as empty pairs; deciding their fate is ``clean``'s job.
    """
    if format == "tsv":
        path = paths if isinstance(paths, (str, os.PathLike)) else _single(paths)
        pairs = []
        for lineno, line in enumerate(_lines(_read_utf8(path)), 1):
            cols = line.split("\t") if line else ["", ""]
            if len(cols) not in (2, 3):
                raise DataError(f"{path}:{lineno}: expected 2 or 3 tab-separated columns, got {len(cols)}")
            domain = (cols[2].strip() or None) if len(cols) == 3 else None
            try:
                pairs.append(SentencePair(len(pairs), cols[0], cols[1], domain))
            except DataError as e:
                raise DataError(f"{path}:{lineno}: {e}") from e
        return pairs
    if format == "moses":
        if isinstance(paths, (str, os.PathLike)) or len(paths) != 2:
            raise ConfigError("moses format needs exactly two paths (source, target)")
        src_path, tgt_path = paths
        src = _lines(_read_utf8(src_path))
        tgt = _lines(_read_utf8(tgt_path))
        if len(src) != len(tgt):
            raise DataError(f"line-count mismatch: {src_path} has {len(src)} lines, {tgt_path} has {len(tgt)}")
        return [SentencePair(i, s, t) for i, (s, t) in enumerate(zip(src, tgt))]
    raise ConfigError(f"unknown corpus format {format!r}")


def _single(paths):
    if len(paths) != 1:
        raise ConfigError("tsv format takes exactly one path")
    return paths[0]


def format_tsv(pairs: Iterable[SentencePair]) -> str:
    rows = []
    for p in pairs:
        cols = [p.source_text, p.target_text] + ([p.domain] if p.domain else [])
        rows.append("\t".join(cols) + "\n")
    return "".join(rows)


def write_tsv(pairs: Iterable[SentencePair], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_tsv(pairs))


# --- filters ---------------------------------------------------------------

def _tokens(text: str) -> int:
    return len(text.split())


def digit_runs(text: str) -> Counter:
    """Multiset of ASCII digit runs, with ``,``/``،`` grouping separators removed."""
    return Counter(_DIGIT_RUN.findall(_DIGIT_GROUP.sub("", text)))


def length_ratio(src_tokens: int, tgt_tokens: int) -> float:
    lo, hi = sorted((src_tokens, tgt_tokens))
    if lo == 0:
        return 1.0 if hi == 0 else float("inf")
    return hi / lo


def _failed_filters(src: str, tgt: str, cfg: FilterConfig) -> list[str]:
    failed = []
    ns, nt = _tokens(src), _tokens(tgt)
    if ns == 0 or nt == 0:
        failed.append("non_empty")
    if not all(cfg.min_tokens <= n <= cfg.max_tokens for n in (ns, nt)):
        failed.append("token_bounds")
    # ratio and purity are undefined on an empty side; non_empty already covers it
    if ns and nt and length_ratio(ns, nt) > cfg.max_length_ratio:
        failed.append("length_ratio")
    if nt and script_profile(tgt).ethiopic_fraction < cfg.min_target_ethiopic_fraction:
        failed.append("script_purity")
    if cfg.require_numeral_consistency and digit_runs(src) != digit_runs(tgt):
        failed.append("numeral_consistency")
    return failed


def clean(
    pairs: Sequence[SentencePair],
    cfg: FilterConfig | None = None,
    norm: NormalizationConfig | None = None,
) -> tuple[list[SentencePair], CleaningReport]:
    """Normalize every pair and drop the ones failing any filter.

    Kept pairs carry the normalized text and keep their input order. The
    report counts each removed pair once in ``removed_count`` and once per
    failing filter in ``per_filter_counts``.
    """
    cfg = cfg or FilterConfig()
    norm = norm if norm is not None else default_config()
    report = CleaningReport(input_count=len(pairs))
    kept = []
    for p in pairs:
        src, tgt = normalize(p.source_text, norm), normalize(p.target_text, norm)
        failed = _failed_filters(src, tgt, cfg)
        if failed:
            report.removed_ids.append(p.id)
            for name in failed:
                report.per_filter_counts[name] += 1
        else:
            kept.append(replace(p, source_text=src, target_text=tgt))
    report.kept_count = len(kept)
    report.removed_count = len(report.removed_ids)
    return kept, report


def verify_alignment(
    pair: SentencePair, cfg: FilterConfig | None = None, norm: NormalizationConfig | None = None
) -> AlignmentVerdict:
    """Length-ratio and numeral checks only; meant for auditing gold sets."""
    cfg = cfg or FilterConfig()
    norm = norm if norm is not None else default_config()
    src, tgt = normalize(pair.source_text, norm), normalize(pair.target_text, norm)
    reasons = []
    if length_ratio(_tokens(src), _tokens(tgt)) > cfg.max_length_ratio:
        reasons.append("length_ratio")
    if digit_runs(src) != digit_runs(tgt):
        reasons.append("numeral_consistency")
    return AlignmentVerdict(not reasons, tuple(reasons))


# --- splitting -------------------------------------------------------------

def split(
    pairs: Sequence[SentencePair], ratios: Sequence[float] = (0.8, 0.1, 0.1), seed: int = 42
) -> tuple[list[SentencePair], list[SentencePair], list[SentencePair]]:
    """Shuffle with :class:`~geez_forge.rng.Lcg64` and cut into train/valid/test.

    Valid and test get ``floor(n * ratio)`` items (a 1e-9 slack absorbs float
    error such as ``0.29 * 100``); train takes the remainder. Slices are taken
    from the shuffled order: train first, then valid, then test.
    """
    if len(ratios) != 3:
        raise ConfigError("ratios must have three entries (train, valid, test)")
    if any(r <= 0 for r in ratios):
        raise ConfigError(f"ratios must be positive, got {tuple(ratios)}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ConfigError(f"ratios must sum to 1, got {sum(ratios)}")
    n = len(pairs)
    order = list(range(n))
    Lcg64(seed).shuffle(order)
    n_valid = int(n * ratios[1] + 1e-9)
    n_test = int(n * ratios[2] + 1e-9)
    n_train = n - n_valid - n_test
    shuffled = [pairs[i] for i in order]
    return (
        shuffled[:n_train],
        shuffled[n_train:n_train + n_valid],
        shuffled[n_train + n_valid:],
    )


# --- statistics ------------------------------------------------------------

def _round_half_up(value: Fraction) -> float:
    return float(Fraction(int(value * 10 + Fraction(1, 2)), 10))


def compute_stats(pairs: Sequence[SentencePair]) -> list[DomainManifest]:
    """One manifest per domain (first-seen order, untagged -> ``other``) plus a ``total`` row."""
    groups: dict[str, list[SentencePair]] = {}
    for p in pairs:
        groups.setdefault(p.domain or "other", []).append(p)
    rows = []
    for domain, members in groups.items():
        n = len(members)
        rows.append(DomainManifest(
            domain=domain,
            sentence_count=n,
            avg_len_source=_round_half_up(Fraction(sum(_tokens(p.source_text) for p in members), n)),
            avg_len_target=_round_half_up(Fraction(sum(_tokens(p.target_text) for p in members), n)),
        ))
    rows.append(DomainManifest(domain="total", source_label="–", sentence_count=sum(r.sentence_count for r in rows)))
    return rows


def _avg(x: float | None) -> str:
    return "–" if x is None else f"{x:.1f}"


def manifest_row(m: DomainManifest) -> str:
    """Tab-separated row: Domain, Source, # Sents, Avg Len (EN/TI), Notes."""
    if m.avg_len_source is None and m.avg_len_target is None:
        lengths = "–"
    else:
        lengths = f"{_avg(m.avg_len_source)} / {_avg(m.avg_len_target)}"
    return "\t".join([m.domain.capitalize(), m.source_label, f"{m.sentence_count:,}", lengths, m.notes])


MANIFEST_HEADER = "Domain\tSource\t# Sents\tAvg Len (EN/TI)\tNotes"


def render_manifests(manifests: Sequence[DomainManifest], format: str = "text") -> str:
    if format == "json":
        return json.dumps([asdict(m) for m in manifests], ensure_ascii=False, indent=2) + "\n"
    if format == "tsv":
        fields = list(DomainManifest.__dataclass_fields__)
        lines = ["\t".join(fields)]
        for m in manifests:
            lines.append("\t".join("" if getattr(m, k) is None else str(getattr(m, k)) for k in fields))
        return "\n".join(lines) + "\n"
    if format == "text":
        return "\n".join([MANIFEST_HEADER] + [manifest_row(m) for m in manifests]) + "\n"
    raise ConfigError(f"unknown manifest format {format!r}")
