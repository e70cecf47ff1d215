"""Benchmark tables and baseline-vs-candidate comparisons."""
from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

from .errors import ConfigError, DataError
from .stats_sig import SignificanceResult

DIRECTIONS = ("en_to_ti", "ti_to_en")
METRICS = ("bleu", "chrf")
MISSING = "–"

_DIRECTION_LABELS = {"en_to_ti": "English → Tigrinya", "ti_to_en": "Tigrinya → English"}
_METRIC_LABELS = {"bleu": "BLEU", "chrf": "chrF"}


@dataclass(frozen=True)
class ScoreEntry:
    system: str
    direction: str
    metric: str
    value: float
    domain: str = "in-domain"

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise DataError(f"direction must be one of {DIRECTIONS}, got {self.direction!r}")
        if self.metric not in METRICS:
            raise DataError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if not self.value >= 0:
            raise DataError(f"score value must be >= 0, got {self.value!r}")


@dataclass(frozen=True)
class TableRow:
    system: str
    direction: str
    bleu: float | None
    chrf: float | None


@dataclass(frozen=True)
class ScoreTable:
    rows: tuple[TableRow, ...]

    def render(self, format: str = "text") -> str:
        if format == "json":
            return json.dumps([asdict(r) for r in self.rows], ensure_ascii=False, indent=2) + "\n"
        if format == "tsv":
            lines = ["system\tdirection\tbleu\tchrf"]
            for r in self.rows:
                lines.append("\t".join([r.system, r.direction, _cell(r.bleu), _cell(r.chrf)]))
            return "\n".join(lines) + "\n"
        if format == "text":
            return _text_table(
                ["Experiment", "Direction", "BLEU", "chrF"],
                [[r.system, _DIRECTION_LABELS[r.direction], _cell(r.bleu), _cell(r.chrf)] for r in self.rows],
            )
        raise ConfigError(f"unknown table format {format!r}")


def _cell(value: float | None) -> str:
    return MISSING if value is None else f"{value:.2f}"


def _text_table(header: list[str], body: list[list[str]]) -> str:
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
    out = []
    for row in [header] + body:
        out.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(out) + "\n"


def build_table(entries: Sequence[ScoreEntry]) -> ScoreTable:
    """Group entries into one row per (system, direction) with BLEU and chrF columns.

    Systems keep insertion order; directions within a system keep first-seen
    order. Missing cells are ``None`` and render as ``–``.
    """
    if not entries:
        raise DataError("no score entries")
    cells: dict[tuple[str, str], dict[str, float]] = {}
    for e in entries:
        row = cells.setdefault((e.system, e.direction), {})
        if e.metric in row:
            raise DataError(f"duplicate entry for system={e.system!r} direction={e.direction} metric={e.metric}")
        row[e.metric] = e.value
    order: dict[str, list[str]] = {}
    for system, direction in cells:
        order.setdefault(system, []).append(direction)
    rows = []
    for system, directions in order.items():
        for d in directions:
            c = cells[(system, d)]
            rows.append(TableRow(system, d, c.get("bleu"), c.get("chrf")))
    return ScoreTable(tuple(rows))


def render_table(entries: Sequence[ScoreEntry], format: str = "text") -> str:
    return build_table(entries).render(format)


@dataclass(frozen=True)
class ComparisonRow:
    direction: str
    metric: str
    baseline_value: float
    candidate_value: float
    delta: float
    significance: SignificanceResult | None = None


@dataclass
class ComparisonReport:
    baseline: str
    candidate: str
    rows: list[ComparisonRow] = field(default_factory=list)
    unmatched: list[ScoreEntry] = field(default_factory=list)

    def render(self, format: str = "text") -> str:
        if format == "json":
            return json.dumps(asdict(self), ensure_ascii=False, indent=2) + "\n"
        if format == "tsv":
            lines = ["direction\tmetric\tbaseline\tcandidate\tdelta\tsignificant"]
            for r in self.rows:
                sig = "" if r.significance is None else str(r.significance.significant).lower()
                lines.append(f"{r.direction}\t{r.metric}\t{r.baseline_value:.2f}\t{r.candidate_value:.2f}\t{r.delta:+.2f}\t{sig}")
            return "\n".join(lines) + "\n"
        if format == "text":
            body = []
            for r in self.rows:
                mark = "*" if r.significance is not None and r.significance.significant else ""
                body.append([_DIRECTION_LABELS[r.direction], _METRIC_LABELS[r.metric],
                             f"{r.baseline_value:.2f}", f"{r.candidate_value:.2f}", f"{r.delta:+.2f}{mark}"])
            text = _text_table(["Direction", "Metric", self.baseline, self.candidate, "Delta"], body)
            for e in self.unmatched:
                text += f"unmatched: {e.system} {e.direction} {e.metric} = {e.value:.2f}\n"
            return text
        raise ConfigError(f"unknown report format {format!r}")


def _keyed(entries: Sequence[ScoreEntry], side: str) -> dict[tuple[str, str], ScoreEntry]:
    out: dict[tuple[str, str], ScoreEntry] = {}
    for e in entries:
        key = (e.direction, e.metric)
        if key in out:
            raise DataError(f"duplicate {side} entry for direction={e.direction} metric={e.metric}")
        out[key] = e
    return out


def compare(
    baseline_entries: Sequence[ScoreEntry],
    candidate_entries: Sequence[ScoreEntry],
    significance: Mapping[tuple[str, str], SignificanceResult] | None = None,
) -> ComparisonReport:
    """Pair entries on (direction, metric) and compute ``candidate - baseline``.

    Rows follow baseline order. Entries without a partner on the other side
    go to ``unmatched`` instead of being dropped.
    """
    base = _keyed(baseline_entries, "baseline")
    cand = _keyed(candidate_entries, "candidate")
    significance = significance or {}
    report = ComparisonReport(
        baseline=_label(baseline_entries, "baseline"),
        candidate=_label(candidate_entries, "candidate"),
    )
    for key, b in base.items():
        c = cand.get(key)
        if c is None:
            report.unmatched.append(b)
            continue
        report.rows.append(ComparisonRow(key[0], key[1], b.value, c.value, c.value - b.value, significance.get(key)))
    report.unmatched.extend(c for key, c in cand.items() if key not in base)
    return report


def _label(entries: Sequence[ScoreEntry], default: str) -> str:
    systems = list(dict.fromkeys(e.system for e in entries))
    return systems[0] if len(systems) == 1 else default


def compare_systems(entries: Sequence[ScoreEntry], baseline: str, candidate: str) -> ComparisonReport:
    base = [e for e in entries if e.system == baseline]
    cand = [e for e in entries if e.system == candidate]
    for label, side in ((baseline, base), (candidate, cand)):
        if not side:
            raise DataError(f"no entries for system {label!r}")
    report = compare(base, cand)
    report.baseline, report.candidate = baseline, candidate
    return report


# --- entry I/O -------------------------------------------------------------

_FIELDS = ("system", "direction", "domain", "metric", "value")


def entries_from_json(text: str) -> list[ScoreEntry]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DataError(f"invalid JSON: {e}") from e
    if not isinstance(data, list):
        raise DataError("score entries must be a JSON array")
    out = []
    for i, d in enumerate(data):
        try:
            out.append(ScoreEntry(
                system=d["system"], direction=d["direction"], metric=d["metric"],
                value=float(d["value"]), domain=d.get("domain", "in-domain"),
            ))
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, DataError):
                raise DataError(f"entry {i}: {e}") from e
            raise DataError(f"entry {i}: malformed score entry ({e})") from e
    return out


def entries_from_tsv(text: str) -> list[ScoreEntry]:
    """Rows of ``system, direction, domain, metric, value``; a header row is optional."""
    out = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text), delimiter="\t"), 1):
        if not row or (lineno == 1 and row[0].strip().lower() == "system"):
            continue
        if len(row) != 5:
            raise DataError(f"line {lineno}: expected 5 columns, got {len(row)}")
        system, direction, domain, metric, value = row
        try:
            out.append(ScoreEntry(system, direction, metric, float(value), domain))
        except ValueError as e:
            raise DataError(f"line {lineno}: {e}") from e
    return out


def load_entries(path: str | os.PathLike) -> list[ScoreEntry]:
    with open(path, encoding="utf-8") as f:
        text = f.read()
    if str(path).endswith(".tsv") or not text.lstrip().startswith("["):
        return entries_from_tsv(text)
    return entries_from_json(text)


def entries_to_json(entries: Sequence[ScoreEntry]) -> str:
    return json.dumps([{k: getattr(e, k) for k in _FIELDS} for e in entries], ensure_ascii=False, indent=2) + "\n"
