"""Ge'ez (Ethiopic) script classification and normalization."""
from __future__ import annotations

import json
import os
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable

from .errors import ConfigError

ETHIOPIC_RANGES = ((0x1200, 0x137F), (0x1380, 0x139F), (0x2D80, 0x2DDF))

SCRIPT_CLASSES = ("ethiopic", "latin", "digit", "punctuation", "whitespace", "other")

ZERO_WIDTH = frozenset("\u200b\u200c\u200d\u2060\ufeff")

CONFIG_ENV_VAR = "GEEZ_FORGE_CONFIG"


def is_ethiopic(c: str) -> bool:
    cp = ord(c)
    return any(lo <= cp <= hi for lo, hi in ETHIOPIC_RANGES)


def classify_char(c: str) -> str:
    """Return the script class of a single character.

    Ethiopic punctuation (word space U+1361, full stop U+1362 and the rest of
    U+1360..U+1368) is classed as ``punctuation``, not ``ethiopic``. Ethiopic
    numerals (U+1369..U+137C) stay ``ethiopic``.
    """
    if len(c) != 1:
        raise ValueError(f"expected a single character, got {c!r}")
    if c.isspace():
        return "whitespace"
    cat = unicodedata.category(c)
    if cat.startswith("P"):
        return "punctuation"
    if is_ethiopic(c):
        return "ethiopic"
    if cat == "Nd":
        return "digit"
    if cat.startswith("L") and unicodedata.name(c, "").startswith("LATIN "):
        return "latin"
    return "other"


@dataclass(frozen=True)
class ScriptProfile:
    total_chars: int
    ethiopic_fraction: float = 0.0
    latin_fraction: float = 0.0
    digit_fraction: float = 0.0
    punct_fraction: float = 0.0
    other_fraction: float = 0.0


def script_profile(text: str) -> ScriptProfile:
    """Character-class fractions over the non-whitespace characters of ``text``."""
    counts = dict.fromkeys(SCRIPT_CLASSES, 0)
    for c in text:
        counts[classify_char(c)] += 1
    total = len(text) - counts["whitespace"]
    if total == 0:
        return ScriptProfile(total_chars=0)
    return ScriptProfile(
        total_chars=total,
        ethiopic_fraction=counts["ethiopic"] / total,
        latin_fraction=counts["latin"] / total,
        digit_fraction=counts["digit"] / total,
        punct_fraction=counts["punctuation"] / total,
        other_fraction=counts["other"] / total,
    )


@dataclass(frozen=True)
class NormalizationConfig:
    unicode_canonicalization: bool = True
    char_map: tuple[tuple[str, str], ...] = field(default_factory=tuple)
    strip_controls: bool = True
    collapse_whitespace: bool = True

    def __post_init__(self):
        object.__setattr__(self, "char_map", tuple((str(a), str(b)) for a, b in self.char_map))
        self.validate()

    def validate(self) -> None:
        sources = {}
        for src, dst in self.char_map:
            if len(src) != 1 or len(dst) != 1:
                raise ConfigError(f"char_map rules must map single codepoints, got {src!r} -> {dst!r}")
            if src in sources and sources[src] != dst:
                raise ConfigError(f"char_map has conflicting rules for {src!r}")
            sources[src] = dst
        for src, dst in sources.items():
            if src == dst:
                continue
            # a target that is itself a source breaks one-pass closure (and any cycle has one)
            if dst in sources and sources[dst] != dst:
                raise ConfigError(
                    f"char_map target {dst!r} (from {src!r}) is itself remapped to {sources[dst]!r}"
                )

    @property
    def table(self) -> dict[int, str]:
        return {ord(a): b for a, b in self.char_map}

    def to_dict(self) -> dict:
        return {
            "unicode_canonicalization": self.unicode_canonicalization,
            "strip_controls": self.strip_controls,
            "collapse_whitespace": self.collapse_whitespace,
            "char_map": [[a, b] for a, b in self.char_map],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NormalizationConfig":
        known = {"unicode_canonicalization", "strip_controls", "collapse_whitespace", "char_map"}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown normalization config keys: {sorted(unknown)}")
        rules = d.get("char_map", [])
        if not isinstance(rules, list) or any(not isinstance(r, list) or len(r) != 2 for r in rules):
            raise ConfigError("char_map must be an array of two-element arrays")
        flags = {}
        for key in known - {"char_map"}:
            if key in d:
                if not isinstance(d[key], bool):
                    raise ConfigError(f"{key} must be a boolean")
                flags[key] = d[key]
        return cls(char_map=tuple(tuple(r) for r in rules), **flags)


def load_config(path: str | os.PathLike) -> NormalizationConfig:
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: invalid JSON: {e}") from e
    return NormalizationConfig.from_dict(data)


def save_config(cfg: NormalizationConfig, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(cfg.to_dict(), f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write("\n")


def default_config() -> NormalizationConfig:
    """The shipped variant-series table, or the file named by ``$GEEZ_FORGE_CONFIG``.

    The shipped table folds the commonly conflated series ሐ/ኀ->ሀ, ሠ->ሰ,
    ዐ->አ and ፀ->ጸ. It is a best-effort stand-in, not a linguistic authority:
    ሐ and ሀ are distinct phonemes in Tigrinya, so override it when that matters.
    """
    return _cached_default(os.environ.get(CONFIG_ENV_VAR) or None)


@lru_cache(maxsize=8)
def _cached_default(override: str | None) -> NormalizationConfig:
    if override:
        return load_config(override)
    text = resources.files("geez_forge").joinpath("data/default_norm.json").read_text(encoding="utf-8")
    return NormalizationConfig.from_dict(json.loads(text))


def _is_strippable(c: str) -> bool:
    if c in ZERO_WIDTH:
        return True
    cat = unicodedata.category(c)
    return cat == "Cf" or (cat == "Cc" and not c.isspace())


def _one_pass(text: str, cfg: NormalizationConfig, table: dict[int, str]) -> str:
    if cfg.unicode_canonicalization:
        text = unicodedata.normalize("NFC", text)
    if table:
        text = text.translate(table)
    if cfg.strip_controls:
        text = "".join(c for c in text if not _is_strippable(c))
    if cfg.collapse_whitespace:
        text = " ".join(text.split())
    return text


def normalize(text: str, cfg: NormalizationConfig | None = None) -> str:
    """Canonicalize ``text``: NFC, char_map, control stripping, whitespace collapsing.

    Whitespace collapsing also trims the ends. The pipeline is re-run until
    stable (stripping can expose a new NFC composition), so the result is a
    fixed point of ``normalize``.
    """
    if cfg is None:
        cfg = default_config()
    table = cfg.table
    out = _one_pass(text, cfg, table)
    for _ in range(8):
        again = _one_pass(out, cfg, table)
        if again == out:
            break
        out = again
    return out


def normalize_lines(lines: Iterable[str], cfg: NormalizationConfig | None = None) -> list[str]:
    cfg = cfg or default_config()
    return [normalize(line, cfg) for line in lines]
