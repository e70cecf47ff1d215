"""Deterministic BPE subword tokenizer with protected affix boundaries.

Words are split on whitespace after normalization. Each word becomes the
symbol sequence ``▁ c1 c2 ...``: the boundary marker is its own initial
symbol, so merges such as ``("▁", "c1")`` produce word-initial pieces. An
optional affix lexicon splits a word into segments (longest matching prefix,
longest matching suffix) and merges never cross a segment edge.
"""
from __future__ import annotations

import json
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ConfigError, DataError, FormatVersionError, InvariantError
from .script_norm import NormalizationConfig, default_config, normalize

FORMAT_VERSION = "1"
BOUNDARY_MARKER = "▁"
SPECIALS = ("<unk>", "<pad>", "<s>", "</s>")
UNK, PAD, BOS, EOS = range(4)


@dataclass(frozen=True)
class Affix:
    form: str
    side: str  # "prefix" | "suffix"

    def __post_init__(self):
        if self.side not in ("prefix", "suffix"):
            raise ConfigError(f"affix side must be 'prefix' or 'suffix', got {self.side!r}")
        if not self.form:
            raise ConfigError("affix form must be non-empty")


@dataclass(frozen=True)
class BpeTrainConfig:
    vocab_size: int = 8000
    min_pair_frequency: int = 2
    seed: int = 42

    def __post_init__(self):
        if self.vocab_size < len(SPECIALS):
            raise ConfigError(f"vocab_size must be at least {len(SPECIALS)}, got {self.vocab_size}")
        if self.min_pair_frequency < 1:
            raise ConfigError("min_pair_frequency must be >= 1")


@dataclass(frozen=True)
class TokenSequence:
    ids: tuple[int, ...] = ()
    pieces: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if len(self.ids) != len(self.pieces):
            raise DataError("ids and pieces must have equal length")

    def __len__(self):
        return len(self.ids)


@dataclass(frozen=True, eq=True)
class TokenizerModel:
    norm_cfg: NormalizationConfig
    vocab: dict[str, int]
    merges: tuple[tuple[str, str], ...]
    protected_affixes: tuple[Affix, ...] = ()
    boundary_marker: str = BOUNDARY_MARKER
    version: str = FORMAT_VERSION
    _ranks: dict = field(init=False, repr=False, compare=False)
    _id_to_piece: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "merges", tuple(tuple(m) for m in self.merges))
        object.__setattr__(self, "protected_affixes", tuple(self.protected_affixes))
        self.check_invariants()
        object.__setattr__(self, "_ranks", {m: i for i, m in enumerate(self.merges)})
        pieces = [""] * len(self.vocab)
        for tok, i in self.vocab.items():
            pieces[i] = tok
        object.__setattr__(self, "_id_to_piece", pieces)

    @property
    def specials(self) -> dict[str, int]:
        return {name: self.vocab[name] for name in SPECIALS}

    def check_invariants(self) -> None:
        if len(self.boundary_marker) != 1:
            raise InvariantError("boundary marker must be a single codepoint")
        ids = sorted(self.vocab.values())
        if ids != list(range(len(ids))):
            raise InvariantError("vocab ids must be dense from 0")
        for i, name in enumerate(SPECIALS):
            if self.vocab.get(name) != i:
                raise InvariantError(f"special {name} must have id {i}")
        if len(set(self.merges)) != len(self.merges):
            raise InvariantError("merges list contains duplicates")
        for left, right in self.merges:
            if left + right not in self.vocab:
                raise InvariantError(f"merge ({left!r}, {right!r}) has no vocab entry {left + right!r}")

    def id_to_piece(self, i: int) -> str:
        if not 0 <= i < len(self._id_to_piece):
            raise DataError(f"unknown token id {i}")
        return self._id_to_piece[i]


def _segment_word(word: str, affixes: Sequence[Affix]) -> list[str]:
    """Split one word at its protected affix boundaries."""
    prefix = max((a.form for a in affixes if a.side == "prefix" and word.startswith(a.form)
                  and len(a.form) < len(word)), key=len, default="")
    rest = word[len(prefix):]
    suffix = max((a.form for a in affixes if a.side == "suffix" and rest.endswith(a.form)
                  and len(a.form) < len(rest)), key=len, default="")
    stem = rest[:len(rest) - len(suffix)]
    return [s for s in (prefix, stem, suffix) if s]


def _pretokenize(text: str, affixes: Sequence[Affix], marker: str) -> list[tuple[str, ...]]:
    """Normalized text -> symbol segments; the first segment of a word carries the marker."""
    segments = []
    for word in text.split():
        parts = _segment_word(word, affixes)
        segments.append((marker,) + tuple(parts[0]))
        segments.extend(tuple(p) for p in parts[1:])
    return segments


def _normalize_affixes(affixes: Iterable[Affix] | None, norm: NormalizationConfig) -> tuple[Affix, ...]:
    out = []
    seen = set()
    for a in affixes or ():
        form = normalize(a.form, norm)
        if not form or any(c.isspace() for c in form):
            raise ConfigError(f"affix {a.form!r} must normalize to a single non-empty word")
        key = (form, a.side)
        if key not in seen:
            seen.add(key)
            out.append(Affix(form, a.side))
    return tuple(out)


def _merge_symbols(symbols: tuple[str, ...], left: str, right: str) -> tuple[str, ...]:
    out = []
    i = 0
    n = len(symbols)
    while i < n:
        if i + 1 < n and symbols[i] == left and symbols[i + 1] == right:
            out.append(left + right)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return tuple(out)


def _pairs(symbols: tuple[str, ...]) -> Counter:
    return Counter(zip(symbols, symbols[1:]))


def train_bpe(
    corpus: Sequence[str],
    cfg: BpeTrainConfig | None = None,
    norm: NormalizationConfig | None = None,
    affixes: Iterable[Affix] | None = None,
) -> TokenizerModel:
    """Greedy BPE: merge the most frequent adjacent pair until ``vocab_size``.

    Training stops early once no pair reaches ``min_pair_frequency``. Ties on
    frequency go to the smallest ``(left, right)`` pair in codepoint order.
    ``cfg.seed`` is recorded for reproducibility; the procedure itself draws
    no random numbers.
    """
    cfg = cfg or BpeTrainConfig()
    norm = norm if norm is not None else default_config()
    if not corpus:
        raise DataError("training corpus is empty")
    affix_list = _normalize_affixes(affixes, norm)

    seg_counts: Counter = Counter()
    for line in corpus:
        seg_counts.update(_pretokenize(normalize(line, norm), affix_list, BOUNDARY_MARKER))
    if not seg_counts:
        raise DataError("training corpus has no non-whitespace characters after normalization")

    vocab: dict[str, int] = {name: i for i, name in enumerate(SPECIALS)}
    for ch in sorted({BOUNDARY_MARKER} | {c for seg in seg_counts for c in seg}):
        vocab.setdefault(ch, len(vocab))

    words = list(seg_counts)
    freqs = [seg_counts[w] for w in words]
    pair_counts: Counter = Counter()
    where: defaultdict[tuple[str, str], set[int]] = defaultdict(set)
    for idx, w in enumerate(words):
        for pair, k in _pairs(w).items():
            pair_counts[pair] += k * freqs[idx]
            where[pair].add(idx)

    merges: list[tuple[str, str]] = []
    while len(vocab) < cfg.vocab_size and pair_counts:
        best = min(pair_counts, key=lambda p: (-pair_counts[p], p))
        if pair_counts[best] < cfg.min_pair_frequency:
            break
        left, right = best
        merges.append(best)
        vocab.setdefault(left + right, len(vocab))
        for idx in sorted(where.pop(best, ())):
            old = words[idx]
            new = _merge_symbols(old, left, right)
            f = freqs[idx]
            for pair, k in _pairs(old).items():
                pair_counts[pair] -= k * f
                if pair_counts[pair] <= 0:
                    del pair_counts[pair]
                if pair != best:
                    where[pair].discard(idx)
            for pair, k in _pairs(new).items():
                pair_counts[pair] += k * f
                where[pair].add(idx)
            words[idx] = new

    return TokenizerModel(norm_cfg=norm, vocab=vocab, merges=tuple(merges), protected_affixes=affix_list)


def _apply_merges(symbols: tuple[str, ...], model: TokenizerModel) -> tuple[str, ...]:
    ranks = model._ranks
    while len(symbols) > 1:
        ranked = [ranks[p] for p in zip(symbols, symbols[1:]) if p in ranks]
        if not ranked:
            break
        left, right = model.merges[min(ranked)]
        symbols = _merge_symbols(symbols, left, right)
    return symbols


def encode(model: TokenizerModel, text: str) -> TokenSequence:
    """Normalize, pre-tokenize and apply merges in stored order.

    Characters missing from the vocabulary become ``<unk>``. A bare boundary
    marker directly followed by an unknown piece is folded into it, so an
    unseen word-initial character costs one ``<unk>``, not two.
    """
    norm_text = normalize(text, model.norm_cfg)
    ids: list[int] = []
    pieces: list[str] = []
    for seg in _pretokenize(norm_text, model.protected_affixes, model.boundary_marker):
        pending_marker = False
        for piece in _apply_merges(seg, model):
            tid = model.vocab.get(piece, UNK)
            if piece == model.boundary_marker:
                pending_marker = True
                continue
            if pending_marker:
                if tid == UNK:
                    piece = model.boundary_marker + piece
                else:
                    ids.append(model.vocab[model.boundary_marker])
                    pieces.append(model.boundary_marker)
                pending_marker = False
            ids.append(tid)
            pieces.append(piece)
        if pending_marker:
            ids.append(model.vocab[model.boundary_marker])
            pieces.append(model.boundary_marker)
    return TokenSequence(ids, pieces)


def decode(model: TokenizerModel, tokens: TokenSequence | Sequence[int]) -> str:
    """Inverse of :func:`encode`; ``<unk>`` ids come back as the literal ``<unk>``."""
    ids = tokens.ids if isinstance(tokens, TokenSequence) else tokens
    text = "".join(model.id_to_piece(i) for i in ids)
    text = text.replace(model.boundary_marker, " ")
    return text[1:] if text.startswith(" ") else text


def oov_rate(model: TokenizerModel, corpus: Sequence[str]) -> float:
    if not corpus:
        raise DataError("corpus is empty")
    total = unk = 0
    for line in corpus:
        ids = encode(model, line).ids
        total += len(ids)
        unk += sum(1 for i in ids if i == UNK)
    return unk / total if total else 0.0


def model_to_dict(model: TokenizerModel) -> dict:
    return {
        "version": model.version,
        "normalization": model.norm_cfg.to_dict(),
        "specials": model.specials,
        "vocab": [[tok, i] for tok, i in sorted(model.vocab.items(), key=lambda kv: kv[1])],
        "merges": [[a, b] for a, b in model.merges],
        "boundary_marker": model.boundary_marker,
        "protected_affixes": [{"form": a.form, "side": a.side} for a in model.protected_affixes],
    }


def dumps_model(model: TokenizerModel) -> str:
    return json.dumps(model_to_dict(model), ensure_ascii=False, indent=1, sort_keys=True) + "\n"


def model_from_dict(d: dict) -> TokenizerModel:
    version = d.get("version")
    if version != FORMAT_VERSION:
        raise FormatVersionError(f"unsupported model format version {version!r} (expected {FORMAT_VERSION!r})")
    try:
        vocab = {}
        for tok, i in d["vocab"]:
            if tok in vocab:
                raise InvariantError(f"duplicate vocab entry {tok!r}")
            vocab[tok] = int(i)
        specials = d["specials"]
        for i, name in enumerate(SPECIALS):
            if specials.get(name) != i:
                raise InvariantError(f"special {name} must have id {i}")
        return TokenizerModel(
            norm_cfg=NormalizationConfig.from_dict(d["normalization"]),
            vocab=vocab,
            merges=tuple((a, b) for a, b in d["merges"]),
            protected_affixes=tuple(Affix(a["form"], a["side"]) for a in d.get("protected_affixes", [])),
            boundary_marker=d.get("boundary_marker", BOUNDARY_MARKER),
            version=version,
        )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, DataError):
            raise
        raise DataError(f"malformed model file: {e}") from e


def save_model(model: TokenizerModel, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_model(model))


def load_model(path: str | os.PathLike) -> TokenizerModel:
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise DataError(f"{path}: invalid JSON: {e}") from e
    return model_from_dict(data)


def load_affixes(path: str | os.PathLike) -> list[Affix]:
    """Affix lexicon: JSON array of ``{"form", "side"}`` objects, or TSV ``form<TAB>side`` lines."""
    with open(path, encoding="utf-8") as f:
        text = f.read()
    if text.lstrip().startswith("["):
        return [Affix(a["form"], a["side"]) for a in json.loads(text)]
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise DataError(f"{path}:{lineno}: expected 'form<TAB>side'")
        out.append(Affix(cols[0].strip(), cols[1].strip()))
    return out
