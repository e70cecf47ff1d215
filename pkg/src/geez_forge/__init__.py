"""Corpus engineering and evaluation tools for English-Tigrinya (Ge'ez script) MT."""

__version__ = "0.1.0"

from .corpus import (
    CleaningReport,
    DomainManifest,
    FilterConfig,
    SentencePair,
    clean,
    compute_stats,
    read_parallel,
    render_manifests,
    split,
    verify_alignment,
)
from .errors import ConfigError, DataError, FormatVersionError, GeezForgeError, InvariantError
from .metrics import BleuScore, ChrfScore, corpus_bleu, corpus_chrf
from .report import ComparisonReport, ScoreEntry, build_table, compare, compare_systems, load_entries, render_table
from .script_norm import NormalizationConfig, ScriptProfile, classify_char, default_config, normalize, script_profile
from .stats_sig import SignificanceResult, apply_correction, bonferroni, paired_bootstrap, render_results
from .subword import (
    Affix,
    BpeTrainConfig,
    TokenizerModel,
    TokenSequence,
    decode,
    encode,
    load_model,
    oov_rate,
    save_model,
    train_bpe,
)
