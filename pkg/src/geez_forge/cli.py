"""``geez-forge`` command-line interface.

Exit codes: 0 success, 1 usage/config error, 2 data/validation error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import __version__
from . import corpus as corpus_mod
from . import metrics, report, stats_sig, subword
from .errors import ConfigError, DataError
from .script_norm import default_config, load_config, normalize

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _norm_cfg(path):
    return load_config(path) if path else default_config()


def _read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as f:
        return f.read().splitlines()


def _stdin_lines() -> list[str]:
    return sys.stdin.read().splitlines()


# --- command handlers ----------------------------------------------------

def cmd_normalize(args) -> int:
    cfg = _norm_cfg(args.config)
    if not args.files:
        if args.in_place:
            raise ConfigError("--in-place needs at least one file")
        for line in _stdin_lines():
            print(normalize(line, cfg))
        return EXIT_OK
    for path in args.files:
        out = "".join(normalize(line, cfg) + "\n" for line in _read_lines(path))
        if args.in_place:
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(out)
        else:
            sys.stdout.write(out)
    return EXIT_OK


def cmd_tokenizer_train(args) -> int:
    cfg = subword.BpeTrainConfig(
        vocab_size=args.vocab_size, min_pair_frequency=args.min_pair_frequency, seed=args.seed
    )
    affixes = subword.load_affixes(args.affixes) if args.affixes else None
    model = subword.train_bpe(_read_lines(args.corpus), cfg, _norm_cfg(args.config), affixes)
    subword.save_model(model, args.out)
    print(f"vocab={len(model.vocab)} merges={len(model.merges)} seed={args.seed} -> {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_tokenizer_encode(args) -> int:
    model = subword.load_model(args.model)
    for line in _stdin_lines():
        seq = subword.encode(model, line)
        if args.pieces:
            print(" ".join(seq.pieces))
        else:
            print(" ".join(map(str, seq.ids)))
    return EXIT_OK


def cmd_tokenizer_decode(args) -> int:
    model = subword.load_model(args.model)
    for lineno, line in enumerate(_stdin_lines(), 1):
        if args.pieces:
            try:
                ids = [model.vocab[p] for p in line.split()]
            except KeyError as e:
                raise DataError(f"line {lineno}: unknown piece {e.args[0]!r}") from e
        else:
            try:
                ids = [int(t) for t in line.split()]
            except ValueError as e:
                raise DataError(f"line {lineno}: token ids must be integers") from e
        print(subword.decode(model, ids))
    return EXIT_OK


def cmd_corpus_clean(args) -> int:
    cfg = corpus_mod.FilterConfig.load(args.config) if args.config else corpus_mod.FilterConfig()
    pairs = corpus_mod.read_parallel(args.input)
    kept, rep = corpus_mod.clean(pairs, cfg, _norm_cfg(args.norm))
    corpus_mod.write_tsv(kept, args.out)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as f:
            f.write(rep.to_json())
    print(f"kept {rep.kept_count} of {rep.input_count} pairs ({rep.removed_count} removed)", file=sys.stderr)
    return EXIT_OK


def _parse_ratios(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError as e:
        raise ConfigError(f"bad --ratios {text!r}") from e


def cmd_corpus_split(args) -> int:
    pairs = corpus_mod.read_parallel(args.input)
    parts = corpus_mod.split(pairs, _parse_ratios(args.ratios), args.seed)
    meta = {"seed": args.seed, "ratios": args.ratios, "prng": "lcg64-mmix"}
    for name, part in zip(("train", "valid", "test"), parts):
        path = f"{args.out_prefix}.{name}.tsv"
        corpus_mod.write_tsv(part, path)
        meta[name] = {"path": path, "count": len(part)}
    print(json.dumps(meta, ensure_ascii=False))
    return EXIT_OK


def cmd_corpus_stats(args) -> int:
    manifests = corpus_mod.compute_stats(corpus_mod.read_parallel(args.input))
    sys.stdout.write(corpus_mod.render_manifests(manifests, args.format))
    return EXIT_OK


def cmd_corpus_verify(args) -> int:
    cfg = corpus_mod.FilterConfig.load(args.config) if args.config else corpus_mod.FilterConfig()
    norm = _norm_cfg(args.norm)
    for pair in corpus_mod.read_parallel(args.input):
        print(f"{pair.id}\t{corpus_mod.verify_alignment(pair, cfg, norm)}")
    return EXIT_OK


def cmd_score(args) -> int:
    hyps, refs = _read_lines(args.hyp), _read_lines(args.ref)
    result = metrics.corpus_bleu(hyps, refs) if args.metric == "bleu" else metrics.corpus_chrf(hyps, refs)
    sys.stdout.write(metrics.score_json(result) if args.json else f"{result}\n")
    return EXIT_OK


def cmd_significance(args) -> int:
    result = stats_sig.paired_bootstrap(
        _read_lines(args.hyp_a), _read_lines(args.hyp_b), _read_lines(args.ref),
        metric=args.metric, n_resamples=args.resamples, seed=args.seed, alpha=args.alpha,
    )
    corrected = stats_sig.apply_correction([result], args.alpha, family_size=args.family_size)
    out = stats_sig.results_json(corrected) if args.json else stats_sig.render_results(corrected)
    sys.stdout.write(out)
    return EXIT_OK


def cmd_report(args) -> int:
    entries = report.load_entries(args.input)
    if args.action == "table":
        sys.stdout.write(report.render_table(entries, args.format))
        return EXIT_OK
    if not (args.baseline and args.candidate):
        raise ConfigError("report compare needs --baseline and --candidate")
    sys.stdout.write(report.compare_systems(entries, args.baseline, args.candidate).render(args.format))
    return EXIT_OK


# --- parser --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="geez-forge", description="Corpus and evaluation tools for Ge'ez-script MT.")
    p.add_argument("--version", action="version",
                   version=f"geez-forge {__version__} (model format {subword.FORMAT_VERSION})")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    n = sub.add_parser("normalize", help="normalize text files line by line")
    n.add_argument("--config", help="normalization config JSON (default: $GEEZ_FORGE_CONFIG or built-in)")
    n.add_argument("--in-place", action="store_true")
    n.add_argument("files", nargs="*")
    n.set_defaults(func=cmd_normalize)

    tok = sub.add_parser("tokenizer", help="train and apply the BPE tokenizer")
    tsub = tok.add_subparsers(dest="action", required=True, parser_class=_Parser)
    t = tsub.add_parser("train")
    t.add_argument("--corpus", required=True)
    t.add_argument("--vocab-size", type=int, default=8000)
    t.add_argument("--min-pair-frequency", type=int, default=2)
    t.add_argument("--seed", type=int, default=42)
    t.add_argument("--affixes")
    t.add_argument("--config", help="normalization config JSON")
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_tokenizer_train)
    for name, func in (("encode", cmd_tokenizer_encode), ("decode", cmd_tokenizer_decode)):
        e = tsub.add_parser(name)
        e.add_argument("--model", required=True)
        mode = e.add_mutually_exclusive_group()
        mode.add_argument("--ids", action="store_true", help="ids (default)")
        mode.add_argument("--pieces", action="store_true")
        e.set_defaults(func=func)

    c = sub.add_parser("corpus", help="clean, split and profile parallel corpora")
    csub = c.add_subparsers(dest="action", required=True, parser_class=_Parser)
    cl = csub.add_parser("clean")
    cl.add_argument("--config", help="filter config JSON")
    cl.add_argument("--norm", help="normalization config JSON")
    cl.add_argument("--in", dest="input", required=True)
    cl.add_argument("--out", required=True)
    cl.add_argument("--report")
    cl.set_defaults(func=cmd_corpus_clean)
    sp = csub.add_parser("split")
    sp.add_argument("--ratios", default="0.8,0.1,0.1")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out-prefix", required=True)
    sp.set_defaults(func=cmd_corpus_split)
    st = csub.add_parser("stats")
    st.add_argument("--in", dest="input", required=True)
    st.add_argument("--format", choices=("text", "tsv", "json"), default="text")
    st.set_defaults(func=cmd_corpus_stats)
    vf = csub.add_parser("verify")
    vf.add_argument("--config")
    vf.add_argument("--norm")
    vf.add_argument("--in", dest="input", required=True)
    vf.set_defaults(func=cmd_corpus_verify)

    s = sub.add_parser("score", help="corpus BLEU or chrF")
    s.add_argument("metric", choices=("bleu", "chrf"))
    s.add_argument("--hyp", required=True)
    s.add_argument("--ref", required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_score)

    g = sub.add_parser("significance", help="paired bootstrap test with Bonferroni threshold")
    g.add_argument("--hyp-a", required=True)
    g.add_argument("--hyp-b", required=True)
    g.add_argument("--ref", required=True)
    g.add_argument("--metric", choices=("bleu", "chrf"), default="chrf")
    g.add_argument("--resamples", type=int, default=stats_sig.DEFAULT_RESAMPLES)
    g.add_argument("--seed", type=int, default=stats_sig.DEFAULT_SEED)
    g.add_argument("--alpha", type=float, default=stats_sig.DEFAULT_ALPHA)
    g.add_argument("--family-size", type=int, default=1)
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=cmd_significance)

    r = sub.add_parser("report", help="render score tables and comparisons")
    r.add_argument("action", choices=("table", "compare"))
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--baseline")
    r.add_argument("--candidate")
    r.add_argument("--format", choices=("text", "tsv", "json"), default="text")
    r.set_defaults(func=cmd_report)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"geez-forge: config error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as e:
        print(f"geez-forge: data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"geez-forge: I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
