import io
import json
import subprocess
import sys

import pytest

from geez_forge import __version__
from geez_forge.cli import main
from geez_forge.corpus import read_parallel, split
from geez_forge.metrics import corpus_bleu
from geez_forge.script_norm import normalize


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def lines_file(tmp_path, mixed50):
    path = tmp_path / "hyp.txt"
    path.write_text("\n".join(mixed50) + "\n", encoding="utf-8")
    return path


def test_score_chrf_identity(capsys, lines_file):
    code, out, _ = run(capsys, "score", "chrf", "--hyp", lines_file, "--ref", lines_file)
    assert code == 0
    assert out == "chrF = 100.00\n"


def test_score_bleu_json_matches_library(capsys, tmp_path, table4_rows):
    hyp, ref = tmp_path / "h.txt", tmp_path / "r.txt"
    hyps = [r[1].replace("እዩ", "ኣሎ") for r in table4_rows]
    refs = [r[1] for r in table4_rows]
    hyp.write_text("\n".join(hyps) + "\n", encoding="utf-8")
    ref.write_text("\n".join(refs) + "\n", encoding="utf-8")
    code, out, _ = run(capsys, "score", "bleu", "--hyp", hyp, "--ref", ref, "--json")
    assert code == 0
    assert json.loads(out)["score"] == corpus_bleu(hyps, refs).score


def test_significance_family_size(capsys, tmp_path, lines_file):
    other = tmp_path / "other.txt"
    other.write_text("".join(f"x{i}\n" for i in range(50)), encoding="utf-8")
    code, out, _ = run(capsys, "significance", "--hyp-a", other, "--hyp-b", lines_file, "--ref", lines_file,
                       "--metric", "chrf", "--resamples", "50", "--seed", "42", "--alpha", "0.05",
                       "--family-size", "10")
    assert code == 0
    assert "adjusted_alpha=0.005" in out
    assert out.startswith("*")
    code, out, _ = run(capsys, "significance", "--hyp-a", other, "--hyp-b", lines_file, "--ref", lines_file,
                       "--resamples", "50", "--family-size", "10", "--json")
    (res,) = json.loads(out)
    assert res["adjusted_alpha"] == 0.005 and res["seed"] == 42


def test_corpus_clean_one_bad_row(capsys, tmp_path, table4_path):
    src = tmp_path / "in.tsv"
    src.write_text(table4_path.read_text(encoding="utf-8") + "Lonely source\t\teducation\n", encoding="utf-8")
    out_tsv, rep = tmp_path / "out.tsv", tmp_path / "report.json"
    code, _, err = run(capsys, "corpus", "clean", "--in", src, "--out", out_tsv, "--report", rep)
    assert code == 0
    report = json.loads(rep.read_text(encoding="utf-8"))
    assert report["removed_count"] == 1
    assert len(read_parallel(out_tsv)) == 4
    assert "1 removed" in err


def test_corpus_split(capsys, tmp_path, fixtures_dir):
    prefix = tmp_path / "part"
    code, out, _ = run(capsys, "corpus", "split", "--in", fixtures_dir / "clean20.tsv", "--out-prefix", prefix,
                       "--seed", "7")
    assert code == 0
    meta = json.loads(out)
    assert meta["seed"] == 7 and meta["prng"] == "lcg64-mmix"
    assert [meta[k]["count"] for k in ("train", "valid", "test")] == [16, 2, 2]
    expected = split(read_parallel(fixtures_dir / "clean20.tsv"), seed=7)
    for name, part in zip(("train", "valid", "test"), expected):
        # ids are line numbers on re-read, so compare content
        assert [p.source_text for p in read_parallel(f"{prefix}.{name}.tsv")] == [p.source_text for p in part]


def test_corpus_split_bad_ratios(capsys, tmp_path, fixtures_dir):
    code, _, err = run(capsys, "corpus", "split", "--in", fixtures_dir / "clean20.tsv",
                       "--out-prefix", tmp_path / "p", "--ratios", "0.8,zero,0.1")
    assert code == 1 and "ratios" in err


def test_corpus_stats_and_verify(capsys, table4_path):
    code, out, _ = run(capsys, "corpus", "stats", "--in", table4_path, "--format", "json")
    assert code == 0
    assert json.loads(out)[0]["sentence_count"] == 4
    code, out, _ = run(capsys, "corpus", "verify", "--in", table4_path)
    assert code == 0
    assert out.splitlines()[0].endswith("\taligned")


def test_tokenizer_pipeline(capsys, monkeypatch, tmp_path, table4_rows, training_corpus):
    corpus = tmp_path / "corpus.txt"
    corpus.write_text("\n".join(training_corpus) + "\n", encoding="utf-8")
    model = tmp_path / "model.json"
    code, _, err = run(capsys, "tokenizer", "train", "--corpus", corpus, "--vocab-size", "300", "--out", model)
    assert code == 0 and "seed=42" in err
    text = "\n".join(r[1] for r in table4_rows) + "\n"
    code, ids, _ = run(capsys, "tokenizer", "encode", "--model", model, stdin=text, monkeypatch=monkeypatch)
    assert code == 0 and all(tok.isdigit() for tok in ids.split())
    code, back, _ = run(capsys, "tokenizer", "decode", "--model", model, stdin=ids, monkeypatch=monkeypatch)
    assert back.splitlines() == [normalize(r[1]) for r in table4_rows]
    code, pieces, _ = run(capsys, "tokenizer", "encode", "--model", model, "--pieces", stdin=text,
                          monkeypatch=monkeypatch)
    code, back, _ = run(capsys, "tokenizer", "decode", "--model", model, "--pieces", stdin=pieces,
                        monkeypatch=monkeypatch)
    assert back.splitlines() == [normalize(r[1]) for r in table4_rows]


def test_normalize_stdout_and_in_place(capsys, tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("ሠናይ  ለይቲ\n", encoding="utf-8")
    code, out, _ = run(capsys, "normalize", path)
    assert code == 0 and out == "ሰናይ ለይቲ\n"
    assert path.read_text(encoding="utf-8") == "ሠናይ  ለይቲ\n"
    code, out, _ = run(capsys, "normalize", "--in-place", path)
    assert code == 0 and out == ""
    assert path.read_text(encoding="utf-8") == "ሰናይ ለይቲ\n"


def test_normalize_stdin(capsys, monkeypatch):
    code, out, _ = run(capsys, "normalize", stdin="a \u200b b\n", monkeypatch=monkeypatch)
    assert code == 0 and out == "a b\n"


def test_report_commands(capsys, fixtures_dir):
    code, out, _ = run(capsys, "report", "table", "--in", fixtures_dir / "table2_entries.json")
    assert code == 0 and out.splitlines()[-1].endswith("89.00  –")
    code, out, _ = run(capsys, "report", "compare", "--in", fixtures_dir / "table3_entries.json",
                       "--baseline", "MarianMT", "--candidate", "ours", "--format", "tsv")
    assert code == 0
    assert out.splitlines()[1:] == ["en_to_ti\tbleu\t17.60\t25.40\t+7.80\t", "en_to_ti\tchrf\t39.59\t51.03\t+11.44\t"]
    code, _, _ = run(capsys, "report", "compare", "--in", fixtures_dir / "table3_entries.json")
    assert code == 1


def test_exit_code_usage(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["score", "ter", "--hyp", "a", "--ref", "b"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1


def test_exit_code_config(capsys, tmp_path, lines_file):
    bad = tmp_path / "norm.json"
    bad.write_text(json.dumps({"char_map": [["a", "b"], ["b", "a"]]}), encoding="utf-8")
    code, _, err = run(capsys, "normalize", "--config", bad, lines_file)
    assert code == 1 and "config error" in err


def test_exit_code_data(capsys, tmp_path, lines_file):
    short = tmp_path / "short.txt"
    short.write_text("one\n", encoding="utf-8")
    code, _, err = run(capsys, "score", "bleu", "--hyp", short, "--ref", lines_file)
    assert code == 2 and "data error" in err
    model = tmp_path / "model.json"
    model.write_text('{"version": "99"}', encoding="utf-8")
    code, _, _ = run(capsys, "tokenizer", "encode", "--model", model)
    assert code == 2


def test_exit_code_io(capsys, tmp_path):
    code, _, err = run(capsys, "score", "chrf", "--hyp", tmp_path / "missing.txt", "--ref", tmp_path / "missing.txt")
    assert code == 3 and "I/O error" in err


def test_version_via_entry_point():
    proc = subprocess.run([sys.executable, "-m", "geez_forge.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == f"geez-forge {__version__} (model format 1)"
