import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute_force import bpe_merges
from geez_forge.errors import ConfigError, DataError, FormatVersionError, InvariantError
from geez_forge.script_norm import NormalizationConfig, normalize
from geez_forge.subword import (
    BOUNDARY_MARKER,
    SPECIALS,
    UNK,
    Affix,
    BpeTrainConfig,
    TokenSequence,
    _apply_merges,
    _pretokenize,
    decode,
    dumps_model,
    encode,
    load_model,
    model_to_dict,
    oov_rate,
    save_model,
    train_bpe,
)

PLAIN = NormalizationConfig()


def n_merges(n, alphabet_size):
    """vocab_size that allows exactly n merges on top of specials, marker and alphabet."""
    return len(SPECIALS) + 1 + alphabet_size + n


@pytest.fixture(scope="module")
def ababab():
    return train_bpe(["ababab"], BpeTrainConfig(vocab_size=n_merges(2, 2)), PLAIN)


@pytest.fixture(scope="module")
def trained(training_corpus):
    return train_bpe(training_corpus, BpeTrainConfig(vocab_size=400))


def test_ababab_matches_pair_count_oracle(ababab):
    assert bpe_merges(["ababab"], 2) == [("a", "b"), ("ab", "ab")]
    assert list(ababab.merges) == [("a", "b"), ("ab", "ab")]


@pytest.mark.parametrize("words, k", [
    (["low lower lowest newer wider"], 8),
    (["ሰላም ሰላምና ሰላማዊ ሰላም"], 6),
    (["aaaa aa aaa"], 4),
])
def test_merges_match_oracle(words, k):
    model = train_bpe(words, BpeTrainConfig(vocab_size=10_000), PLAIN)
    expected = bpe_merges(" ".join(words).split(), k)
    assert list(model.merges[:k]) == expected


def test_single_character_corpus():
    model = train_bpe(["x"], BpeTrainConfig(), PLAIN)
    assert model.merges == ()
    assert list(model.vocab) == list(SPECIALS) + ["x", BOUNDARY_MARKER]


def test_training_is_deterministic(training_corpus):
    a = train_bpe(training_corpus, BpeTrainConfig(vocab_size=300))
    b = train_bpe(training_corpus, BpeTrainConfig(vocab_size=300))
    assert dumps_model(a) == dumps_model(b)


def test_ties_broken_lexicographically():
    # every adjacent pair occurs exactly twice
    model = train_bpe(["cd ab", "cd ab"], BpeTrainConfig(vocab_size=100), PLAIN)
    assert model.merges[0] == ("a", "b")


def test_min_pair_frequency_stops_training():
    model = train_bpe(["abcd"], BpeTrainConfig(vocab_size=100, min_pair_frequency=2), PLAIN)
    assert model.merges == ()


def test_training_errors():
    with pytest.raises(DataError):
        train_bpe([], BpeTrainConfig(), PLAIN)
    with pytest.raises(DataError):
        train_bpe(["   ", "\t"], BpeTrainConfig(), PLAIN)
    with pytest.raises(ConfigError):
        BpeTrainConfig(vocab_size=3)


def test_specials_have_lowest_ids(trained):
    assert [trained.vocab[s] for s in SPECIALS] == [0, 1, 2, 3]
    assert trained.specials == {"<unk>": 0, "<pad>": 1, "<s>": 2, "</s>": 3}


def test_vocab_closure(trained, training_corpus):
    for left, right in trained.merges:
        assert left + right in trained.vocab
    for line in training_corpus:
        for seg in _pretokenize(normalize(line), trained.protected_affixes, BOUNDARY_MARKER):
            assert all(c in trained.vocab for c in seg)
            assert all(p in trained.vocab for p in _apply_merges(seg, trained))


def test_vocab_size_caps_merges_not_alphabet(training_corpus):
    model = train_bpe(training_corpus, BpeTrainConfig(vocab_size=200))
    assert len(model.vocab) == 200
    tiny = train_bpe(training_corpus, BpeTrainConfig(vocab_size=10))
    assert tiny.merges == ()
    assert len(tiny.vocab) > 10


def test_encode_empty(trained):
    assert encode(trained, "") == TokenSequence()
    assert encode(trained, "   ") == TokenSequence()


def test_unseen_character_is_single_unk(ababab):
    assert encode(ababab, "Q").ids == (UNK,)


def test_unk_decodes_literally(ababab):
    assert decode(ababab, encode(ababab, "ab Q")) == "ab<unk>"
    assert decode(ababab, [UNK]) == "<unk>"


def test_decode_empty(ababab):
    assert decode(ababab, TokenSequence()) == ""


def test_decode_unknown_id(ababab):
    with pytest.raises(DataError, match="99"):
        decode(ababab, [99])


def test_round_trip_table4(trained, table4_rows):
    for en, ti, _ in table4_rows:
        for s in (en, ti):
            assert decode(trained, encode(trained, s)) == normalize(s)


def test_round_trip_greeting(training_corpus):
    model = train_bpe(training_corpus + ["ሰላም ዓለም"], BpeTrainConfig(vocab_size=300))
    assert decode(model, encode(model, "ሰላም ዓለም")) == normalize("ሰላም ዓለም")


def test_pieces_reproduce_normalized_input(trained, table4_rows):
    for _, ti, _ in table4_rows:
        seq = encode(trained, ti)
        assert len(seq.ids) == len(seq.pieces)
        assert "".join(seq.pieces).replace(BOUNDARY_MARKER, " ").lstrip(" ") == normalize(ti)


def test_merges_applied_lowest_rank_first():
    # training order: (a,b) then (ab,c); "bc" is never learned
    model = train_bpe(["abc abc abc"], BpeTrainConfig(vocab_size=n_merges(2, 3)), PLAIN)
    assert model.merges == (("a", "b"), ("ab", "c"))
    assert encode(model, "abc").pieces == (BOUNDARY_MARKER, "abc")


def test_oov_rate_examples(trained, training_corpus):
    assert oov_rate(trained, training_corpus) == 0.0
    assert oov_rate(trained, ["ЖЖЖЖ"]) == 1.0
    with pytest.raises(DataError):
        oov_rate(trained, [])


def test_oov_rate_mixed_fixture():
    # no merges: "abcdefgh" -> 9 single-character pieces (marker + 8 letters);
    # the unseen word "Q" -> one folded <unk>
    model = train_bpe(["abcdefgh"], BpeTrainConfig(), PLAIN)
    seq = encode(model, "abcdefgh Q")
    assert len(seq) == 10
    assert sum(1 for i in seq.ids if i == UNK) == 1
    assert oov_rate(model, ["abcdefgh Q"]) == pytest.approx(0.1, abs=1e-12)


AFFIXES = [Affix("ዝ", "prefix"), Affix("ታት", "suffix"), Affix("ን", "suffix")]


def test_affix_boundaries_are_never_crossed():
    corpus = ["ዝኾኑ ዝኾኑ ቦታታት ቦታታት ዝበሉ ዝበሉ ሰሰግን ሰሰግን"] * 5
    model = train_bpe(corpus, BpeTrainConfig(vocab_size=200), PLAIN, AFFIXES)
    forbidden = ["ዝኾ", "ቦታታ", "ታታት", "ግን", BOUNDARY_MARKER + "ዝኾ"]
    for line in corpus:
        seq = encode(model, line)
        for piece in seq.pieces:
            assert not any(f in piece for f in forbidden), piece
            assert " " not in piece
            assert BOUNDARY_MARKER not in piece[1:]
        assert decode(model, seq) == normalize(line, PLAIN)
    assert (BOUNDARY_MARKER + "ዝ") in model.vocab
    assert "ታት" in model.vocab


def test_affix_not_split_when_it_is_the_whole_word():
    model = train_bpe(["ታት ታት"], BpeTrainConfig(vocab_size=50), PLAIN, [Affix("ታት", "suffix")])
    assert encode(model, "ታት").pieces == (BOUNDARY_MARKER + "ታት",)


def test_affix_validation():
    with pytest.raises(ConfigError):
        Affix("ዝ", "infix")
    with pytest.raises(ConfigError):
        Affix("", "prefix")


def test_save_load_round_trip(tmp_path, ababab):
    path = tmp_path / "m.json"
    save_model(ababab, path)
    loaded = load_model(path)
    assert loaded.merges == ababab.merges
    assert loaded.vocab == ababab.vocab
    assert loaded == ababab
    save_model(loaded, tmp_path / "m2.json")
    assert (tmp_path / "m2.json").read_bytes() == path.read_bytes()


def test_model_file_schema(ababab):
    d = json.loads(dumps_model(ababab))
    assert set(d) == {"version", "normalization", "specials", "vocab", "merges",
                      "boundary_marker", "protected_affixes"}
    assert d["version"] == "1"
    assert d["boundary_marker"] == "▁"
    assert d["vocab"][:4] == [["<unk>", 0], ["<pad>", 1], ["<s>", 2], ["</s>", 3]]
    assert d["merges"] == [["a", "b"], ["ab", "ab"]]


def _write(tmp_path, d):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d, ensure_ascii=False), encoding="utf-8")
    return path


def test_load_rejects_missing_merge_product(tmp_path, ababab):
    d = model_to_dict(ababab)
    d["vocab"] = [[t, i] for t, i in d["vocab"] if t not in ("ab", "abab")]
    d["merges"] = [["a", "b"]]
    with pytest.raises(InvariantError):
        load_model(_write(tmp_path, d))


def test_load_rejects_version(tmp_path, ababab):
    d = model_to_dict(ababab)
    d["version"] = "99"
    with pytest.raises(FormatVersionError):
        load_model(_write(tmp_path, d))


def test_load_rejects_duplicate_merges(tmp_path, ababab):
    d = model_to_dict(ababab)
    d["merges"].append(["a", "b"])
    with pytest.raises(InvariantError):
        load_model(_write(tmp_path, d))


def test_load_rejects_bad_specials(tmp_path, ababab):
    d = model_to_dict(ababab)
    d["specials"]["<pad>"] = 3
    with pytest.raises(InvariantError):
        load_model(_write(tmp_path, d))


@pytest.fixture(scope="module")
def alphabet_model(training_corpus):
    model = train_bpe(training_corpus, BpeTrainConfig(vocab_size=500))
    alphabet = sorted(c for c in model.vocab if len(c) == 1 and c != BOUNDARY_MARKER)
    return model, alphabet


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_round_trip_over_training_alphabet(alphabet_model, data):
    model, alphabet = alphabet_model
    s = data.draw(st.lists(st.sampled_from(alphabet + [" ", "  "]), max_size=30).map("".join))
    assert decode(model, encode(model, s)) == normalize(s, model.norm_cfg)
