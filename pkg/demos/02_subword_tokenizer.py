"""Training a BPE tokenizer that keeps affix boundaries.

Run from the repository root: ``python3 demos/02_subword_tokenizer.py``
"""
# %%
from pathlib import Path

from geez_forge import Affix, BpeTrainConfig, decode, encode, oov_rate, train_bpe

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"
corpus = (FIXTURES / "mixed50.txt").read_text(encoding="utf-8").splitlines()

# %%
# Plain BPE. The vocabulary always holds every character seen in training,
# and vocab_size caps the number of merges on top of that.
model = train_bpe(corpus, BpeTrainConfig(vocab_size=400))
print(f"{len(model.vocab)} pieces, {len(model.merges)} merges; first merges: {model.merges[:5]}")

sentence = "ነባሪ ኣየር ኣብ ሓደ ከባቢ"
seq = encode(model, sentence)
print(seq.pieces)
print(decode(model, seq))

# %%
# Each character never seen in training maps to <unk>; the pieces keep the
# original text so the loss is visible.
print(encode(model, "ЖЖЖ ኣየር").pieces)
print("training OOV:", oov_rate(model, corpus))

# %%
# With protected affixes a word is split into prefix / stem / suffix before
# training, and no merge crosses those cuts.
affixes = [Affix("ዝ", "prefix"), Affix("ታት", "suffix")]
protected = train_bpe(corpus, BpeTrainConfig(vocab_size=400), affixes=affixes)
print(encode(protected, "ዝኾኑ ቦታታት").pieces)
