"""Corpus BLEU and chrF, then a paired bootstrap with Bonferroni correction.

Run from the repository root: ``python3 demos/04_scoring_and_significance.py``
"""
# %%
from pathlib import Path

from geez_forge import apply_correction, corpus_bleu, corpus_chrf, paired_bootstrap, render_results

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"
refs = (FIXTURES / "refs100.txt").read_text(encoding="utf-8").splitlines()

# %%
# Two synthetic systems. System A drops the last word of every third
# segment; system B gets every sixth segment wrong in the same way.
def drop_last(s):
    return " ".join(s.split()[:-1])

sys_a = [drop_last(s) if i % 3 == 0 else s for i, s in enumerate(refs)]
sys_b = [drop_last(s) if i % 6 == 0 else s for i, s in enumerate(refs)]

for name, hyps in (("A", sys_a), ("B", sys_b)):
    print(name, corpus_bleu(hyps, refs), "|", corpus_chrf(hyps, refs))

# %%
# chrF ignores whitespace and works on characters, so it gives partial credit
# for a wrong inflection where BLEU gives none.
print(corpus_bleu(["ቤት ትምህርቲ"], ["ቤትና ትምህርቲ"]).precisions)
print(corpus_chrf(["ቤት ትምህርቲ"], ["ቤትና ትምህርቲ"]))

# %%
# One test per metric, corrected as a family of two. Bonferroni divides
# alpha by the family size.
results = [
    paired_bootstrap(sys_a, sys_b, refs, metric=m, n_resamples=1000, seed=42, label="A vs B")
    for m in ("bleu", "chrf")
]
print(render_results(apply_correction(results, alpha=0.05)))
