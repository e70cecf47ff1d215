"""Rendering score tables and baseline-vs-candidate comparisons.

Run from the repository root: ``python3 demos/05_benchmark_tables.py``
"""
# %%
from pathlib import Path

from geez_forge import compare_systems, load_entries, render_table

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

# %%
# Missing cells (no chrF for the human reference rows) render as "–".
entries = load_entries(FIXTURES / "table2_entries.json")
print(render_table(entries))

# %%
report = compare_systems(entries, "Original tokenizer + pretrained model", "Custom tokenizer + fine-tuned model")
print(report.render())

# %%
other = load_entries(FIXTURES / "table3_entries.json")
print(compare_systems(other, "MarianMT", "ours").render("tsv"))
