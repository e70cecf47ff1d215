"""Normalizing Ge'ez-script text and profiling its script mix.

Run from the repository root: ``python3 demos/01_normalize_and_profile.py``
"""
# %%
# Tigrinya is often typed with homophone letters used interchangeably (ሐ/ሀ,
# ሠ/ሰ, ፀ/ጸ). The built-in table folds each series onto one form. Zero-width
# characters and runs of whitespace are removed as well.
from geez_forge import NormalizationConfig, default_config, normalize, script_profile

raw = "ሠናይ\u200b  መዓልቲ ፀሓይ ፡ ሰላም"
print(repr(raw))
print(normalize(raw, default_config()))

# %%
# A custom table is just a list of single-character rules. Rules are checked
# up front, so a cycle like a->b, b->a is rejected.
cfg = NormalizationConfig(char_map=(("ሠ", "ሰ"),))
print(normalize("ሠናይ", cfg))
try:
    NormalizationConfig(char_map=(("a", "b"), ("b", "a")))
except ValueError as e:
    print("rejected:", e)

# %%
# The profile counts non-whitespace characters by class. Ethiopic word and
# sentence separators (፡ ።) count as punctuation, not as Ethiopic letters.
for text in ["ሰላም ዓለም።", "Hello, ሰላም 2024"]:
    p = script_profile(text)
    print(f"{text!r}: ethiopic={p.ethiopic_fraction:.2f} latin={p.latin_fraction:.2f} "
          f"digit={p.digit_fraction:.2f} punct={p.punct_fraction:.2f}")
