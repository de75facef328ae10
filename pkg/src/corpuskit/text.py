"""Text normalization and whitespace tokenization.

One normalization rule is used everywhere (LM scoring, dedup keys,
classifier features) so that the different stages agree on what "the same
text" means.
"""

import unicodedata

__all__ = ["normalize_text", "tokenize", "word_count"]


def _strip_controls(text: str) -> str:
    # Keep whitespace controls (\t, \n, ...) so they can collapse to a space
    # in the next step; drop the rest of Cc/Cf.
    return "".join(
        ch
        for ch in text
        if ch.isspace() or unicodedata.category(ch) not in ("Cc", "Cf")
    )


def normalize_text(text: str) -> str:
    """NFKC-fold, lowercase, collapse whitespace runs, strip. Idempotent."""
    text = _strip_controls(text)
    text = unicodedata.normalize("NFKC", text)
    text = text.lower()
    # lower() can denormalize (e.g. dotted capital I), so normalize again
    text = unicodedata.normalize("NFKC", text)
    return " ".join(text.split())


def tokenize(text: str) -> list[str]:
    """Split on runs of Unicode whitespace; no other segmentation."""
    return text.split()


def word_count(text: str) -> int:
    """Number of whitespace-separated substrings."""
    return len(text.split())
