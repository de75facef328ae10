from hypothesis import given, settings
from hypothesis import strategies as st

from corpuskit.text import normalize_text, tokenize, word_count


def test_normalizes_case_and_whitespace():
    assert normalize_text("  Hei\t VERDEN ") == "hei verden"


def test_fixpoint_on_plain_ascii():
    assert normalize_text("abc") == "abc"


def test_empty_input():
    assert normalize_text("") == ""


def test_strips_control_characters():
    assert normalize_text("a\x00b\x07c") == "abc"


def test_nfkc_folding():
    # ligature fi and fullwidth letters decompose
    assert normalize_text("ﬁsk") == "fisk"
    assert normalize_text("ＡＢ") == "ab"


@settings(max_examples=1000)
@given(st.text(max_size=80))
def test_idempotent(s):
    once = normalize_text(s)
    assert normalize_text(once) == once


def test_tokenize_unicode_whitespace():
    assert tokenize("a b c d") == ["a", "b", "c", "d"]


def test_word_count():
    assert word_count("a  b\nc") == 3
    assert word_count("") == 0
