"""Corpus stream operations: dedup, language balancing, subset construction,
instruction validation, and corpus statistics."""

import hashlib
import json
import math
from collections import Counter
from dataclasses import dataclass, field

from .errors import DataError
from .hashing import unit_uniform
from .predicates import parse_predicate
from .text import normalize_text, word_count

__all__ = [
    "DedupReport",
    "dedup",
    "LanguageBudget",
    "TABLE5_RATIOS",
    "BalanceReport",
    "balance_languages",
    "SubsetSpec",
    "SubsetReport",
    "build_subset",
    "INSTRUCTION_CATEGORIES",
    "INSTRUCTION_DOMAINS",
    "ValidationReport",
    "validate_instructions",
    "StatsReport",
    "corpus_stats",
]


# -- deduplication --------------------------------------------------------


@dataclass
class DedupReport:
    kept: int = 0
    dropped: int = 0
    dropped_per_source: Counter = field(default_factory=Counter)


def _text_key(text):
    return hashlib.blake2b(normalize_text(text).encode("utf-8"), digest_size=16).digest()


def dedup(documents, report=None, workers=1):
    """Drop exact duplicates under text normalization; first occurrence wins.

    Two-phase when workers > 1: keys are computed per chunk, then filtered in
    input order, so output is identical for any worker count.
    """
    if report is None:
        report = DedupReport()
    docs = list(documents)
    if workers > 1:
        size = max(1, math.ceil(len(docs) / workers))
        keys = []
        for i in range(0, len(docs), size):
            keys.extend(_text_key(d.text) for d in docs[i : i + size])
    else:
        keys = [_text_key(d.text) for d in docs]
    seen = set()
    kept = []
    for doc, key in zip(docs, keys):
        if key in seen:
            report.dropped += 1
            report.dropped_per_source[doc.source] += 1
        else:
            seen.add(key)
            report.kept += 1
            kept.append(doc)
    return kept


# -- language balancing ---------------------------------------------------

# Table 5 profile: percentage of documents kept per language, Norwegian fixed
TABLE5_RATIOS = {
    "nb": 1.0,
    "nn": 1.0,
    "da": 0.43,
    "en": 0.81,
    "is": 1.0,
    "sv": 0.154,
    "code": 0.62,
}


@dataclass
class LanguageBudget:
    ratios: dict = field(default_factory=lambda: dict(TABLE5_RATIOS))
    unlisted_policy: str = "drop"  # or "keep"

    def __post_init__(self):
        for lang, ratio in self.ratios.items():
            if not 0.0 < ratio <= 1.0:
                raise DataError(f"ratio for {lang!r} must be in (0, 1], got {ratio}")
        if self.unlisted_policy not in ("drop", "keep"):
            raise DataError(f"unknown unlisted-language policy {self.unlisted_policy!r}")


@dataclass
class BalanceReport:
    kept: Counter = field(default_factory=Counter)
    dropped: Counter = field(default_factory=Counter)

    def achieved_ratio(self, language):
        total = self.kept[language] + self.dropped[language]
        return self.kept[language] / total if total else 0.0


def balance_languages(documents, budget, seed, report=None, workers=1):
    """Hash-threshold sampling of each language at its budget ratio."""
    if report is None:
        report = BalanceReport()
    docs = list(documents)
    chunks = (
        [docs]
        if workers <= 1
        else [
            docs[i : i + max(1, math.ceil(len(docs) / workers))]
            for i in range(0, len(docs), max(1, math.ceil(len(docs) / workers)))
        ]
    )
    kept = []
    for chunk in chunks:
        for doc in chunk:
            ratio = budget.ratios.get(doc.language)
            if ratio is None:
                keep = budget.unlisted_policy == "keep"
            else:
                keep = unit_uniform(doc.id, seed) < ratio
            if keep:
                report.kept[doc.language] += 1
                kept.append(doc)
            else:
                report.dropped[doc.language] += 1
    return kept


# -- subsets --------------------------------------------------------------


@dataclass
class SubsetSpec:
    name: str
    predicate: str

    def compile(self):
        return parse_predicate(self.predicate)


@dataclass
class SubsetReport:
    name: str
    documents: int = 0
    words: int = 0


def build_subset(documents, spec):
    """Filter documents by the spec predicate; order preserved.

    Returns (matched documents, report with doc/word totals).
    """
    match = spec.compile()
    report = SubsetReport(name=spec.name)
    out = []
    for doc in documents:
        if match(doc):
            report.documents += 1
            report.words += doc.word_count
            out.append(doc)
    return out, report


# -- instruction triplets -------------------------------------------------

INSTRUCTION_CATEGORIES = {
    "Reading Comprehension",
    "Norwegian Culture",
    "Words and Expressions",
}

INSTRUCTION_DOMAINS = {
    "Literature", "Commonsense", "Geography", "Language", "History", "Sports",
    "Entertainment", "Food", "Politics", "Science", "Art", "Music", "Culture",
}


@dataclass
class ValidationReport:
    records: int = 0
    passed: int = 0
    failures: list = field(default_factory=list)  # (line, reason)
    per_category: Counter = field(default_factory=Counter)
    per_domain: Counter = field(default_factory=Counter)


def validate_instructions(lines):
    """Check (instruction, input, output) triplet records from a JSONL stream."""
    report = ValidationReport()
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        report.records += 1
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            report.failures.append((line_no, f"invalid JSON ({exc.msg})"))
            continue
        reasons = []
        if not str(obj.get("instruction", "")).strip():
            reasons.append("empty instruction")
        if not str(obj.get("output", "")).strip():
            reasons.append("empty output")
        category = obj.get("category")
        if category not in INSTRUCTION_CATEGORIES:
            reasons.append(f"unknown category {category!r}")
        domain = obj.get("domain")
        if domain not in INSTRUCTION_DOMAINS:
            reasons.append(f"unknown domain {domain!r}")
        if reasons:
            report.failures.append((line_no, "; ".join(reasons)))
        else:
            report.passed += 1
            report.per_category[category] += 1
            report.per_domain[domain] += 1
    return report


# -- statistics -----------------------------------------------------------


@dataclass
class StatsReport:
    documents: int = 0
    words: int = 0
    tokens: int | None = None
    per_source: Counter = field(default_factory=Counter)
    per_language: Counter = field(default_factory=Counter)
    words_per_source: Counter = field(default_factory=Counter)
    words_per_language: Counter = field(default_factory=Counter)

    @property
    def fertility(self):
        """Tokenizer fragmentation rate: tokens per word."""
        if self.tokens is None or self.words == 0:
            return None
        return self.tokens / self.words


def corpus_stats(documents, token_counter=None):
    """Document/word totals per source and language; fertility when a
    token counter is supplied."""
    report = StatsReport(tokens=0 if token_counter else None)
    for doc in documents:
        words = doc.word_count or word_count(doc.text)
        report.documents += 1
        report.words += words
        report.per_source[doc.source] += 1
        report.per_language[doc.language] += 1
        report.words_per_source[doc.source] += words
        report.words_per_language[doc.language] += words
        if token_counter is not None:
            report.tokens += token_counter(doc.text)
    return report
