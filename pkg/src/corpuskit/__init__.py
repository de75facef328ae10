"""Corpus curation and benchmark score aggregation toolkit."""

from .documents import Document
from .errors import ConvergenceError, CorpusKitError, DataError, ParseError
from .evalreport import MetricSpec, ScoreRecord, SkillMap
from .genre import GenreImputer
from .ngram import KneserNeyLM
from .pipeline import LanguageBudget, SubsetSpec
from .sampler import (
    GaussianFit,
    GaussianPerplexitySampler,
    PerplexityDistribution,
    QualitySegmenter,
)
from .text import normalize_text, word_count

__version__ = "0.1.0"

__all__ = [
    "Document",
    "CorpusKitError",
    "DataError",
    "ParseError",
    "ConvergenceError",
    "KneserNeyLM",
    "GaussianFit",
    "PerplexityDistribution",
    "GaussianPerplexitySampler",
    "QualitySegmenter",
    "LanguageBudget",
    "SubsetSpec",
    "GenreImputer",
    "ScoreRecord",
    "MetricSpec",
    "SkillMap",
    "normalize_text",
    "word_count",
    "__version__",
]
