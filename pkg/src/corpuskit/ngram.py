"""Word-level interpolated Kneser-Ney n-gram language model.

Conventions (shared with the ARPA serializer in :mod:`corpuskit.arpa`):

- tokens are whitespace-separated substrings, optionally normalized first;
- one document = one sentence: a single begin marker ``<s>`` is conditioned
  on but never scored, the end marker ``</s>`` is scored;
- probabilities are log10; perplexity is per-token, base 10;
- out-of-vocabulary words map to ``<unk>``, which receives interpolation
  mass at the unigram level (never zero);
- lower orders use continuation counts, except ``<s>``-initial n-grams
  which keep raw counts; one estimated discount per order,
  D = n1 / (n1 + 2*n2) clamped to [0.1, 0.99].
"""

import math
from collections import Counter

from sklearn.base import BaseEstimator

from .errors import DataError
from .text import normalize_text, tokenize

__all__ = ["KneserNeyLM", "BOS", "EOS", "UNK", "train"]

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

# log10 placeholder for the begin marker, which is never predicted
_BOS_LOGP = -99.0

_DISCOUNT_LO = 0.1
_DISCOUNT_HI = 0.99


def _count_shard(docs, order, normalize):
    """Raw n-gram counts for one shard of documents.

    Returns (counts, n_docs, n_tokens) where counts[k] maps (k+1)-gram
    tuples to occurrence counts. Merging shards is plain Counter addition,
    so the result is independent of sharding.
    """
    counts = [Counter() for _ in range(order)]
    n_docs = 0
    n_tokens = 0
    for doc in docs:
        text = normalize_text(doc) if normalize else doc
        toks = tokenize(text)
        n_docs += 1
        n_tokens += len(toks)
        padded = [BOS] + toks + [EOS]
        for k in range(1, order + 1):
            bucket = counts[k - 1]
            for i in range(len(padded) - k + 1):
                bucket[tuple(padded[i : i + k])] += 1
    return counts, n_docs, n_tokens


def _merge_counts(parts):
    merged = None
    n_docs = 0
    n_tokens = 0
    for counts, d, t in parts:
        n_docs += d
        n_tokens += t
        if merged is None:
            merged = counts
        else:
            for dst, src in zip(merged, counts):
                dst.update(src)
    return merged, n_docs, n_tokens


def _adjusted_counts(raw, order):
    """Continuation counts for orders < n; raw counts at the top order.

    ``<s>``-initial n-grams keep raw counts (they have no left context).
    """
    adjusted = [None] * order
    adjusted[order - 1] = dict(raw[order - 1])
    for k in range(order - 1, 0, -1):
        cont = Counter()
        for gram in raw[k]:  # (k+1)-grams
            cont[gram[1:]] += 1
        adj = {}
        for gram, c in raw[k - 1].items():
            if gram[0] == BOS:
                adj[gram] = c
            else:
                adj[gram] = cont.get(gram, 0)
        # grams observed only as <s>-prefixed continuation keep cont count 0;
        # they still occur in raw so cont >= 1 holds for all non-<s> grams
        adjusted[k - 1] = adj
    return adjusted


def _estimate_discount(values):
    n1 = sum(1 for v in values if v == 1)
    n2 = sum(1 for v in values if v == 2)
    if n1 + 2 * n2 == 0:
        return _DISCOUNT_LO
    return min(_DISCOUNT_HI, max(_DISCOUNT_LO, n1 / (n1 + 2 * n2)))


class KneserNeyLM(BaseEstimator):
    """Interpolated Kneser-Ney language model with ARPA-style backoff storage.

    Parameters
    ----------
    order : int
        n-gram order, 1..6.
    normalize : bool
        Pass text through :func:`normalize_text` before tokenizing, both at
        training and at scoring time.
    """

    def __init__(self, order=3, normalize=False):
        self.order = order
        self.normalize = normalize

    # -- training ---------------------------------------------------------

    def fit(self, X, y=None, workers=1):
        """Train on an iterable of document strings."""
        if not 1 <= self.order <= 6:
            raise DataError(f"order must be in [1, 6], got {self.order}")
        docs = list(X) if workers > 1 else X
        if workers > 1:
            size = max(1, math.ceil(len(docs) / workers))
            shards = [docs[i : i + size] for i in range(0, len(docs), size)]
            parts = [_count_shard(s, self.order, self.normalize) for s in shards]
            raw, n_docs, n_tokens = _merge_counts(parts)
        else:
            raw, n_docs, n_tokens = _count_shard(docs, self.order, self.normalize)
        if raw is None or n_docs == 0:
            raise DataError("empty corpus")
        self._build(raw, n_docs, n_tokens)
        return self

    def _build(self, raw, n_docs, n_tokens):
        order = self.order
        adjusted = _adjusted_counts(raw, order)
        # the begin marker is not a predictable event
        adjusted[0].pop((BOS,), None)

        discounts = [_estimate_discount(adjusted[k].values()) for k in range(order)]

        vocab = {w for (w,) in adjusted[0]} | {EOS, UNK}
        v_size = len(vocab)

        entries = {}  # gram tuple -> [log10 prob, log10 bow or None]

        # unigrams
        d1 = discounts[0]
        c1_total = sum(adjusted[0].values())
        t1 = len(adjusted[0])
        lambda1 = d1 * t1 / c1_total
        uniform = 1.0 / v_size
        probs_prev = {}
        for w in vocab:
            c = adjusted[0].get((w,), 0)
            p = max(c - d1, 0.0) / c1_total + lambda1 * uniform
            probs_prev[(w,)] = p
            entries[(w,)] = [math.log10(p), None]
        entries[(BOS,)] = [_BOS_LOGP, None]

        # higher orders
        for k in range(2, order + 1):
            dk = discounts[k - 1]
            table = adjusted[k - 1]
            denom = Counter()
            types = Counter()
            for gram, c in table.items():
                denom[gram[:-1]] += c
                types[gram[:-1]] += 1
            # interpolation weight doubles as the ARPA backoff weight
            for ctx in denom:
                lam = dk * types[ctx] / denom[ctx]
                entries[ctx][1] = math.log10(lam)
            probs_here = {}
            for gram, c in table.items():
                ctx = gram[:-1]
                lam = dk * types[ctx] / denom[ctx]
                # the suffix of an observed k-gram is always an observed
                # (k-1)-gram, so this is a direct lookup
                p = max(c - dk, 0.0) / denom[ctx] + lam * probs_prev[gram[1:]]
                probs_here[gram] = p
                entries[gram] = [math.log10(p), None]
            probs_prev = probs_here

        self.entries_ = {g: (lp, bw) for g, (lp, bw) in entries.items()}
        self.vocab_ = vocab | {BOS}
        self.discounts_ = discounts
        self.n_documents_ = n_docs
        self.n_tokens_ = n_tokens
        return self

    # -- querying ---------------------------------------------------------

    def _check_fitted(self):
        if not hasattr(self, "entries_"):
            raise DataError("model is not trained")

    def _map(self, word):
        return word if word in self.vocab_ else UNK

    def log10_prob(self, word, context=()):
        """log10 p(word | context) via the backoff recursion.

        OOV words (in both positions) map to the unknown marker; the context
        is truncated to the last order-1 tokens.
        """
        self._check_fitted()
        word = self._map(word)
        context = tuple(self._map(w) for w in context[-(self.order - 1) :]) if self.order > 1 else ()
        logp = 0.0
        gram = context + (word,)
        while True:
            ent = self.entries_.get(gram)
            if ent is not None:
                return logp + ent[0]
            if len(gram) == 1:
                # every mapped word has a unigram entry
                raise KeyError(word)
            ctx = self.entries_.get(gram[:-1])
            if ctx is not None and ctx[1] is not None:
                logp += ctx[1]
            gram = gram[1:]

    def score_document(self, text):
        """Total log10 probability and scored-token count for one document."""
        self._check_fitted()
        if self.normalize:
            text = normalize_text(text)
        toks = tokenize(text)
        if not toks:
            raise DataError("unscorable document")
        history = [BOS]
        total = 0.0
        for tok in toks + [EOS]:
            total += self.log10_prob(tok, tuple(history))
            history.append(tok)
        return total, len(toks) + 1

    def perplexity(self, text):
        """Per-token base-10 perplexity; the end marker is scored."""
        total, n = self.score_document(text)
        return 10.0 ** (-total / n)


def train(documents, order, normalize=False, workers=1):
    """Functional wrapper used by the CLI."""
    return KneserNeyLM(order=order, normalize=normalize).fit(documents, workers=workers)
