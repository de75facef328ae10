"""Fiction/nonfiction imputation for books with missing genre labels.

The classifier backend is pluggable; the default is hashed bag-of-words
features over normalized tokens with a regularized logistic model.
"""

import dataclasses

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.feature_extraction.text import HashingVectorizer
from sklearn.linear_model import LogisticRegression
from sklearn.model_selection import train_test_split
from sklearn.pipeline import make_pipeline

from .errors import DataError
from .text import normalize_text

__all__ = ["GenreImputer", "impute_genre"]

HASH_BUCKETS = 2**18


def default_classifier():
    return make_pipeline(
        HashingVectorizer(
            n_features=HASH_BUCKETS,
            preprocessor=normalize_text,
            alternate_sign=False,
        ),
        LogisticRegression(max_iter=1000),
    )


class GenreImputer(BaseEstimator):
    """Fit on labeled documents, fill in genre for unlabeled books.

    Existing labels are never overwritten; non-book documents pass through
    untouched. Held-out accuracy from a 90/10 split is exposed as
    ``holdout_accuracy_``.
    """

    def __init__(self, classifier=None, holdout=0.1, seed=0):
        self.classifier = classifier
        self.holdout = holdout
        self.seed = seed

    def fit(self, X, y=None):
        docs = [d for d in X if d.genre != "unknown"]
        if not docs:
            raise DataError("no labeled documents")
        texts = [d.text for d in docs]
        labels = [d.genre for d in docs]
        if len(set(labels)) < 2:
            raise DataError("single-class training set")
        clf = self.classifier if self.classifier is not None else default_classifier()
        x_train, x_test, y_train, y_test = train_test_split(
            texts, labels, test_size=self.holdout, random_state=self.seed,
            stratify=labels,
        )
        clf.fit(x_train, y_train)
        self.holdout_accuracy_ = float(np.mean(np.array(clf.predict(x_test)) == y_test))
        # refit on everything for the actual imputation model
        self.classifier_ = clf.fit(texts, labels)
        return self

    def transform(self, X):
        docs = list(X)
        targets = [
            i for i, d in enumerate(docs)
            if d.doc_type == "book" and d.genre == "unknown"
        ]
        if not targets:
            return docs
        predicted = self.classifier_.predict([docs[i].text for i in targets])
        out = list(docs)
        for i, genre in zip(targets, predicted):
            out[i] = dataclasses.replace(docs[i], genre=str(genre))
        return out


def impute_genre(labeled, unlabeled, classifier=None, seed=0):
    """Train on labeled documents, impute unlabeled ones.

    Returns (documents, holdout accuracy); |output| = |input of unlabeled|.
    """
    imputer = GenreImputer(classifier=classifier, seed=seed).fit(labeled)
    return imputer.transform(unlabeled), imputer.holdout_accuracy_
