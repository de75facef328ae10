"""Perplexity-guided sub-sampling and quality segmentation.

A Gaussian retention curve is centered between the quartiles of the
perplexity distribution, scaled so the expected retained fraction hits a
target ratio, and applied per document through a stable hash threshold so
results do not depend on processing order or worker count.
"""

import math
import random
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.stats import norm
from sklearn.base import BaseEstimator

from .errors import ConvergenceError, DataError
from .hashing import stable_hash64, unit_uniform

__all__ = [
    "PerplexityDistribution",
    "GaussianFit",
    "build_distribution",
    "fit_gaussian",
    "subsample",
    "segment",
    "GaussianPerplexitySampler",
    "QualitySegmenter",
    "SEGMENT_LABELS",
]

# 75th percentile of the standard normal; places q1/q3 at the Gaussian's
# own quartiles when initializing sigma
Z75 = float(norm.ppf(0.75))

SEGMENT_LABELS = ("good", "medium", "bad")

DEFAULT_BINS = 10_000
_CLIP_PERCENTILE = 99.9


@dataclass
class PerplexityDistribution:
    """Perplexity values with their histogram and type-7 quartiles."""

    values: np.ndarray
    bin_edges: np.ndarray
    counts: np.ndarray
    q1: float
    q3: float
    clip: float

    @property
    def bin_centers(self):
        return (self.bin_edges[:-1] + self.bin_edges[1:]) / 2.0


def _as_values(scores):
    out = []
    for s in scores:
        if hasattr(s, "perplexity"):
            out.append(s.perplexity)
        else:
            out.append(float(s))
    return np.asarray(out, dtype=float)


def build_distribution(scores, bins=DEFAULT_BINS):
    """Histogram + quartiles of a perplexity sample.

    The histogram spans [min, p99.9] with equal-width bins; values above the
    clip point are counted in the last bin so unbounded outliers cannot
    destroy bin resolution.
    """
    values = _as_values(scores)
    if values.size < 4:
        raise DataError("insufficient sample")
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise DataError("perplexities must be positive and finite")
    if bins < 2:
        raise DataError("bins must be >= 2")
    q1, q3 = np.quantile(values, [0.25, 0.75])  # type-7 linear interpolation
    clip = float(np.percentile(values, _CLIP_PERCENTILE))
    lo = float(values.min())
    if clip <= lo:
        clip = lo + max(abs(lo), 1.0) * 1e-9
    counts, edges = np.histogram(np.minimum(values, clip), bins=bins, range=(lo, clip))
    return PerplexityDistribution(
        values=values,
        bin_edges=edges,
        counts=counts,
        q1=float(q1),
        q3=float(q3),
        clip=clip,
    )


@dataclass
class GaussianFit:
    """Converged retention curve: keep probability P(p) = min(1, N * w(p))."""

    mu: float
    sigma: float
    n_factor: float
    ratio: float
    initial_ratio: float
    tolerance: float
    iterations_used: int
    histogram_spec: dict = field(default_factory=dict)

    def weight(self, p):
        p = np.asarray(p, dtype=float)
        return np.exp(-((p - self.mu) ** 2) / (2.0 * self.sigma**2))

    def retention(self, p):
        return np.minimum(1.0, self.n_factor * self.weight(p))

    def to_dict(self):
        return {
            "mu": self.mu,
            "sigma": self.sigma,
            "n_factor": self.n_factor,
            "ratio": self.ratio,
            "initial_ratio": self.initial_ratio,
            "tolerance": self.tolerance,
            "iterations_used": self.iterations_used,
            "histogram_spec": self.histogram_spec,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def _expected_ratio(counts, centers, mu, sigma, n_factor):
    w = np.exp(-((centers - mu) ** 2) / (2.0 * sigma**2))
    kept = np.minimum(1.0, n_factor * w)
    return float(np.dot(counts, kept) / counts.sum())


def fit_gaussian(
    dist,
    ratio,
    tolerance=1e-3,
    max_iterations=100,
    adjust_mu=False,
    bins_meta=None,
):
    """Solve for the normalization factor reaching the target keep ratio.

    mu starts at the quartile midpoint and sigma at (q3-q1)/(2*z75) so the
    observed quartiles sit at the Gaussian's own quartiles; N is then found
    by bisection on the histogram-expected retained fraction. The expected
    fraction is continuous and monotone in N, so bisection always converges
    for ratios in (0, 1].
    """
    if not 0.0 < ratio <= 1.0:
        raise DataError(f"ratio must be in (0, 1], got {ratio}")
    if dist.q1 >= dist.q3:
        raise DataError("degenerate quartiles")
    mu = (dist.q1 + dist.q3) / 2.0
    sigma = (dist.q3 - dist.q1) / (2.0 * Z75)
    counts = dist.counts.astype(float)
    centers = dist.bin_centers
    total = counts.sum()

    w = np.exp(-((centers - mu) ** 2) / (2.0 * sigma**2))
    initial_ratio = float(np.dot(counts, w) / total)
    spec = {
        "bins": int(len(counts)),
        "low": float(dist.bin_edges[0]),
        "clip": float(dist.clip),
        "q1": dist.q1,
        "q3": dist.q3,
    }
    if bins_meta:
        spec.update(bins_meta)

    if ratio == 1.0:
        # keep-everything: push N past the cap for every observed value
        w_min = min(float(np.exp(-((dist.values - mu) ** 2) / (2 * sigma**2)).min()),
                    float(w.min()))
        n_factor = (1.0 + 1e-9) / w_min
        return GaussianFit(mu, sigma, n_factor, ratio, initial_ratio, tolerance, 0, spec)

    def solve_n(mu_try, budget):
        w_try = np.exp(-((centers - mu_try) ** 2) / (2.0 * sigma**2))
        n_lo, n_hi = 0.0, ratio / float(np.dot(counts, w_try) / total)
        used = 0
        while _expected_ratio(counts, centers, mu_try, sigma, n_hi) < ratio:
            n_hi *= 2.0
            used += 1
            if used > budget:
                return n_hi, used, _expected_ratio(counts, centers, mu_try, sigma, n_hi)
        n = n_hi
        err = _expected_ratio(counts, centers, mu_try, sigma, n) - ratio
        while abs(err) > tolerance and used < budget:
            n = (n_lo + n_hi) / 2.0
            err = _expected_ratio(counts, centers, mu_try, sigma, n) - ratio
            if err < 0:
                n_lo = n
            else:
                n_hi = n
            used += 1
        return n, used, err

    n_factor, iterations, err = solve_n(mu, max_iterations)
    if abs(err) > tolerance:
        best = GaussianFit(mu, sigma, n_factor, ratio, initial_ratio, tolerance,
                           iterations, spec)
        raise ConvergenceError(
            f"ratio fit did not converge in {max_iterations} iterations",
            best_fit=best,
            residual=abs(err),
        )

    if adjust_mu:
        # optional refinement: nudge mu within [q1, q3] to maximize retention
        # of the central-quartile mass at the same overall ratio
        central = (centers >= dist.q1) & (centers <= dist.q3)

        def central_deficiency(mu_try):
            n_try, _, _ = solve_n(mu_try, max_iterations)
            w_try = np.exp(-((centers - mu_try) ** 2) / (2.0 * sigma**2))
            kept = np.minimum(1.0, n_try * w_try)
            mass = counts[central].sum()
            return float(np.dot(counts[central], 1.0 - kept[central]) / mass)

        res = minimize_scalar(
            central_deficiency, bounds=(dist.q1, dist.q3), method="bounded",
            options={"maxiter": 20, "xatol": (dist.q3 - dist.q1) * 1e-3},
        )
        mu = float(res.x)
        n_factor, extra, err = solve_n(mu, max_iterations)
        iterations += extra

    return GaussianFit(mu, sigma, n_factor, ratio, initial_ratio, tolerance,
                       iterations, spec)


def _doc_perplexity(doc):
    p = getattr(doc, "perplexity", None)
    if p is None or not math.isfinite(p) or p <= 0:
        raise DataError(f"missing perplexity for document {getattr(doc, 'id', '?')}")
    return p


def subsample(documents, fit, seed, workers=1):
    """Keep each document iff its retention probability clears its hash
    threshold; deterministic in (input, fit, seed), order preserved."""
    docs = list(documents)
    chunks = _chunk(docs, workers)
    kept = []
    for chunk in chunks:
        kept.extend(
            d
            for d in chunk
            if fit.retention(_doc_perplexity(d)) >= unit_uniform(d.id, seed)
        )
    return kept


def _chunk(items, workers):
    if workers <= 1 or len(items) <= 1:
        return [items]
    size = math.ceil(len(items) / workers)
    return [items[i : i + size] for i in range(0, len(items), size)]


def segment_label(perplexity, q1, q3):
    """Quartile band: strictly below q1 is good, strictly above q3 is bad,
    boundary values are medium."""
    if perplexity < q1:
        return "good"
    if perplexity > q3:
        return "bad"
    return "medium"


def segment(documents, dist, seed=0):
    """Partition documents into quality bands, shuffling each band with a
    seeded RNG. Returns {label: [documents]}."""
    bands = {label: [] for label in SEGMENT_LABELS}
    for doc in documents:
        bands[segment_label(_doc_perplexity(doc), dist.q1, dist.q3)].append(doc)
    for label, docs in bands.items():
        random.Random(stable_hash64(label, seed)).shuffle(docs)
    return bands


class GaussianPerplexitySampler(BaseEstimator):
    """Estimator facade: fit on perplexity scores, transform document streams."""

    def __init__(self, ratio=0.5, bins=DEFAULT_BINS, tolerance=1e-3, seed=0,
                 adjust_mu=False):
        self.ratio = ratio
        self.bins = bins
        self.tolerance = tolerance
        self.seed = seed
        self.adjust_mu = adjust_mu

    def fit(self, X, y=None):
        self.distribution_ = build_distribution(X, bins=self.bins)
        self.fit_ = fit_gaussian(
            self.distribution_, self.ratio, tolerance=self.tolerance,
            adjust_mu=self.adjust_mu,
        )
        return self

    def transform(self, X):
        return subsample(X, self.fit_, self.seed)


class QualitySegmenter(BaseEstimator):
    """Estimator facade for quartile-band segmentation."""

    def __init__(self, bins=DEFAULT_BINS, seed=0):
        self.bins = bins
        self.seed = seed

    def fit(self, X, y=None):
        self.distribution_ = build_distribution(X, bins=self.bins)
        return self

    def transform(self, X):
        return segment(X, self.distribution_, seed=self.seed)
