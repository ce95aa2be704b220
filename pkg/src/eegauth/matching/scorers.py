"""Similarity scorers: distance-to-template and shallow classifiers.

Every scorer returns a similarity (higher = more likely genuine), so
downstream rate computation is scorer-agnostic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from .template import Template, _unit


def score_distance(probe: np.ndarray, template: Template) -> float:
    """similarity = -distance(probe, centroid) under the template's metric."""
    return float(score_distance_batch(probe[None, :], template)[0])


def score_distance_batch(probes: np.ndarray, template: Template) -> np.ndarray:
    probes = np.asarray(probes, dtype=np.float64)
    if probes.ndim != 2 or probes.shape[1] != template.centroid.shape[0]:
        raise ValidationError(
            f"probe dim {probes.shape[-1]} != template dim {template.centroid.shape[0]}"
        )
    c = template.centroid
    if template.metric == "euclidean":
        d = np.linalg.norm(probes - c, axis=1)
    elif template.metric == "manhattan":
        d = np.abs(probes - c).sum(axis=1)
    elif template.metric == "cosine":
        cn = _unit(c)
        norms = np.linalg.norm(probes, axis=1)
        if np.any(norms == 0):
            raise ValidationError("zero-norm probe under cosine metric")
        d = 1.0 - (probes / norms[:, None]) @ cn
    else:
        raise ValidationError(f"unknown metric {template.metric!r}")
    return -d


@dataclass(frozen=True)
class LogRegConfig:
    l2_penalty: float = 1e-2
    max_iters: int = 500
    tol: float = 1e-8


@dataclass
class LinearScorer:
    """Linear similarity: score(x) = w.x + b.

    For logistic regression the score is the positive-class logit; for
    LDA it is the signed projection minus the class-midpoint threshold.
    """

    kind: str
    weights: np.ndarray
    bias: float
    feature_id: str = ""

    def score(self, vec: np.ndarray) -> float:
        return float(np.dot(self.weights, vec) + self.bias)

    def score_batch(self, probes: np.ndarray) -> np.ndarray:
        return np.asarray(probes, dtype=np.float64) @ self.weights + self.bias

    def save(self, path):
        doc = {"kind": self.kind, "bias": self.bias, "feature_id": self.feature_id,
               "weights": [float(w) for w in self.weights]}
        with open(path, "w") as f:
            json.dump(doc, f, sort_keys=True)
            f.write("\n")

    @classmethod
    def load(cls, path) -> "LinearScorer":
        with open(path) as f:
            doc = json.load(f)
        return cls(kind=doc["kind"], weights=np.asarray(doc["weights"], dtype=np.float64),
                   bias=float(doc["bias"]), feature_id=doc.get("feature_id", ""))


def _design(positives, negatives):
    pos = np.asarray(positives, dtype=np.float64)
    neg = np.asarray(negatives, dtype=np.float64)
    if pos.ndim != 2 or pos.shape[0] < 1:
        raise ValidationError("need at least one positive sample")
    if neg.ndim != 2 or neg.shape[0] < 1:
        raise ValidationError("need at least one negative sample")
    if pos.shape[1] != neg.shape[1]:
        raise ValidationError(f"dim mismatch: positives {pos.shape[1]}, negatives {neg.shape[1]}")
    return pos, neg


def train_logreg(positives, negatives, cfg: LogRegConfig = LogRegConfig()) -> LinearScorer:
    """L2-regularized logistic regression by full-batch gradient descent.

    Initialization at zero and a step size from a Lipschitz bound make
    the fit deterministic; no randomness is involved anywhere.
    """
    pos, neg = _design(positives, negatives)
    x = np.concatenate([pos, neg])
    y = np.concatenate([np.ones(len(pos)), -np.ones(len(neg))])
    if np.allclose(x, x[0]):
        raise ValidationError("all training samples identical; logistic fit is degenerate")
    n, d = x.shape
    sigma = np.linalg.norm(x, 2)
    lipschitz = 0.25 * (sigma * sigma / n + 1.0) + cfg.l2_penalty
    step = 1.0 / lipschitz
    w = np.zeros(d)
    b = 0.0
    for _ in range(cfg.max_iters):
        margin = y * (x @ w + b)
        # sigmoid(-margin), computed stably on both tails
        s = np.where(margin >= 0, np.exp(-np.clip(margin, 0, 700)) / (1 + np.exp(-np.clip(margin, 0, 700))),
                     1 / (1 + np.exp(np.clip(margin, -700, 700))))
        grad_w = -(x.T @ (y * s)) / n + cfg.l2_penalty * w
        grad_b = -np.mean(y * s)
        w -= step * grad_w
        b -= step * grad_b
        if np.sqrt(np.sum(grad_w ** 2) + grad_b ** 2) < cfg.tol:
            break
    return LinearScorer(kind="logreg", weights=w, bias=b)


def train_lda(positives, negatives, shrinkage: float = 0.1) -> LinearScorer:
    """Fisher discriminant with shrinkage-regularized pooled covariance."""
    pos, neg = _design(positives, negatives)
    d = pos.shape[1]
    mu_p, mu_n = pos.mean(axis=0), neg.mean(axis=0)
    centered = np.concatenate([pos - mu_p, neg - mu_n])
    denom = max(len(pos) + len(neg) - 2, 1)
    cov = (centered.T @ centered) / denom
    if shrinkage > 0:
        cov = (1.0 - shrinkage) * cov + shrinkage * (np.trace(cov) / d) * np.eye(d)
    try:
        w = np.linalg.solve(cov, mu_p - mu_n)
    except np.linalg.LinAlgError:
        raise ValidationError(
            "pooled covariance is singular; increase shrinkage or add samples"
        )
    if not np.all(np.isfinite(w)) or (shrinkage == 0 and np.linalg.matrix_rank(cov) < d):
        raise ValidationError(
            "pooled covariance is singular; increase shrinkage or add samples"
        )
    bias = -float(np.dot(w, (mu_p + mu_n) / 2.0))
    return LinearScorer(kind="lda", weights=w, bias=bias)


@dataclass(frozen=True)
class ScorerConfig:
    kind: str = "distance"  # distance | logreg | lda
    metric: str = "euclidean"
    logreg: LogRegConfig = LogRegConfig()
    lda_shrinkage: float = 0.1
    negative_cohort: tuple[str, ...] = ()  # subject ids, disjoint from evaluation

    def validate(self) -> "ScorerConfig":
        if self.kind not in ("distance", "logreg", "lda"):
            raise ValidationError(f"unknown scorer kind {self.kind!r}")
        if self.kind != "distance" and not self.negative_cohort:
            raise ValidationError(f"{self.kind} scorer requires a negative cohort")
        return self


def make_scorer(template: Template, cfg: ScorerConfig, negatives: np.ndarray | None = None):
    """Build the per-subject scoring function for a trial set."""
    cfg.validate()
    if cfg.kind == "distance":
        return lambda probes: score_distance_batch(probes, template)
    if negatives is None or len(negatives) == 0:
        raise ValidationError(f"{cfg.kind} scorer needs negative-cohort vectors")
    positives = np.stack([v.vec for v in template.enrollment_vectors])
    if cfg.kind == "logreg":
        model = train_logreg(positives, negatives, cfg.logreg)
    else:
        model = train_lda(positives, negatives, cfg.lda_shrinkage)
    return model.score_batch
