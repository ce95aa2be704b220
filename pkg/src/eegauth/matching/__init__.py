from .scorers import (
    LinearScorer,
    LogRegConfig,
    ScorerConfig,
    make_scorer,
    score_distance,
    score_distance_batch,
    train_lda,
    train_logreg,
)
from .template import Template, augment_template, average_probe, build_template

__all__ = [
    "LinearScorer",
    "LogRegConfig",
    "ScorerConfig",
    "Template",
    "augment_template",
    "average_probe",
    "build_template",
    "make_scorer",
    "score_distance",
    "score_distance_batch",
    "train_lda",
    "train_logreg",
]
