"""Evaluation-set size sensitivity: EER over random subject subsets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from ..metrics.roc import eer_from_scores
from .trials import Trial


@dataclass(frozen=True)
class BootstrapRow:
    n_subjects: int
    mean_eer: float
    std_eer: float
    n_repeats: int


def restrict_to_subjects(trials: list[Trial], scores: np.ndarray, subjects) -> tuple[np.ndarray, np.ndarray]:
    """Genuine/impostor scores of trials fully inside a subject subset."""
    subset = set(subjects)
    scores = np.asarray(scores)
    keep = np.array([t.claimed_subject in subset and t.probe_subject in subset
                     for t in trials], dtype=bool)
    flags = np.array([t.genuine for t in trials], dtype=bool)
    return scores[keep & flags], scores[keep & ~flags]


def bootstrap_subject_count(trials: list[Trial], scores: np.ndarray,
                            n_values, repeats: int, seed: int) -> list[BootstrapRow]:
    """For each subset size N, draw `repeats` subject subsets and report
    the mean and population std of the EER over the draws."""
    if repeats < 1:
        raise ValidationError("repeats must be >= 1")
    subjects = sorted({t.claimed_subject for t in trials})
    rng = np.random.default_rng(seed)
    rows = []
    for n in n_values:
        if n < 2:
            raise ValidationError(
                "subset size must be >= 2: at least one genuine user and one impostor are required"
            )
        if n > len(subjects):
            raise ValidationError(f"subset size {n} exceeds available subjects ({len(subjects)})")
        eers = []
        for _ in range(repeats):
            chosen = rng.choice(subjects, size=n, replace=False)
            gen, imp = restrict_to_subjects(trials, scores, chosen)
            if gen.size == 0 or imp.size == 0:
                continue
            eers.append(eer_from_scores(gen, imp))
        if not eers:
            raise ValidationError(f"no usable draws at subset size {n}")
        arr = np.asarray(eers)
        std = 0.0 if arr.max() == arr.min() else float(arr.std())
        rows.append(BootstrapRow(n_subjects=int(n), mean_eer=float(arr.mean()),
                                 std_eer=std, n_repeats=len(eers)))
    return rows
