"""Concatenating feature families and reference-cohort standardization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from .spec import FeatureVector


@dataclass
class ReferenceStats:
    """Per-dimension mean/std fitted on a reference cohort.

    Dimensions with ~zero spread are flagged and map to 0 after
    standardization instead of blowing up.
    """

    mean: np.ndarray
    std: np.ndarray
    degenerate_dims: np.ndarray

    @classmethod
    def fit(cls, vectors: np.ndarray, eps: float = 1e-12) -> "ReferenceStats":
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] < 1:
            raise ValidationError("reference stats need a non-empty 2-D (n, dim) array")
        mean = vectors.mean(axis=0)
        std = vectors.std(axis=0)
        degenerate = np.flatnonzero(std <= eps)
        return cls(mean=mean, std=std, degenerate_dims=degenerate)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        safe = np.where(self.std > 0, self.std, 1.0)
        out = (vec - self.mean) / safe
        if self.degenerate_dims.size:
            out[self.degenerate_dims] = 0.0
        return out


def combine_features(psd_vec: FeatureVector, ar_vec: FeatureVector,
                     reference_stats: ReferenceStats | None = None,
                     feature_id: str | None = None) -> FeatureVector:
    """Concatenate PSD and AR vectors of the same epoch.

    If reference stats are given, the concatenated vector is z-scored
    dimension-wise with them (fitted on a cohort disjoint from the
    evaluation subjects; never refit here).
    """
    if psd_vec.meta.key != ar_vec.meta.key or psd_vec.epoch_index != ar_vec.epoch_index:
        raise ValidationError(
            f"provenance mismatch: {psd_vec.meta.key}/{psd_vec.epoch_index} vs "
            f"{ar_vec.meta.key}/{ar_vec.epoch_index}"
        )
    vec = np.concatenate([psd_vec.vec, ar_vec.vec])
    if reference_stats is not None:
        if reference_stats.mean.shape != vec.shape:
            raise ValidationError(
                f"reference stats dim {reference_stats.mean.shape[0]} != vector dim {vec.shape[0]}"
            )
        vec = reference_stats.apply(vec)
    return FeatureVector(
        meta=psd_vec.meta,
        epoch_index=psd_vec.epoch_index,
        vec=vec,
        feature_id=feature_id or f"{psd_vec.feature_id}+{ar_vec.feature_id}",
    ).validate()
