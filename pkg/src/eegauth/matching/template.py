"""Enrollment templates and probe construction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from ..features.spec import FeatureVector, check_same_feature_id

METRICS = ("euclidean", "cosine", "manhattan")


def _unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    if n == 0:
        raise ValidationError("zero-norm vector cannot be L2-normalized for cosine scoring")
    return v / n


@dataclass(frozen=True)
class Template:
    """A subject's enrollment representation: vector set plus centroid.

    The centroid is the arithmetic mean of the enrollment vectors; under
    the cosine metric it is the mean of the L2-normalized vectors.
    """

    subject_id: str
    enrollment_vectors: tuple[FeatureVector, ...]
    centroid: np.ndarray
    metric: str
    feature_id: str

    @property
    def size(self) -> int:
        return len(self.enrollment_vectors)


def _centroid(vectors: list[FeatureVector], metric: str) -> np.ndarray:
    mat = np.stack([v.vec for v in vectors])
    if metric == "cosine":
        mat = np.stack([_unit(v.vec) for v in vectors])
    return mat.mean(axis=0)


def build_template(subject_id: str, vectors: list[FeatureVector], metric: str = "euclidean") -> Template:
    if metric not in METRICS:
        raise ValidationError(f"unknown metric {metric!r}; choose from {METRICS}")
    if not vectors:
        raise ValidationError(f"cannot build a template for {subject_id} from zero vectors")
    fid = check_same_feature_id(vectors)
    dims = {v.vec.shape[0] for v in vectors}
    if len(dims) > 1:
        raise ValidationError(f"mixed vector dimensions in template: {sorted(dims)}")
    return Template(
        subject_id=subject_id,
        enrollment_vectors=tuple(vectors),
        centroid=_centroid(vectors, metric),
        metric=metric,
        feature_id=fid,
    )


def augment_template(t: Template, new_vectors: list[FeatureVector], cap: int) -> Template:
    """Append vectors; if the set exceeds `cap`, drop the oldest (FIFO)."""
    if cap < 1:
        raise ValidationError("cap must be >= 1")
    for v in new_vectors:
        if v.feature_id != t.feature_id:
            raise ValidationError(
                f"feature_id mismatch: template {t.feature_id}, vector {v.feature_id}"
            )
        if v.vec.shape != t.centroid.shape:
            raise ValidationError(
                f"dimension mismatch: template {t.centroid.shape[0]}, vector {v.vec.shape[0]}"
            )
    kept = list(t.enrollment_vectors) + list(new_vectors)
    if len(kept) > cap:
        kept = kept[len(kept) - cap:]
    return Template(
        subject_id=t.subject_id,
        enrollment_vectors=tuple(kept),
        centroid=_centroid(kept, t.metric),
        metric=t.metric,
        feature_id=t.feature_id,
    )


def average_probe(vectors: list[FeatureVector], n: int) -> FeatureVector:
    """Mean of the first n vectors in epoch order: the probe for one attempt."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    if len(vectors) < n:
        raise ValidationError(f"need at least {n} vectors, got {len(vectors)}")
    chosen = sorted(vectors, key=lambda v: v.epoch_index)[:n]
    fid = check_same_feature_id(chosen)
    vec = np.stack([v.vec for v in chosen]).mean(axis=0)
    return FeatureVector(meta=chosen[0].meta, epoch_index=chosen[0].epoch_index,
                         vec=vec, feature_id=fid)
