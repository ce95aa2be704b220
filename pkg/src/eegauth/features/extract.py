"""Corpus-wide feature extraction."""

from __future__ import annotations

import numpy as np

from ..corpus.io import load_session_epochs
from ..corpus.model import CorpusIndex
from ..errors import ValidationError
from .ar import ar_features
from .combine import ReferenceStats
from .psd import psd_features
from .spec import FeatureSpec, FeatureVector


def _session_matrix(epochs: np.ndarray, rate_hz: float, fspec: FeatureSpec, labels) -> np.ndarray:
    parts = []
    if fspec.kind in ("psd", "psd+ar"):
        parts.append(psd_features(epochs, rate_hz, fspec.psd))
    if fspec.kind in ("ar", "psd+ar"):
        parts.append(ar_features(epochs, fspec.ar, labels=labels))
    if not parts:
        raise ValidationError(f"feature kind {fspec.kind!r} cannot be extracted from epochs")
    return np.concatenate(parts, axis=1)


def extract_features(index: CorpusIndex, fspec: FeatureSpec,
                     reference_subjects: list[str] | None = None) -> list[FeatureVector]:
    """Extract the configured features for every epoch in the corpus.

    With post_norm = zscore-from-reference, standardization stats are
    fitted on the given reference subjects only (they must be disjoint
    from whatever subjects are later evaluated).
    """
    fspec.validate(index.rate_hz)
    if fspec.kind == "external":
        raise ValidationError("external features are imported, not extracted; use import_embeddings")
    fid = fspec.feature_id()
    labels = index.channels

    per_session: list[tuple] = []
    for rec in index.sessions:
        epochs = load_session_epochs(index, rec)
        mat = _session_matrix(epochs, index.rate_hz, fspec, labels)
        per_session.append((rec.meta, mat))

    stats = None
    if fspec.post_norm == "zscore-from-reference":
        if not reference_subjects:
            raise ValidationError("zscore-from-reference requires reference_subjects")
        ref = [m for meta, m in per_session if meta.subject_id in set(reference_subjects)]
        if not ref:
            raise ValidationError("no corpus sessions belong to the reference subjects")
        stats = ReferenceStats.fit(np.concatenate(ref, axis=0))

    out: list[FeatureVector] = []
    for meta, mat in per_session:
        for e in range(mat.shape[0]):
            vec = stats.apply(mat[e]) if stats is not None else mat[e]
            out.append(FeatureVector(meta=meta, epoch_index=e, vec=vec, feature_id=fid).validate())
    return out
