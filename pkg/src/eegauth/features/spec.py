"""Feature configuration and the per-epoch feature vector."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from ..corpus.model import SessionMeta
from ..errors import ValidationError


@dataclass(frozen=True)
class PsdSpec:
    segment_len: int = 256
    overlap: float = 0.5
    taper: str = "hann"
    band_hz: tuple[float, float] = (1.0, 50.0)


@dataclass(frozen=True)
class ArSpec:
    order: int = 6
    method: str = "burg"


@dataclass(frozen=True)
class FeatureSpec:
    kind: str = "psd+ar"  # psd | ar | psd+ar | external
    psd: PsdSpec = PsdSpec()
    ar: ArSpec = ArSpec()
    post_norm: str = "none"  # none | zscore-from-reference

    def validate(self, rate_hz: float | None = None) -> "FeatureSpec":
        if self.kind not in ("psd", "ar", "psd+ar", "external"):
            raise ValidationError(f"unknown feature kind {self.kind!r}")
        if not (0.0 <= self.psd.overlap < 1.0):
            raise ValidationError(f"psd overlap must be in [0, 1), got {self.psd.overlap}")
        if self.ar.order < 1:
            raise ValidationError("ar order must be >= 1")
        if self.ar.method != "burg":
            raise ValidationError(f"unsupported ar method {self.ar.method!r}")
        if self.ar.order >= self.psd.segment_len:
            raise ValidationError("ar order must be smaller than the segment length")
        if self.post_norm not in ("none", "zscore-from-reference"):
            raise ValidationError(f"unknown post_norm {self.post_norm!r}")
        lo, hi = self.psd.band_hz
        if rate_hz is not None and not (0.0 < lo < hi <= rate_hz / 2.0):
            raise ValidationError(f"psd band {self.psd.band_hz} outside (0, {rate_hz / 2}]")
        return self

    def feature_id(self) -> str:
        """Stable hash identifying the extractor configuration."""
        doc = {
            "kind": self.kind,
            "psd": [self.psd.segment_len, self.psd.overlap, self.psd.taper, list(self.psd.band_hz)],
            "ar": [self.ar.order, self.ar.method],
            "post_norm": self.post_norm,
        }
        blob = json.dumps(doc, sort_keys=True).encode()
        return "hc-" + hashlib.sha256(blob).hexdigest()[:12]


@dataclass
class FeatureVector:
    meta: SessionMeta
    epoch_index: int
    vec: np.ndarray
    feature_id: str

    def validate(self) -> "FeatureVector":
        if self.vec.ndim != 1:
            raise ValidationError("feature vector must be 1-D")
        if not np.all(np.isfinite(self.vec)):
            raise ValidationError(
                f"non-finite feature values for {self.meta.key} epoch {self.epoch_index}"
            )
        return self


def check_same_feature_id(vectors) -> str:
    ids = {v.feature_id for v in vectors}
    if len(ids) > 1:
        raise ValidationError(f"mixed feature_id values cannot be compared: {sorted(ids)}")
    if not ids:
        raise ValidationError("no feature vectors given")
    return next(iter(ids))
