"""Core data model: session metadata, epochs, and the corpus index."""

from __future__ import annotations

import datetime
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError


@dataclass(frozen=True, order=True)
class SessionMeta:
    subject_id: str
    session_id: str
    device_id: str
    date: datetime.date

    def __post_init__(self):
        if not self.subject_id or not self.session_id:
            raise ValidationError("subject_id and session_id must be non-empty")
        if not self.device_id:
            raise ValidationError(f"session {self.subject_id}/{self.session_id}: device_id is empty")

    @property
    def key(self) -> tuple[str, str]:
        return (self.subject_id, self.session_id)


@dataclass
class Epoch:
    """One 1-second multichannel sample, the unit of verification."""

    meta: SessionMeta
    epoch_index: int
    samples: np.ndarray  # channels x time
    rate_hz: float

    def validate(self, n_channels: int | None = None):
        if self.epoch_index < 0:
            raise ValidationError("epoch_index must be >= 0")
        if self.samples.ndim != 2:
            raise ValidationError(f"epoch samples must be 2-D, got shape {self.samples.shape}")
        if not np.all(np.isfinite(self.samples)):
            raise ValidationError(
                f"epoch {self.meta.key}/{self.epoch_index} contains non-finite samples"
            )
        want_t = int(round(self.rate_hz))
        if self.samples.shape[1] != want_t:
            raise ValidationError(
                f"epoch {self.meta.key}/{self.epoch_index}: expected {want_t} samples "
                f"(1 s at {self.rate_hz} Hz), got {self.samples.shape[1]}"
            )
        if n_channels is not None and self.samples.shape[0] != n_channels:
            raise ValidationError(
                f"epoch {self.meta.key}/{self.epoch_index}: expected {n_channels} channels, "
                f"got {self.samples.shape[0]}"
            )
        return self


@dataclass(frozen=True)
class SessionRecord:
    meta: SessionMeta
    epochs_file: str
    n_epochs: int


@dataclass(frozen=True)
class CorpusIndex:
    """Immutable index over a corpus directory; sessions sorted by (subject, date)."""

    root: str
    rate_hz: float
    channels: tuple[str, ...]
    sessions: tuple[SessionRecord, ...]
    preprocessed: bool = False
    version: int = 1

    def subjects(self) -> list[str]:
        seen = dict.fromkeys(r.meta.subject_id for r in self.sessions)
        return sorted(seen)

    def sessions_of(self, subject_id: str) -> list[SessionRecord]:
        recs = [r for r in self.sessions if r.meta.subject_id == subject_id]
        return sorted(recs, key=lambda r: (r.meta.date, r.meta.session_id))

    @property
    def n_channels(self) -> int:
        return len(self.channels)
