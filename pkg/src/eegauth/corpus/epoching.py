"""Cutting continuous recordings into stimulus-aligned 1-second epochs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from .model import Epoch, SessionMeta


@dataclass
class EpochingResult:
    epochs: list[Epoch]
    n_skipped_overlap: int
    n_skipped_truncated: int


def epoch_stream(recording: np.ndarray, rate_hz: float, stimulus_times: list[int],
                 meta: SessionMeta | None = None) -> EpochingResult:
    """Cut one epoch of `rate_hz` samples per stimulus offset.

    Stimuli starting inside the previous epoch are skipped (keep-first
    rule), as are stimuli whose window would run past the end of the
    recording; both skip counts are reported rather than raised.
    """
    recording = np.asarray(recording)
    if recording.ndim != 2:
        raise ValidationError(f"recording must be 2-D (channels x time), got {recording.shape}")
    offsets = [int(t) for t in stimulus_times]
    if any(b <= a for a, b in zip(offsets, offsets[1:])):
        raise ValidationError("stimulus offsets must be strictly increasing")
    if offsets and offsets[0] < 0:
        raise ValidationError("stimulus offsets must be >= 0")

    length = int(round(rate_hz))
    t_total = recording.shape[1]
    meta = meta or SessionMeta("unknown", "unknown", "unknown", __import__("datetime").date(1970, 1, 1))

    epochs: list[Epoch] = []
    n_overlap = 0
    n_trunc = 0
    prev_end = -1
    for off in offsets:
        if off < prev_end:
            n_overlap += 1
            continue
        if off + length > t_total:
            n_trunc += 1
            continue
        samples = recording[:, off:off + length]
        epochs.append(Epoch(meta=meta, epoch_index=len(epochs), samples=samples, rate_hz=rate_hz))
        prev_end = off + length
    return EpochingResult(epochs=epochs, n_skipped_overlap=n_overlap, n_skipped_truncated=n_trunc)
