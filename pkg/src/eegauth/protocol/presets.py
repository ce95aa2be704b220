"""Frozen channel-subset presets matching consumer-grade headsets."""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError

CHANNEL_PRESETS: dict[str, tuple[str, ...]] = {
    "emotiv14": ("AF3", "F7", "F3", "FC5", "T7", "P7", "O1", "O2",
                 "P8", "T8", "FC6", "F4", "F8", "AF4"),
    "dsi7": ("FCz", "Pz", "P3", "P4", "PO7", "PO8", "Oz"),
    "muse4": ("TP9", "AF7", "AF8", "TP10"),
}


def preset_labels(name: str) -> tuple[str, ...]:
    if name not in CHANNEL_PRESETS:
        raise ValidationError(
            f"unknown channel preset {name!r}; known presets: {sorted(CHANNEL_PRESETS)}"
        )
    return CHANNEL_PRESETS[name]


def select_channels(epochs: np.ndarray, channel_labels, preset: str):
    """Restrict channel rows to a preset, in preset order.

    epochs: (..., channels, samples). Returns (reduced epochs, labels).
    """
    wanted = preset_labels(preset)
    index = {l: i for i, l in enumerate(channel_labels)}
    missing = [l for l in wanted if l not in index]
    if missing:
        raise ValidationError(f"preset {preset!r} labels missing from corpus: {missing}")
    rows = [index[l] for l in wanted]
    return np.asarray(epochs)[..., rows, :], wanted
