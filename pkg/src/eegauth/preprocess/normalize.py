"""Common average reference and robust per-channel normalization."""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateChannelError, ValidationError


def apply_car(x: np.ndarray) -> np.ndarray:
    """Subtract the instantaneous cross-channel mean from every channel."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ValidationError(f"expected 2-D (channels x time) input, got shape {x.shape}")
    if x.shape[0] < 2:
        raise ValidationError("common average reference needs at least 2 channels")
    return x - x.mean(axis=0, keepdims=True)


def robust_normalize(x: np.ndarray, eps: float = 1e-12, labels=None) -> np.ndarray:
    """Per channel: subtract the median, divide by the interquartile range.

    Quartiles use linear interpolation on sorted values (type-7). Channels
    with IQR <= eps (constant / dead electrodes) raise
    DegenerateChannelError naming them.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ValidationError(f"expected 2-D (channels x time) input, got shape {x.shape}")
    med = np.median(x, axis=1, keepdims=True)
    q1, q3 = np.percentile(x, [25.0, 75.0], axis=1)
    iqr = q3 - q1
    dead = np.flatnonzero(iqr <= eps)
    if dead.size:
        names = [labels[i] if labels is not None else int(i) for i in dead]
        raise DegenerateChannelError(names)
    return (x - med) / iqr[:, None]
