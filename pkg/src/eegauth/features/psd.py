"""Welch power spectral density features."""

from __future__ import annotations

import numpy as np
from scipy import signal

from ..errors import ValidationError
from .spec import PsdSpec


def welch_psd_matrix(epochs: np.ndarray, rate_hz: float, spec: PsdSpec) -> tuple[np.ndarray, np.ndarray]:
    """Welch PSD of a batch of epochs.

    epochs: (..., channels, samples). Returns (band frequencies,
    densities shaped (..., channels, n_band_bins)); band bins are those
    with band_lo <= f <= band_hi.
    """
    epochs = np.asarray(epochs, dtype=np.float64)
    n_samples = epochs.shape[-1]
    if spec.segment_len > n_samples:
        raise ValidationError(
            f"psd segment_len {spec.segment_len} exceeds epoch length {n_samples}"
        )
    noverlap = int(round(spec.segment_len * spec.overlap))
    freqs, pxx = signal.welch(
        epochs,
        fs=rate_hz,
        window=spec.taper,
        nperseg=spec.segment_len,
        noverlap=noverlap,
        axis=-1,
    )
    lo, hi = spec.band_hz
    mask = (freqs >= lo) & (freqs <= hi)
    return freqs[mask], pxx[..., mask]


def psd_features(epochs: np.ndarray, rate_hz: float, spec: PsdSpec) -> np.ndarray:
    """Per-epoch PSD features: band bins concatenated across channels.

    epochs: (n_epochs, channels, samples) -> (n_epochs, channels * n_bins).
    """
    _, pxx = welch_psd_matrix(epochs, rate_hz, spec)
    return pxx.reshape(pxx.shape[0], -1)
