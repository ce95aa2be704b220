"""Autoregressive coefficient features via Burg's method.

Coefficients follow the predictor convention: x[t] ~= sum_k a[k] * x[t-k].
The lattice recursion runs vectorized over rows, so a whole batch of
channels is fitted in one pass.
"""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateChannelError, ValidationError
from .spec import ArSpec


def burg(x: np.ndarray, order: int) -> np.ndarray:
    """Burg AR coefficients for each row of x.

    x: (rows, samples) -> (rows, order). Rows with zero power yield a
    zero reflection coefficient at the degenerate stage rather than NaN;
    callers that care (feature extraction) check power up front.
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    n_rows, n_samples = x.shape
    if order >= n_samples:
        raise ValidationError(f"ar order {order} must be below sample count {n_samples}")
    a = np.zeros((n_rows, order))
    ef = x[:, 1:].copy()   # forward prediction errors
    eb = x[:, :-1].copy()  # backward prediction errors (one-step lag)
    a_prev = None
    for m in range(order):
        den = np.einsum("ij,ij->i", ef, ef) + np.einsum("ij,ij->i", eb, eb)
        safe = den > 0
        k = np.where(safe, -2.0 * np.einsum("ij,ij->i", ef, eb) / np.where(safe, den, 1.0), 0.0)
        if m > 0:
            a[:, :m] = a_prev + k[:, None] * a_prev[:, ::-1]
        a[:, m] = k
        a_prev = a[:, :m + 1].copy()
        ef, eb = ef[:, 1:] + k[:, None] * eb[:, 1:], eb[:, :-1] + k[:, None] * ef[:, :-1]
    return -a  # error-filter -> predictor sign convention


def ar_features(epochs: np.ndarray, spec: ArSpec, labels=None) -> np.ndarray:
    """Per-epoch AR features: coefficients concatenated across channels.

    epochs: (n_epochs, channels, samples) -> (n_epochs, channels * order).
    Channels with (numerically) zero power are reported as degenerate.
    """
    epochs = np.asarray(epochs, dtype=np.float64)
    n_epochs, n_chan, n_samples = epochs.shape
    power = np.einsum("ecs,ecs->ec", epochs, epochs)
    dead = np.flatnonzero(np.any(power <= 1e-300, axis=0))
    if dead.size:
        names = [labels[i] if labels is not None else int(i) for i in dead]
        raise DegenerateChannelError(names, f"zero-power channel(s) in AR fit: {names}")
    coeffs = burg(epochs.reshape(n_epochs * n_chan, n_samples), spec.order)
    return coeffs.reshape(n_epochs, n_chan * spec.order)
