"""Windowed linear-phase FIR design and zero-phase filtering.

Filters are odd-length symmetric kernels; zero phase comes from
centered convolution (equivalent to compensating the integer group
delay) with reflection padding at the edges. Tap counts are derived
from the narrowest transition band using the Hamming window rule and
bumped if the measured response misses the attenuation targets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal

from ..errors import ValidationError

_WINDOW_TRANSITION_FACTOR = {"hamming": 3.3, "hann": 3.1, "blackman": 5.5}


@dataclass(frozen=True)
class FilterSpec:
    kind: str  # "bandpass" | "notch"
    low_hz: float | None = None
    high_hz: float | None = None
    center_hz: float | None = None
    bandwidth_hz: float | None = None
    n_taps: int | None = None  # odd; None = derive from transition widths
    window: str = "hamming"
    transition_low_hz: float = 1.0
    transition_high_hz: float = 12.5

    def edges(self) -> tuple[float, float]:
        if self.kind == "bandpass":
            if self.low_hz is None or self.high_hz is None:
                raise ValidationError("bandpass spec requires low_hz and high_hz")
            return float(self.low_hz), float(self.high_hz)
        if self.kind == "notch":
            if self.center_hz is None or self.bandwidth_hz is None:
                raise ValidationError("notch spec requires center_hz and bandwidth_hz")
            return (float(self.center_hz) - float(self.bandwidth_hz) / 2.0,
                    float(self.center_hz) + float(self.bandwidth_hz) / 2.0)
        raise ValidationError(f"unknown filter kind: {self.kind!r}")

    def validate(self, rate_hz: float) -> "FilterSpec":
        lo, hi = self.edges()
        nyq = rate_hz / 2.0
        if not (0.0 < lo < hi < nyq):
            raise ValidationError(
                f"{self.kind} edges ({lo}, {hi}) must satisfy 0 < low < high < {nyq} (Nyquist)"
            )
        if self.n_taps is not None and self.n_taps % 2 == 0:
            raise ValidationError("n_taps must be odd for an integer group delay")
        if self.window not in _WINDOW_TRANSITION_FACTOR:
            raise ValidationError(f"unsupported window {self.window!r}")
        return self


def bandpass_spec(low_hz=1.0, high_hz=50.0, **kw) -> FilterSpec:
    return FilterSpec(kind="bandpass", low_hz=low_hz, high_hz=high_hz, **kw)


def notch_spec(center_hz=50.0, bandwidth_hz=2.0, **kw) -> FilterSpec:
    # Narrow transitions keep 45-49 Hz content intact around a 50 Hz notch.
    kw.setdefault("transition_low_hz", 1.0)
    kw.setdefault("transition_high_hz", 1.0)
    return FilterSpec(kind="notch", center_hz=center_hz, bandwidth_hz=bandwidth_hz, **kw)


def _auto_taps(spec: FilterSpec, rate_hz: float) -> int:
    factor = _WINDOW_TRANSITION_FACTOR[spec.window]
    width = min(spec.transition_low_hz, spec.transition_high_hz)
    n = int(np.ceil(factor * rate_hz / width))
    return n + 1 if n % 2 == 0 else n


def response_db(taps: np.ndarray, rate_hz: float, freqs_hz) -> np.ndarray:
    """Magnitude response in dB at the requested frequencies."""
    w, h = signal.freqz(taps, worN=2.0 * np.pi * np.asarray(freqs_hz, dtype=float) / rate_hz)
    return 20.0 * np.log10(np.abs(h) + 1e-300)


def design_fir(spec: FilterSpec, rate_hz: float) -> np.ndarray:
    """Design symmetric FIR taps for the given spec.

    Bandpass targets: within 1 dB of unity across the passband interior,
    >= 40 dB attenuation one transition width beyond each edge. Notch
    targets: >= 20 dB at the center, pass within 1 dB outside the
    transition bands.
    """
    spec.validate(rate_hz)
    lo, hi = spec.edges()
    n = spec.n_taps or _auto_taps(spec, rate_hz)
    for _ in range(4):
        if spec.kind == "bandpass":
            taps = signal.firwin(n, [lo, hi], window=spec.window, pass_zero=False, fs=rate_hz)
            stop = [f for f in (lo - spec.transition_low_hz, hi + spec.transition_high_hz)
                    if 0.0 < f < rate_hz / 2.0]
            passband = [f for f in (lo + spec.transition_low_hz, (lo + hi) / 2.0,
                                    hi - spec.transition_high_hz) if lo < f < hi]
            ok = (not stop or np.all(response_db(taps, rate_hz, stop) <= -40.0)) and \
                np.all(np.abs(response_db(taps, rate_hz, passband)) <= 1.0)
        else:
            taps = signal.firwin(n, [lo, hi], window=spec.window, pass_zero=True, fs=rate_hz)
            center = (lo + hi) / 2.0
            passband = [f for f in (lo - spec.transition_low_hz, hi + spec.transition_high_hz)
                        if 0.0 < f < rate_hz / 2.0]
            ok = response_db(taps, rate_hz, [center])[0] <= -20.0 and \
                np.all(np.abs(response_db(taps, rate_hz, passband)) <= 1.0)
        if ok or spec.n_taps is not None:
            return taps
        n = int(n * 1.3)
        n = n + 1 if n % 2 == 0 else n
    return taps


def filter_zero_phase(x: np.ndarray, taps: np.ndarray) -> np.ndarray:
    """Zero-phase filter each row of a (channels x time) matrix."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ValidationError(f"expected 2-D (channels x time) input, got shape {x.shape}")
    taps = np.asarray(taps, dtype=np.float64)
    n_taps = taps.shape[0]
    if x.shape[1] <= n_taps:
        raise ValidationError(
            f"signal length {x.shape[1]} must exceed filter length {n_taps}"
        )
    pad = n_taps - 1
    padded = np.pad(x, [(0, 0), (pad, pad)], mode="reflect")
    out = signal.fftconvolve(padded, taps[None, :], mode="same", axes=1)
    return out[:, pad:-pad]


def notch_50hz(x: np.ndarray, rate_hz: float, center_hz: float = 50.0,
               bandwidth_hz: float = 2.0) -> np.ndarray:
    taps = design_fir(notch_spec(center_hz=center_hz, bandwidth_hz=bandwidth_hz), rate_hz)
    return filter_zero_phase(x, taps)
