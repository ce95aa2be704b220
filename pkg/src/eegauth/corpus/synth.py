"""Seeded synthetic multi-session corpus generator.

Each subject is a bank of per-channel AR(2) resonators whose peak
frequencies sit near a shared population layout, offset by a small
subject-specific delta. A session re-renders the same subject excitation
with session-perturbed resonator frequencies plus gain/offset drift,
both scaled by `session_drift_scale` (with a day-proportional growth
term), then a per-device gain/offset and per-epoch white noise are
applied. With drift and noise at zero every epoch of a subject is
bit-identical on a given device.
"""

from __future__ import annotations

import datetime
import os
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from .channels import canonical_labels
from .io import save_manifest, write_epoch_file
from .model import CorpusIndex, SessionMeta, SessionRecord

# Session-effect model constants: effect size w = drift * (floor + slope * days/30),
# applied as freq jitter (Hz), relative gain jitter, and offset (in waveform-RMS units).
DRIFT_FLOOR = 1.0
DRIFT_DAY_SLOPE = 0.6
FREQ_JITTER_HZ = 2.5
GAIN_JITTER = 0.5
OFFSET_JITTER = 0.5

_WARMUP = 400
_BASE_DATE = datetime.date(2024, 1, 7)


@dataclass(frozen=True)
class DeviceSpec:
    device_id: str
    gain_range: tuple[float, float] = (0.9, 1.1)
    offset_range: tuple[float, float] = (-0.1, 0.1)


@dataclass(frozen=True)
class SubjectSignature:
    freq_band_hz: tuple[float, float] = (6.0, 14.0)
    freq_sep_hz: float = 0.6
    radius_band: tuple[float, float] = (0.95, 0.98)
    amp_band: tuple[float, float] = (0.8, 1.2)
    amp_sep: float = 0.1


@dataclass(frozen=True)
class SynthConfig:
    n_subjects: int = 20
    sessions_per_subject: int = 3
    epochs_per_session: int = 16
    session_gap_days: tuple[int, int] = (6, 18)
    devices: tuple[DeviceSpec, ...] = (DeviceSpec("synth-A"),)
    subject_signature: SubjectSignature = SubjectSignature()
    session_drift_scale: float = 0.1
    noise_scale: float = 3.0
    rate_hz: float = 500.0
    seed: int = 0

    def validate(self) -> "SynthConfig":
        if self.n_subjects < 1 or self.sessions_per_subject < 1 or self.epochs_per_session < 1:
            raise ValidationError("subject, session, and epoch counts must all be >= 1")
        if self.session_drift_scale < 0:
            raise ValidationError("session_drift_scale must be >= 0")
        if self.noise_scale < 0:
            raise ValidationError("noise_scale must be >= 0")
        if not self.devices:
            raise ValidationError("at least one device is required")
        lo, hi = self.session_gap_days
        if lo < 1 or hi < lo:
            raise ValidationError(f"invalid session_gap_days range: {self.session_gap_days}")
        return self


@dataclass
class SynthCorpus:
    config: SynthConfig
    channels: tuple[str, ...]
    rate_hz: float
    sessions: list[tuple[SessionMeta, np.ndarray]]  # (meta, (n_epochs, C, T) float32)


def _ar2_filter(exc: np.ndarray, a1: np.ndarray, a2: np.ndarray) -> np.ndarray:
    """Run y[t] = a1*y[t-1] + a2*y[t-2] + exc[t] for all rows at once."""
    n_rows, t_total = exc.shape
    y = np.empty_like(exc)
    y[:, 0] = exc[:, 0]
    y[:, 1] = exc[:, 1] + a1 * y[:, 0]
    for t in range(2, t_total):
        y[:, t] = a1 * y[:, t - 1] + a2 * y[:, t - 2] + exc[:, t]
    return y


def synth_corpus(cfg: SynthConfig) -> SynthCorpus:
    """Generate the corpus in memory; a pure function of the config."""
    cfg.validate()
    labels = tuple(canonical_labels())
    n_chan = len(labels)
    t_len = int(round(cfg.rate_hz))
    sig = cfg.subject_signature

    root = np.random.SeedSequence(cfg.seed)
    ss_pop, ss_dev, ss_subj = root.spawn(3)
    r_pop = np.random.default_rng(ss_pop)
    base_f = r_pop.uniform(*sig.freq_band_hz, n_chan)
    base_r = r_pop.uniform(*sig.radius_band, n_chan)
    base_a = r_pop.uniform(*sig.amp_band, n_chan)

    dev_effects = {}
    for i, (dev, dss) in enumerate(zip(cfg.devices, ss_dev.spawn(len(cfg.devices)))):
        r_dev = np.random.default_rng(dss)
        dev_effects[dev.device_id] = (
            r_dev.uniform(*dev.gain_range, n_chan),
            r_dev.uniform(*dev.offset_range, n_chan),
        )

    # Plan every session first, then batch the AR recursions in one pass.
    plan = []
    for s, ss in enumerate(ss_subj.spawn(cfg.n_subjects)):
        ss_sig, ss_exc, ss_sess, ss_noise = ss.spawn(4)
        r_sig = np.random.default_rng(ss_sig)
        d_freq = r_sig.normal(0.0, sig.freq_sep_hz, n_chan)
        d_amp = r_sig.normal(0.0, sig.amp_sep, n_chan)
        exc = np.random.default_rng(ss_exc).normal(size=(n_chan, _WARMUP + t_len))
        r_sess = np.random.default_rng(ss_sess)
        noise_seeds = ss_noise.spawn(cfg.sessions_per_subject)

        days = 0
        for j in range(cfg.sessions_per_subject):
            if j > 0:
                days += int(r_sess.integers(cfg.session_gap_days[0], cfg.session_gap_days[1] + 1))
            w = cfg.session_drift_scale * (DRIFT_FLOOR + DRIFT_DAY_SLOPE * days / 30.0)
            # resonators stay inside the 1-50 Hz analysis band
            freqs = np.clip(base_f + d_freq + w * FREQ_JITTER_HZ * r_sess.normal(size=n_chan),
                            1.5, min(45.0, 0.45 * cfg.rate_hz))
            gain = 1.0 + w * GAIN_JITTER * r_sess.normal(size=n_chan)
            offset = w * OFFSET_JITTER * r_sess.normal(size=n_chan)
            device = cfg.devices[j % len(cfg.devices)].device_id
            meta = SessionMeta(
                subject_id=f"S{s + 1:03d}",
                session_id=f"V{j + 1:02d}",
                device_id=device,
                date=_BASE_DATE + datetime.timedelta(days=days),
            )
            plan.append((meta, freqs, base_r, base_a + d_amp, gain, offset, exc, noise_seeds[j]))

    a1 = np.concatenate([2.0 * p[2] * np.cos(2.0 * np.pi * p[1] / cfg.rate_hz) for p in plan])
    a2 = np.concatenate([-p[2] ** 2 for p in plan])
    exc_all = np.concatenate([p[6] for p in plan], axis=0)
    waves = _ar2_filter(exc_all, a1, a2)[:, -t_len:]

    sessions = []
    for i, (meta, freqs, radii, amps, gain, offset, exc, noise_seed) in enumerate(plan):
        w_base = waves[i * n_chan:(i + 1) * n_chan] * amps[:, None]
        rms = float(w_base.std()) or 1.0
        dev_gain, dev_off = dev_effects[meta.device_id]
        signal = (w_base * gain[:, None] + offset[:, None] * rms) * dev_gain[:, None] \
            + dev_off[:, None] * rms
        r_noise = np.random.default_rng(noise_seed)
        epochs = np.empty((cfg.epochs_per_session, n_chan, t_len), dtype=np.float32)
        for e in range(cfg.epochs_per_session):
            epochs[e] = signal + cfg.noise_scale * rms * r_noise.normal(size=(n_chan, t_len))
        sessions.append((meta, epochs))

    sessions.sort(key=lambda x: (x[0].subject_id, x[0].date, x[0].session_id))
    return SynthCorpus(config=cfg, channels=labels, rate_hz=cfg.rate_hz, sessions=sessions)


def save_corpus(corpus: SynthCorpus, out_dir) -> CorpusIndex:
    """Write a generated corpus as manifest + epoch files."""
    out_dir = str(out_dir)
    epochs_dir = os.path.join(out_dir, "epochs")
    os.makedirs(epochs_dir, exist_ok=True)
    records = []
    for meta, epochs in corpus.sessions:
        rel = os.path.join("epochs", f"{meta.subject_id}_{meta.session_id}.epo")
        write_epoch_file(os.path.join(out_dir, rel), epochs, corpus.rate_hz)
        records.append(SessionRecord(meta=meta, epochs_file=rel, n_epochs=epochs.shape[0]))
    index = CorpusIndex(
        root=out_dir,
        rate_hz=corpus.rate_hz,
        channels=corpus.channels,
        sessions=tuple(records),
        preprocessed=False,
    )
    save_manifest(index)
    return index
