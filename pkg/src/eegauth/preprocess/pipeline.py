"""The preprocessing chain: CAR -> bandpass -> notch -> normalize -> epoch.

The chain runs on the continuous recording of a session so that filter
edges and the normalization window are independent of epoch boundaries;
epoching happens last.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ..corpus.epoching import EpochingResult, epoch_stream
from ..corpus.io import load_session_epochs, save_manifest, write_epoch_file
from ..corpus.model import CorpusIndex, SessionRecord
from ..errors import EegAuthError, ValidationError
from .fir import FilterSpec, bandpass_spec, design_fir, filter_zero_phase, notch_spec
from .normalize import apply_car, robust_normalize


@dataclass(frozen=True)
class PreprocessConfig:
    bandpass: FilterSpec = bandpass_spec()
    notch: FilterSpec = notch_spec()


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except EegAuthError as e:
        raise type(e)(f"stage '{name}': {e}") from e


def preprocess_recording(recording: np.ndarray, rate_hz: float,
                         cfg: PreprocessConfig | None = None, labels=None) -> np.ndarray:
    cfg = cfg or PreprocessConfig()
    bp_taps = design_fir(cfg.bandpass, rate_hz)
    notch_taps = design_fir(cfg.notch, rate_hz)
    x = _stage("car", apply_car, recording)
    x = _stage("bandpass", filter_zero_phase, x, bp_taps)
    x = _stage("notch", filter_zero_phase, x, notch_taps)
    x = _stage("normalize", robust_normalize, x, labels=labels)
    return x


def preprocess_pipeline(recording: np.ndarray, rate_hz: float, stimulus_times,
                        cfg: PreprocessConfig | None = None, meta=None,
                        labels=None) -> EpochingResult:
    """Apply the full chain to a continuous recording, then epoch it."""
    x = preprocess_recording(recording, rate_hz, cfg, labels=labels)
    return _stage("epoch", epoch_stream, x, rate_hz, stimulus_times, meta=meta)


def preprocess_corpus(index: CorpusIndex, out_dir, cfg: PreprocessConfig | None = None) -> CorpusIndex:
    """Preprocess every session of a raw corpus into a new corpus directory.

    Stored epochs of a session are treated as contiguous slices of that
    session's recording: they are concatenated, run through the chain,
    and re-cut at the original 1-second boundaries. Refuses corpora that
    are already preprocessed.
    """
    if index.preprocessed:
        raise ValidationError(
            "corpus is already preprocessed; refusing to run the chain twice"
        )
    cfg = cfg or PreprocessConfig()
    out_dir = str(out_dir)
    t_len = int(round(index.rate_hz))
    records = []
    for rec in index.sessions:
        epochs = load_session_epochs(index, rec)
        recording = epochs.transpose(1, 0, 2).reshape(epochs.shape[1], -1)
        clean = preprocess_recording(recording, index.rate_hz, cfg, labels=index.channels)
        out = clean.reshape(clean.shape[0], epochs.shape[0], t_len).transpose(1, 0, 2)
        out_path = os.path.join(out_dir, rec.epochs_file)
        os.makedirs(os.path.dirname(out_path), exist_ok=True)
        write_epoch_file(out_path, out, index.rate_hz)
        records.append(SessionRecord(meta=rec.meta, epochs_file=rec.epochs_file,
                                     n_epochs=out.shape[0]))
    new_index = CorpusIndex(
        root=out_dir,
        rate_hz=index.rate_hz,
        channels=index.channels,
        sessions=tuple(records),
        preprocessed=True,
        version=index.version,
    )
    save_manifest(new_index)
    return new_index
