"""On-disk corpus format.

Manifest `corpus.json`:
    {version, rate_hz, preprocessed, channels: [93 labels],
     sessions: [{subject, session, device, date: "YYYY-MM-DD",
                 epochs_file, n_epochs}]}

Epoch file (little-endian): magic "EEGE", u16 version=1, u16 n_channels,
u32 n_epochs, u32 samples_per_epoch, f32 rate_hz, then the epochs
consecutively, each stored channel-major as f32.
"""

from __future__ import annotations

import datetime
import json
import os
import struct

import numpy as np

from ..errors import DataError
from .model import CorpusIndex, SessionMeta, SessionRecord

EPOCH_MAGIC = b"EEGE"
_HEADER = struct.Struct("<4sHHIIf")

MANIFEST_NAME = "corpus.json"


def write_epoch_file(path, epochs: np.ndarray, rate_hz: float):
    """Write an (n_epochs, n_channels, samples) array as an epoch file."""
    epochs = np.asarray(epochs, dtype="<f4")
    if epochs.ndim != 3:
        raise DataError(f"epoch array must be 3-D (epochs, channels, samples), got {epochs.shape}")
    n_epochs, n_channels, samples = epochs.shape
    with open(path, "wb") as f:
        f.write(_HEADER.pack(EPOCH_MAGIC, 1, n_channels, n_epochs, samples, rate_hz))
        f.write(epochs.tobytes(order="C"))


def read_epoch_file(path) -> tuple[np.ndarray, float]:
    """Read an epoch file, returning ((n_epochs, n_channels, samples) float64, rate_hz)."""
    try:
        with open(path, "rb") as f:
            header = f.read(_HEADER.size)
            if len(header) < _HEADER.size:
                raise DataError(f"epoch file {path}: truncated header")
            magic, version, n_channels, n_epochs, samples, rate_hz = _HEADER.unpack(header)
            if magic != EPOCH_MAGIC:
                raise DataError(f"epoch file {path}: bad magic {magic!r}")
            if version != 1:
                raise DataError(f"epoch file {path}: unsupported version {version}")
            payload = f.read(n_epochs * n_channels * samples * 4)
    except FileNotFoundError:
        raise DataError(f"epoch file not found: {path}")
    want = n_epochs * n_channels * samples * 4
    if len(payload) != want:
        raise DataError(f"epoch file {path}: expected {want} payload bytes, got {len(payload)}")
    data = np.frombuffer(payload, dtype="<f4").reshape(n_epochs, n_channels, samples)
    return data.astype(np.float64), float(rate_hz)


def _parse_session(entry: dict, root: str, rate_hz: float) -> SessionRecord:
    try:
        meta = SessionMeta(
            subject_id=str(entry["subject"]),
            session_id=str(entry["session"]),
            device_id=str(entry["device"]),
            date=datetime.date.fromisoformat(entry["date"]),
        )
        return SessionRecord(meta=meta, epochs_file=str(entry["epochs_file"]),
                             n_epochs=int(entry["n_epochs"]))
    except KeyError as e:
        raise DataError(f"manifest session entry missing field {e}: {entry}")
    except ValueError as e:
        raise DataError(f"manifest session entry invalid: {e}")


def load_manifest(path) -> CorpusIndex:
    """Load and validate a corpus manifest.

    Returns the index with sessions sorted by (subject, date, session).
    Rejects duplicate (subject, session) keys and missing epoch files.
    """
    path = str(path)
    if os.path.isdir(path):
        path = os.path.join(path, MANIFEST_NAME)
    try:
        with open(path) as f:
            doc = json.load(f)
    except FileNotFoundError:
        raise DataError(f"manifest not found: {path}")
    except json.JSONDecodeError as e:
        raise DataError(f"manifest {path} is not valid JSON: {e}")

    for field in ("version", "rate_hz", "channels", "sessions"):
        if field not in doc:
            raise DataError(f"manifest {path} missing required field '{field}'")
    root = os.path.dirname(os.path.abspath(path))
    rate_hz = float(doc["rate_hz"])
    records = [_parse_session(e, root, rate_hz) for e in doc["sessions"]]

    seen: dict[tuple[str, str], bool] = {}
    for rec in records:
        if rec.meta.key in seen:
            raise DataError(f"duplicate (subject, session) key in manifest: {rec.meta.key}")
        seen[rec.meta.key] = True
    for rec in records:
        fp = os.path.join(root, rec.epochs_file)
        if not os.path.exists(fp):
            raise DataError(f"manifest references missing epoch file: {fp}")

    records.sort(key=lambda r: (r.meta.subject_id, r.meta.date, r.meta.session_id))
    return CorpusIndex(
        root=root,
        rate_hz=rate_hz,
        channels=tuple(doc["channels"]),
        sessions=tuple(records),
        preprocessed=bool(doc.get("preprocessed", False)),
        version=int(doc["version"]),
    )


def save_manifest(index: CorpusIndex, path=None):
    path = path or os.path.join(index.root, MANIFEST_NAME)
    doc = {
        "version": index.version,
        "rate_hz": index.rate_hz,
        "preprocessed": index.preprocessed,
        "channels": list(index.channels),
        "sessions": [
            {
                "subject": r.meta.subject_id,
                "session": r.meta.session_id,
                "device": r.meta.device_id,
                "date": r.meta.date.isoformat(),
                "epochs_file": r.epochs_file,
                "n_epochs": r.n_epochs,
            }
            for r in index.sessions
        ],
    }
    with open(path, "w") as f:
        json.dump(doc, f, indent=1, sort_keys=True)
        f.write("\n")


def load_session_epochs(index: CorpusIndex, record: SessionRecord,
                        validate: bool = True) -> np.ndarray:
    """Load one session's epochs as (n_epochs, n_channels, samples)."""
    data, rate_hz = read_epoch_file(os.path.join(index.root, record.epochs_file))
    if validate:
        if data.shape[0] != record.n_epochs:
            raise DataError(
                f"{record.epochs_file}: manifest says {record.n_epochs} epochs, file has {data.shape[0]}"
            )
        if data.shape[1] != index.n_channels:
            raise DataError(
                f"{record.epochs_file}: expected {index.n_channels} channels, got {data.shape[1]}"
            )
        if rate_hz != index.rate_hz:
            raise DataError(
                f"{record.epochs_file}: rate {rate_hz} Hz != manifest rate {index.rate_hz} Hz"
            )
        if not np.all(np.isfinite(data)):
            raise DataError(f"{record.epochs_file}: non-finite samples")
    return data
