"""Minimal reader for the evaluation engine's corpus format.

The trainer consumes the engine's on-disk interfaces directly: the
`corpus.json` manifest and the binary epoch files (magic "EEGE").
"""

from __future__ import annotations

import json
import os
import struct
from dataclasses import dataclass

import numpy as np

_HEADER = struct.Struct("<4sHHIIf")


@dataclass(frozen=True)
class SessionInfo:
    subject: str
    session: str
    device: str
    date: str
    epochs_file: str
    n_epochs: int


@dataclass
class Corpus:
    root: str
    rate_hz: float
    channels: list[str]
    sessions: list[SessionInfo]

    def subjects(self) -> list[str]:
        return sorted({s.subject for s in self.sessions})

    def sessions_of(self, subject: str) -> list[SessionInfo]:
        return sorted((s for s in self.sessions if s.subject == subject),
                      key=lambda s: (s.date, s.session))

    def load_epochs(self, info: SessionInfo) -> np.ndarray:
        return read_epoch_file(os.path.join(self.root, info.epochs_file))


def read_epoch_file(path) -> np.ndarray:
    with open(path, "rb") as f:
        magic, version, n_channels, n_epochs, samples, _rate = _HEADER.unpack(f.read(_HEADER.size))
        if magic != b"EEGE" or version != 1:
            raise ValueError(f"{path}: not a version-1 epoch file")
        payload = f.read(n_epochs * n_channels * samples * 4)
    data = np.frombuffer(payload, dtype="<f4").reshape(n_epochs, n_channels, samples)
    return data.astype(np.float32)  # copy: frombuffer views are read-only


def load_corpus(path) -> Corpus:
    path = str(path)
    manifest = path if path.endswith(".json") else os.path.join(path, "corpus.json")
    with open(manifest) as f:
        doc = json.load(f)
    sessions = [SessionInfo(subject=str(e["subject"]), session=str(e["session"]),
                            device=str(e["device"]), date=str(e["date"]),
                            epochs_file=str(e["epochs_file"]), n_epochs=int(e["n_epochs"]))
                for e in doc["sessions"]]
    return Corpus(root=os.path.dirname(os.path.abspath(manifest)),
                  rate_hz=float(doc["rate_hz"]), channels=list(doc["channels"]),
                  sessions=sessions)
