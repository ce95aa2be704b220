"""Canonical electrode layout and per-device channel mapping.

The 93-label canonical order is frozen in a versioned data file and is
the single source of truth for channel order everywhere in the toolkit.
Device maps translate native electrode names onto that order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from ..errors import DataError, ValidationError

_canonical_cache: list[str] | None = None


def canonical_labels() -> list[str]:
    """Return the frozen 93-label canonical channel order."""
    global _canonical_cache
    if _canonical_cache is None:
        with resources.files("eegauth.data").joinpath("channels_93.json").open() as f:
            doc = json.load(f)
        _canonical_cache = list(doc["labels"])
    return list(_canonical_cache)


@dataclass(frozen=True)
class ChannelMap:
    """Mapping from a device's native labels to canonical labels.

    `mapping` is native label -> canonical label and must be injective;
    every mapped canonical label must exist in the canonical list.
    """

    device: str
    mapping: dict[str, str]
    canonical: tuple[str, ...] = field(default_factory=lambda: tuple(canonical_labels()))

    def __post_init__(self):
        canon = set(self.canonical)
        bad = sorted(set(self.mapping.values()) - canon)
        if bad:
            raise ValidationError(f"device map '{self.device}' targets unknown canonical labels: {bad}")
        targets = list(self.mapping.values())
        if len(targets) != len(set(targets)):
            dupes = sorted({t for t in targets if targets.count(t) > 1})
            raise ValidationError(f"device map '{self.device}' is not injective, duplicated targets: {dupes}")

    @classmethod
    def identity(cls, device: str = "canonical") -> "ChannelMap":
        labels = canonical_labels()
        return cls(device=device, mapping={l: l for l in labels})

    @classmethod
    def load(cls, path) -> "ChannelMap":
        try:
            with open(path) as f:
                doc = json.load(f)
            return cls(device=doc["device"], mapping=dict(doc["map"]))
        except FileNotFoundError:
            raise DataError(f"device map file not found: {path}")
        except (KeyError, json.JSONDecodeError) as e:
            raise DataError(f"malformed device map file {path}: {e}")

    def save(self, path):
        with open(path, "w") as f:
            json.dump({"device": self.device, "map": self.mapping}, f, indent=1, sort_keys=True)
            f.write("\n")


def map_channels(raw: np.ndarray, native_labels: list[str], chan_map: ChannelMap) -> np.ndarray:
    """Reorder native rows into canonical order.

    Output row i holds the native channel mapped to canonical label i.
    Native channels without a mapping are dropped. Raises if any
    canonical label has no source row.
    """
    raw = np.asarray(raw)
    if raw.ndim != 2 or raw.shape[0] != len(native_labels):
        raise ValidationError(
            f"raw shape {raw.shape} does not match {len(native_labels)} native labels"
        )
    canon_to_native = {c: n for n, c in chan_map.mapping.items()}
    native_index = {l: i for i, l in enumerate(native_labels)}
    missing = [c for c in chan_map.canonical
               if c not in canon_to_native or canon_to_native[c] not in native_index]
    if missing:
        raise ValidationError(
            f"device '{chan_map.device}' provides no source for canonical labels: {missing}"
        )
    rows = [native_index[canon_to_native[c]] for c in chan_map.canonical]
    return raw[rows]
