"""Embedding interchange formats.

Line-delimited JSON, one record per epoch:
    {"subject", "session", "device", "date", "epoch", "model", "vec": [floats]}

A binary variant mirrors the epoch-file header: magic "EMBD",
u16 version=1, u16 reserved, u32 n_records, u32 dim, f32 reserved,
u32 metadata-JSON length, the metadata JSON (records without vectors),
then the vectors row-major as little-endian f32.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from ..corpus.model import CorpusIndex
from ..errors import DataError
from .spec import FeatureVector

EMBED_MAGIC = b"EMBD"
_HEADER = struct.Struct("<4sHHIIf")


def _record(v: FeatureVector) -> dict:
    return {
        "subject": v.meta.subject_id,
        "session": v.meta.session_id,
        "device": v.meta.device_id,
        "date": v.meta.date.isoformat(),
        "epoch": v.epoch_index,
        "model": v.feature_id,
        "vec": [float(x) for x in v.vec],
    }


def export_embeddings(vectors: list[FeatureVector], path):
    with open(path, "w") as f:
        for v in vectors:
            f.write(json.dumps(_record(v), sort_keys=True))
            f.write("\n")


def _join_meta(rec: dict, index: CorpusIndex, lineno):
    key = (str(rec["subject"]), str(rec["session"]))
    meta = next((r.meta for r in index.sessions if r.meta.key == key), None)
    if meta is None:
        raise DataError(f"embedding record {lineno}: unknown (subject, session) {key}")
    return meta


def import_embeddings(path, index: CorpusIndex) -> list[FeatureVector]:
    """Load an interchange file, joining metadata against the manifest.

    Rejects unknown (subject, session) keys, non-uniform dimensions, and
    non-finite entries, naming the offending line.
    """
    by_key = {r.meta.key: r.meta for r in index.sessions}
    vectors: list[FeatureVector] = []
    dim = None
    try:
        with open(path) as f:
            lines = f.readlines()
    except FileNotFoundError:
        raise DataError(f"embedding file not found: {path}")
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as e:
            raise DataError(f"embedding file {path} line {lineno}: invalid JSON ({e})")
        for field in ("subject", "session", "epoch", "model", "vec"):
            if field not in rec:
                raise DataError(f"embedding file {path} line {lineno}: missing field '{field}'")
        key = (str(rec["subject"]), str(rec["session"]))
        meta = by_key.get(key)
        if meta is None:
            raise DataError(f"embedding file {path} line {lineno}: unknown (subject, session) {key}")
        vec = np.asarray(rec["vec"], dtype=np.float64)
        if vec.ndim != 1 or vec.size == 0:
            raise DataError(f"embedding file {path} line {lineno}: vec must be a non-empty list")
        if dim is None:
            dim = vec.size
        elif vec.size != dim:
            raise DataError(
                f"embedding file {path} line {lineno}: dimension {vec.size} != {dim} seen earlier"
            )
        if not np.all(np.isfinite(vec)):
            raise DataError(f"embedding file {path} line {lineno}: non-finite entry")
        vectors.append(FeatureVector(meta=meta, epoch_index=int(rec["epoch"]),
                                     vec=vec, feature_id=str(rec["model"])))
    return vectors


def write_embeddings_binary(vectors: list[FeatureVector], path):
    if not vectors:
        raise DataError("refusing to write an empty embedding file")
    dim = vectors[0].vec.size
    meta = [{k: v for k, v in _record(fv).items() if k != "vec"} for fv in vectors]
    blob = json.dumps(meta, sort_keys=True).encode()
    mat = np.stack([fv.vec for fv in vectors]).astype("<f4")
    if mat.shape[1] != dim or not np.all(np.isfinite(mat)):
        raise DataError("embedding vectors must share one dimension and be finite")
    with open(path, "wb") as f:
        f.write(_HEADER.pack(EMBED_MAGIC, 1, 0, len(vectors), dim, 0.0))
        f.write(struct.pack("<I", len(blob)))
        f.write(blob)
        f.write(mat.tobytes(order="C"))


def read_embeddings_binary(path, index: CorpusIndex) -> list[FeatureVector]:
    try:
        with open(path, "rb") as f:
            header = f.read(_HEADER.size)
            magic, version, _, n_records, dim, _ = _HEADER.unpack(header)
            if magic != EMBED_MAGIC:
                raise DataError(f"embedding file {path}: bad magic {magic!r}")
            if version != 1:
                raise DataError(f"embedding file {path}: unsupported version {version}")
            (blob_len,) = struct.unpack("<I", f.read(4))
            meta = json.loads(f.read(blob_len).decode())
            mat = np.frombuffer(f.read(n_records * dim * 4), dtype="<f4").reshape(n_records, dim)
    except (FileNotFoundError, struct.error, json.JSONDecodeError, ValueError) as e:
        raise DataError(f"embedding file {path}: {e}")
    by_key = {r.meta.key: r.meta for r in index.sessions}
    vectors = []
    for i, rec in enumerate(meta):
        key = (str(rec["subject"]), str(rec["session"]))
        if key not in by_key:
            raise DataError(f"embedding file {path} record {i}: unknown (subject, session) {key}")
        if not np.all(np.isfinite(mat[i])):
            raise DataError(f"embedding file {path} record {i}: non-finite entry")
        vectors.append(FeatureVector(meta=by_key[key], epoch_index=int(rec["epoch"]),
                                     vec=mat[i].astype(np.float64), feature_id=str(rec["model"])))
    return vectors
