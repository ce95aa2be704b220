"""Embedding export in the engine's interchange format."""

from __future__ import annotations

import json

import numpy as np
import torch

from .corpus_reader import Corpus
from .encoder import ResNet1D


def embed_sessions(model: ResNet1D, corpus: Corpus, subjects=None,
                   batch_size: int = 64):
    """Yield (session info, (n_epochs, D) embeddings) for the subset."""
    wanted = set(subjects) if subjects is not None else set(corpus.subjects())
    model.eval()
    with torch.no_grad():
        for info in corpus.sessions:
            if info.subject not in wanted:
                continue
            epochs = torch.from_numpy(corpus.load_epochs(info)).float()
            outs = [model(epochs[i:i + batch_size]) for i in range(0, epochs.shape[0], batch_size)]
            yield info, torch.cat(outs).numpy().astype(np.float64)


def export_embeddings(model: ResNet1D, corpus: Corpus, path, subjects=None,
                      model_tag: str = "resnet1d-supcon-d128") -> int:
    """Write one interchange record per epoch; returns the record count."""
    n = 0
    with open(path, "w") as f:
        for info, mat in embed_sessions(model, corpus, subjects):
            for e in range(mat.shape[0]):
                record = {
                    "subject": info.subject,
                    "session": info.session,
                    "device": info.device,
                    "date": info.date,
                    "epoch": e,
                    "model": model_tag,
                    "vec": [float(x) for x in mat[e]],
                }
                f.write(json.dumps(record, sort_keys=True) + "\n")
                n += 1
    return n
