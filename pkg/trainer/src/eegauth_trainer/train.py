"""Training loop: P subjects x K epochs batches, Adam, SupCon loss."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from .corpus_reader import Corpus
from .encoder import EncoderSpec, ResNet1D
from .supcon import supcon_loss


@dataclass(frozen=True)
class TrainConfig:
    subjects: tuple[str, ...]          # training cohort, disjoint from evaluation
    p_subjects: int = 5
    k_epochs: int = 4
    temperature: float = 0.1
    optimizer: str = "adam"
    learning_rate: float = 1e-3
    epochs: int = 5
    batches_per_epoch: int = 4
    seed: int = 0

    def validate(self) -> "TrainConfig":
        if self.p_subjects < 2 or self.k_epochs < 2:
            raise ValueError("batch composition requires P >= 2 subjects and K >= 2 epochs")
        if len(self.subjects) < self.p_subjects:
            raise ValueError(
                f"need at least P={self.p_subjects} training subjects, got {len(self.subjects)}"
            )
        if self.optimizer != "adam":
            raise ValueError(f"unsupported optimizer {self.optimizer!r}")
        return self


@dataclass
class TrainResult:
    model: ResNet1D
    loss_log: list[tuple[int, float]]  # (epoch, mean loss)
    config: TrainConfig

    def write_log(self, path):
        with open(path, "w") as f:
            f.write("epoch\tloss\n")
            for epoch, loss in self.loss_log:
                f.write(f"{epoch}\t{loss!r}\n")


def check_cohort_disjoint(train_subjects, eval_subjects):
    overlap = sorted(set(train_subjects) & set(eval_subjects))
    if overlap:
        raise ValueError(
            f"training cohort overlaps evaluation subjects, refusing: {overlap}"
        )


def _subject_epochs(corpus: Corpus, subject: str) -> np.ndarray:
    mats = [corpus.load_epochs(info) for info in corpus.sessions_of(subject)]
    return np.concatenate(mats, axis=0)


def train_encoder(corpus: Corpus, cfg: TrainConfig, eval_subjects=(),
                  spec: EncoderSpec | None = None) -> TrainResult:
    """Deterministic for a fixed seed (single-process CPU torch)."""
    cfg.validate()
    check_cohort_disjoint(cfg.subjects, eval_subjects)
    missing = sorted(set(cfg.subjects) - set(corpus.subjects()))
    if missing:
        raise ValueError(f"training subjects not present in corpus: {missing}")

    spec = spec or EncoderSpec(in_channels=len(corpus.channels))
    torch.manual_seed(cfg.seed)
    model = ResNet1D(spec)
    data = {s: torch.from_numpy(_subject_epochs(corpus, s)) for s in cfg.subjects}
    for s, mat in data.items():
        if mat.shape[0] < cfg.k_epochs:
            raise ValueError(f"subject {s} has {mat.shape[0]} epochs, need K={cfg.k_epochs}")

    rng = np.random.default_rng(cfg.seed)
    optimizer = torch.optim.Adam(model.parameters(), lr=cfg.learning_rate)
    subjects = sorted(cfg.subjects)
    loss_log: list[tuple[int, float]] = []
    model.train()
    for epoch in range(cfg.epochs):
        losses = []
        for _ in range(cfg.batches_per_epoch):
            chosen = rng.choice(subjects, size=cfg.p_subjects, replace=False)
            xs, ys = [], []
            for label, subj in enumerate(chosen):
                mat = data[subj]
                rows = rng.choice(mat.shape[0], size=cfg.k_epochs, replace=False)
                xs.append(mat[rows.copy()])
                ys.extend([label] * cfg.k_epochs)
            batch = torch.cat(xs).float()
            labels = torch.tensor(ys)
            optimizer.zero_grad()
            loss, _ = supcon_loss(model(batch), labels, cfg.temperature)
            loss.backward()
            optimizer.step()
            losses.append(float(loss.detach()))
        loss_log.append((epoch, float(np.mean(losses))))
    model.eval()
    return TrainResult(model=model, loss_log=loss_log, config=cfg)
