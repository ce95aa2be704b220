"""Training-set scaling: EER as a function of the training cohort size.

One encoder is trained per subject count on nested subsets, embeddings
for the evaluation subjects are exported, and the evaluation engine's
CLI scores them. The output points file feeds the engine's scaling-fit
analysis directly.
"""

from __future__ import annotations

import json
import os
import subprocess
import sys

from .corpus_reader import Corpus
from .export import export_embeddings
from .train import TrainConfig, check_cohort_disjoint, train_encoder


def _evaluate_eer(corpus_dir, features_path, out_dir, seed: int, subjects) -> float:
    """Run the engine's `evaluate` command and read back the global EER."""
    cfg = {
        "seed": seed,
        "paths": {"preprocessed": str(corpus_dir), "features": str(features_path),
                  "out_dir": str(out_dir)},
        "protocol": {"subjects": sorted(subjects)},
    }
    cfg_path = os.path.join(out_dir, "eval_config.json")
    os.makedirs(out_dir, exist_ok=True)
    with open(cfg_path, "w") as f:
        json.dump(cfg, f)
    proc = subprocess.run(
        [sys.executable, "-m", "eegauth.cli.main", "--config", cfg_path, "evaluate"],
        capture_output=True, text=True,
    )
    if proc.returncode != 0:
        raise RuntimeError(f"engine evaluate failed ({proc.returncode}): {proc.stderr.strip()}")
    run_dir = proc.stdout.strip().split()[-1]
    with open(os.path.join(run_dir, "report.json")) as f:
        report = json.load(f)
    return float(report["scenarios"][0]["global_eer"])


def scaling_experiment(corpus: Corpus, corpus_dir, subject_counts, base_cfg: TrainConfig,
                       eval_subjects, workdir, points_path=None) -> list[tuple[int, float]]:
    """Train on nested subsets of the training cohort; returns (n, eer) points."""
    pool = sorted(base_cfg.subjects)
    counts = sorted(int(n) for n in subject_counts)
    if counts[-1] > len(pool):
        raise ValueError(f"largest count {counts[-1]} exceeds training pool ({len(pool)})")
    check_cohort_disjoint(pool, eval_subjects)
    os.makedirs(workdir, exist_ok=True)

    points = []
    for n in counts:
        subset = tuple(pool[:n])  # nested by construction
        cfg = TrainConfig(subjects=subset, p_subjects=min(base_cfg.p_subjects, n),
                          k_epochs=base_cfg.k_epochs, temperature=base_cfg.temperature,
                          learning_rate=base_cfg.learning_rate, epochs=base_cfg.epochs,
                          batches_per_epoch=base_cfg.batches_per_epoch, seed=base_cfg.seed)
        result = train_encoder(corpus, cfg, eval_subjects=eval_subjects)
        run_dir = os.path.join(workdir, f"n{n:04d}")
        os.makedirs(run_dir, exist_ok=True)
        features = os.path.join(run_dir, "embeddings.jsonl")
        export_embeddings(result.model, corpus, features, subjects=eval_subjects,
                          model_tag=f"resnet1d-supcon-n{n}")
        result.write_log(os.path.join(run_dir, "train_log.tsv"))
        eer = _evaluate_eer(corpus_dir, features, run_dir, seed=cfg.seed, subjects=eval_subjects)
        points.append((n, eer))

    points_path = points_path or os.path.join(workdir, "scaling_points.tsv")
    with open(points_path, "w") as f:
        f.write("n\teer\n")
        for n, eer in points:
            f.write(f"{n}\t{eer!r}\n")
    return points
