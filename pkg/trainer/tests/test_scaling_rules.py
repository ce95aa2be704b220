import numpy as np
import pytest

import eegauth_trainer.scaling as scaling_mod
from eegauth_trainer import TrainConfig, scaling_experiment


def test_subsets_are_nested_and_counts_sorted(cohorts, tmp_path, monkeypatch):
    corpus, train_subs, eval_subs = cohorts
    seen = []

    def fake_train(corpus_, cfg, eval_subjects=()):
        seen.append(tuple(cfg.subjects))

        class R:
            class model:
                pass
            loss_log = [(0, 1.0)]

            @staticmethod
            def write_log(path):
                open(path, "w").write("epoch\tloss\n0\t1.0\n")
        return R()

    monkeypatch.setattr(scaling_mod, "train_encoder", fake_train)
    monkeypatch.setattr(scaling_mod, "export_embeddings", lambda *a, **k: 0)
    monkeypatch.setattr(scaling_mod, "_evaluate_eer", lambda *a, **k: 0.25)

    cfg = TrainConfig(subjects=train_subs, epochs=1, batches_per_epoch=1)
    points = scaling_experiment(corpus, corpus.root, [10, 2, 5], cfg, eval_subs, tmp_path)
    assert [n for n, _ in points] == [2, 5, 10]
    assert set(seen[0]) < set(seen[1]) < set(seen[2])  # nested by construction


def test_count_exceeding_pool_rejected(cohorts, tmp_path):
    corpus, train_subs, eval_subs = cohorts
    cfg = TrainConfig(subjects=train_subs)
    with pytest.raises(ValueError, match="exceeds"):
        scaling_experiment(corpus, corpus.root, [len(train_subs) + 1], cfg, eval_subs, tmp_path)
