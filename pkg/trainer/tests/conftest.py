import json
import subprocess
import sys

import pytest


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    """Synthetic preprocessed corpus built through the engine's CLI."""
    root = tmp_path_factory.mktemp("trainer-corpus")
    cfg = {
        "seed": 21,
        "paths": {"corpus": str(root / "raw"), "preprocessed": str(root / "clean"),
                  "out_dir": str(root / "runs")},
        "synth": {"n_subjects": 18, "sessions_per_subject": 2, "epochs_per_session": 16,
                  "session_drift_scale": 0.1, "noise_scale": 3.0},
    }
    cfg_path = root / "config.json"
    cfg_path.write_text(json.dumps(cfg))
    for command in ("synth", "preprocess"):
        proc = subprocess.run(
            [sys.executable, "-m", "eegauth.cli.main", "--config", str(cfg_path), command],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
    return root / "clean"


@pytest.fixture(scope="session")
def cohorts(corpus_dir):
    from eegauth_trainer import load_corpus
    corpus = load_corpus(corpus_dir)
    subjects = corpus.subjects()
    return corpus, tuple(subjects[:10]), tuple(subjects[10:])
