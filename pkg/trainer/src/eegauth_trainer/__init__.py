from .corpus_reader import Corpus, load_corpus
from .encoder import EncoderSpec, ResNet1D
from .export import embed_sessions, export_embeddings
from .scaling import scaling_experiment
from .supcon import supcon_loss, supcon_loss_bruteforce
from .train import TrainConfig, TrainResult, check_cohort_disjoint, train_encoder

__all__ = [
    "Corpus",
    "EncoderSpec",
    "ResNet1D",
    "TrainConfig",
    "TrainResult",
    "check_cohort_disjoint",
    "embed_sessions",
    "export_embeddings",
    "load_corpus",
    "scaling_experiment",
    "supcon_loss",
    "supcon_loss_bruteforce",
    "train_encoder",
]
