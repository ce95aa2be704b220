from .channels import ChannelMap, canonical_labels, map_channels
from .epoching import EpochingResult, epoch_stream
from .io import (
    load_manifest,
    load_session_epochs,
    read_epoch_file,
    save_manifest,
    write_epoch_file,
)
from .model import CorpusIndex, Epoch, SessionMeta, SessionRecord
from .synth import DeviceSpec, SubjectSignature, SynthConfig, SynthCorpus, save_corpus, synth_corpus

__all__ = [
    "ChannelMap",
    "CorpusIndex",
    "DeviceSpec",
    "Epoch",
    "EpochingResult",
    "SessionMeta",
    "SessionRecord",
    "SubjectSignature",
    "SynthConfig",
    "SynthCorpus",
    "canonical_labels",
    "epoch_stream",
    "load_manifest",
    "load_session_epochs",
    "map_channels",
    "read_epoch_file",
    "save_corpus",
    "save_manifest",
    "synth_corpus",
    "write_epoch_file",
]
