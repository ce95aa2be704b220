from .fir import (
    FilterSpec,
    bandpass_spec,
    design_fir,
    filter_zero_phase,
    notch_50hz,
    notch_spec,
    response_db,
)
from .normalize import apply_car, robust_normalize
from .pipeline import (
    PreprocessConfig,
    preprocess_corpus,
    preprocess_pipeline,
    preprocess_recording,
)

__all__ = [
    "FilterSpec",
    "PreprocessConfig",
    "apply_car",
    "bandpass_spec",
    "design_fir",
    "filter_zero_phase",
    "notch_50hz",
    "notch_spec",
    "preprocess_corpus",
    "preprocess_pipeline",
    "preprocess_recording",
    "response_db",
    "robust_normalize",
]
