from .bootstrap import BootstrapRow, bootstrap_subject_count, restrict_to_subjects
from .config import DEFAULT_INTERVAL_BINS, ProtocolConfig
from .enrollment_update import (
    UpdateSimulation,
    calibration_threshold,
    simulate_enrollment_update,
)
from .presets import CHANNEL_PRESETS, preset_labels, select_channels
from .scaling import ScalingFit, fit_scaling_curve
from .split import EvalSplit, SubjectSplit, split_enroll_verify
from .trials import (
    Trial,
    TrialSet,
    bin_by_interval,
    export_trial_table,
    filter_by_device_pair,
    generate_trials,
    import_trial_table,
    score_trials,
)

__all__ = [
    "BootstrapRow",
    "CHANNEL_PRESETS",
    "DEFAULT_INTERVAL_BINS",
    "EvalSplit",
    "ProtocolConfig",
    "ScalingFit",
    "SubjectSplit",
    "Trial",
    "TrialSet",
    "UpdateSimulation",
    "bin_by_interval",
    "bootstrap_subject_count",
    "calibration_threshold",
    "export_trial_table",
    "filter_by_device_pair",
    "fit_scaling_curve",
    "generate_trials",
    "import_trial_table",
    "preset_labels",
    "restrict_to_subjects",
    "score_trials",
    "select_channels",
    "simulate_enrollment_update",
    "split_enroll_verify",
]
