from .report import (
    FAR_TARGETS,
    EvalReport,
    ScenarioResult,
    SubjectScores,
    per_subject_eer,
    roc_points,
    summarize,
    summarize_scenario,
)
from .roc import RocCurve, compute_eer, eer_from_scores, frr_at_far, roc_curve

__all__ = [
    "FAR_TARGETS",
    "EvalReport",
    "RocCurve",
    "ScenarioResult",
    "SubjectScores",
    "compute_eer",
    "eer_from_scores",
    "frr_at_far",
    "per_subject_eer",
    "roc_curve",
    "roc_points",
    "summarize",
    "summarize_scenario",
]
