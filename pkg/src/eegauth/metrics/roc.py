"""ROC construction, equal error rate, and fixed-FAR operating points.

Acceptance rule is score >= threshold everywhere. FAR(t) is the
fraction of impostor scores accepted at t, FRR(t) the fraction of
genuine scores rejected. The EER is read at the FAR/FRR crossing with
linear interpolation between the two bracketing thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError


@dataclass(frozen=True)
class RocCurve:
    thresholds: np.ndarray  # descending, with +/-inf sentinels
    far: np.ndarray         # non-decreasing along the array
    frr: np.ndarray         # non-increasing along the array
    n_genuine: int
    n_impostor: int


def roc_curve(genuine_scores, impostor_scores) -> RocCurve:
    gen = np.asarray(genuine_scores, dtype=np.float64)
    imp = np.asarray(impostor_scores, dtype=np.float64)
    if gen.size == 0:
        raise ValidationError("no genuine scores")
    if imp.size == 0:
        raise ValidationError("no impostor scores")
    if not (np.all(np.isfinite(gen)) and np.all(np.isfinite(imp))):
        raise ValidationError("scores must be finite")

    uniq = np.unique(np.concatenate([gen, imp]))
    thresholds = np.concatenate([[np.inf], uniq[::-1], [-np.inf]])
    gen_sorted = np.sort(gen)
    imp_sorted = np.sort(imp)
    # accepted impostors: scores >= t ; rejected genuines: scores < t
    far = (imp.size - np.searchsorted(imp_sorted, thresholds, side="left")) / imp.size
    frr = np.searchsorted(gen_sorted, thresholds, side="left") / gen.size
    return RocCurve(thresholds=thresholds, far=far, frr=frr,
                    n_genuine=int(gen.size), n_impostor=int(imp.size))


def compute_eer(roc: RocCurve) -> float:
    """EER at the FAR/FRR crossing, linearly interpolated."""
    diff = roc.far - roc.frr
    idx = int(np.argmax(diff >= 0))  # first threshold where FAR catches up with FRR
    if diff[idx] == 0:
        return float(roc.far[idx])
    f0, f1 = roc.far[idx - 1], roc.far[idx]
    r0, r1 = roc.frr[idx - 1], roc.frr[idx]
    denom = (f1 - f0) - (r1 - r0)
    t = (r0 - f0) / denom
    return float(f0 + t * (f1 - f0))


def frr_at_far(roc: RocCurve, far_target: float) -> float:
    """FRR at the loosest operating point still holding FAR <= target.

    A step rule, not interpolation: among thresholds with FAR <= target,
    take the one with the smallest FRR. The +inf sentinel (FAR = 0)
    guarantees a feasible point; if nothing else qualifies the result is
    the FRR at FAR = 0.
    """
    if not (0.0 <= far_target < 1.0):
        raise ValidationError(f"far_target must be in [0, 1), got {far_target}")
    feasible = int(np.searchsorted(roc.far, far_target, side="right")) - 1
    return float(roc.frr[feasible])


def eer_from_scores(genuine_scores, impostor_scores) -> float:
    return compute_eer(roc_curve(genuine_scores, impostor_scores))
