"""Log-linear EER-vs-training-size fit."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError


@dataclass(frozen=True)
class ScalingFit:
    """eer ~= intercept + slope * log10(n_train_subjects)."""

    intercept: float
    slope: float
    max_observed_n: float

    def predict(self, n: float) -> tuple[float, bool]:
        """Predicted EER and an extrapolation flag (n beyond 2x observed)."""
        if n <= 0:
            raise ValidationError("n must be positive")
        value = self.intercept + self.slope * np.log10(n)
        return float(value), bool(n > 2.0 * self.max_observed_n)


def fit_scaling_curve(points) -> ScalingFit:
    """Least-squares fit of EER against log10(subject count)."""
    pts = [(float(n), float(e)) for n, e in points]
    if len(pts) < 2:
        raise ValidationError("need at least 2 points to fit a scaling curve")
    ns = np.array([p[0] for p in pts])
    if np.any(ns <= 0):
        raise ValidationError("subject counts must be positive")
    if np.unique(ns).size < 2:
        raise ValidationError("need at least 2 distinct subject counts (rank-deficient fit)")
    eers = np.array([p[1] for p in pts])
    design = np.column_stack([np.ones_like(ns), np.log10(ns)])
    coef, *_ = np.linalg.lstsq(design, eers, rcond=None)
    return ScalingFit(intercept=float(coef[0]), slope=float(coef[1]),
                      max_observed_n=float(ns.max()))
