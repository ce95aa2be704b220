"""Template-update simulation: reinforce enrollment after accepted logins.

The operating threshold is fixed in advance from a FAR target measured
on a disjoint calibration cohort. Probes are then replayed in date
order; a genuine accept appends the probe to the claimed subject's
template (FIFO-capped), impostor accepts are logged but never augment.
Per-interval-bin FAR/FRR are reported for the frozen baseline and the
updating system side by side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from ..features.spec import FeatureVector
from ..matching.template import augment_template
from .config import ProtocolConfig
from .split import EvalSplit
from .trials import TrialSet, _distance_scores, generate_trials, score_trials


@dataclass
class UpdateBinRow:
    label: str
    n_genuine: int
    n_impostor: int
    frr_baseline: float
    far_baseline: float
    frr_updating: float
    far_updating: float


@dataclass
class UpdateSimulation:
    threshold: float
    far_target: float
    cap: int
    rows: list[UpdateBinRow]
    n_genuine_accepts: int
    n_impostor_accepts: int
    n_augmentations: int


def calibration_threshold(ts: TrialSet, far_target: float) -> float:
    """Smallest threshold whose FAR stays <= target on calibration scores."""
    scores = score_trials(ts)
    imp = np.sort(scores[[not t.genuine for t in ts.trials]])
    if imp.size == 0:
        raise ValidationError("calibration cohort produced no impostor trials")
    # walk candidate thresholds (the impostor scores themselves) downward
    candidates = np.concatenate([imp[::-1], [np.inf]])
    far = (imp.size - np.searchsorted(imp, candidates, side="left")) / imp.size
    ok = np.flatnonzero(far <= far_target)
    return float(candidates[ok[0]]) if ok.size else float(np.inf)


def simulate_enrollment_update(features: list[FeatureVector], split: EvalSplit,
                               calibration_split: EvalSplit, cfg: ProtocolConfig,
                               far_target: float = 0.01, cap: int | None = None,
                               metric: str = "euclidean") -> UpdateSimulation:
    if not calibration_split.subjects:
        raise ValidationError("calibration cohort is empty")
    overlap = set(split.subjects) & set(calibration_split.subjects)
    if overlap:
        raise ValidationError(f"calibration cohort overlaps evaluation subjects: {sorted(overlap)}")

    cal_ts = generate_trials(features, calibration_split, cfg, metric=metric)
    threshold = calibration_threshold(cal_ts, far_target)

    ts = generate_trials(features, split, cfg, metric=metric)
    baseline_scores = score_trials(ts)
    cap = cap or max(t.size for t in ts.templates.values()) * 2

    by_session: dict[tuple[str, str], list[FeatureVector]] = {}
    for v in features:
        by_session.setdefault(v.meta.key, []).append(v)
    for key in by_session:
        by_session[key].sort(key=lambda v: v.epoch_index)

    # replay in probe-date order; ties broken by enumeration order
    order = sorted(range(len(ts.trials)),
                   key=lambda i: (ts.trials[i].probe_date,
                                  ts.trials[i].claimed_subject,
                                  ts.trials[i].probe_subject,
                                  ts.trials[i].probe_session,
                                  ts.trials[i].block_index))
    live = dict(ts.templates)
    n = cfg.verification_samples
    updating_scores = np.empty(len(ts.trials))
    n_gen_acc = n_imp_acc = n_aug = 0
    for i in order:
        t = ts.trials[i]
        key = (t.probe_subject, t.probe_session)
        block = [v for v in by_session[key] if v.epoch_index in set(t.epoch_indices)]
        probe = np.stack([v.vec for v in block]).mean(axis=0)
        score = float(_distance_scores(probe[None, :], live[t.claimed_subject],
                                       cfg.template_rule)[0])
        updating_scores[i] = score
        if score >= threshold:
            if t.genuine:
                n_gen_acc += 1
                probe_fv = FeatureVector(meta=block[0].meta, epoch_index=block[0].epoch_index,
                                         vec=probe, feature_id=ts.feature_id)
                live[t.claimed_subject] = augment_template(live[t.claimed_subject], [probe_fv], cap)
                n_aug += 1
            else:
                n_imp_acc += 1

    from .trials import bin_by_interval
    binned_base, _ = bin_by_interval(ts.trials, baseline_scores, cfg.interval_bins)
    binned_upd, _ = bin_by_interval(ts.trials, updating_scores, cfg.interval_bins)
    rows = []
    for label in binned_base:
        bt, bs = binned_base[label]
        _, us = binned_upd[label]
        gen_mask = np.array([t.genuine for t in bt], dtype=bool)
        n_gen, n_imp = int(gen_mask.sum()), int((~gen_mask).sum())
        if n_gen == 0 and n_imp == 0:
            continue
        def rates(sc):
            frr = float((sc[gen_mask] < threshold).mean()) if n_gen else float("nan")
            far = float((sc[~gen_mask] >= threshold).mean()) if n_imp else float("nan")
            return frr, far
        frr_b, far_b = rates(bs)
        frr_u, far_u = rates(us)
        rows.append(UpdateBinRow(label=label, n_genuine=n_gen, n_impostor=n_imp,
                                 frr_baseline=frr_b, far_baseline=far_b,
                                 frr_updating=frr_u, far_updating=far_u))
    return UpdateSimulation(threshold=threshold, far_target=far_target, cap=cap, rows=rows,
                            n_genuine_accepts=n_gen_acc, n_impostor_accepts=n_imp_acc,
                            n_augmentations=n_aug)
