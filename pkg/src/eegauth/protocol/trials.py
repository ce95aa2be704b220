"""Trial enumeration, scoring, interval binning, and the audit table.

Genuine trials: every disjoint block of n consecutive epochs in each
verification session of the claimed subject. Impostor (zero-effort)
trials: the same blocks from every other evaluation subject's
verification sessions, claimed against the template. Enumeration order
is deterministic: sorted by claimed subject, probe subject, session,
block.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from ..errors import DataError, ValidationError
from ..features.spec import FeatureVector, check_same_feature_id
from ..matching.scorers import ScorerConfig, make_scorer, score_distance_batch
from ..matching.template import Template, build_template
from .config import ProtocolConfig, validate_bins
from .split import EvalSplit


@dataclass(frozen=True)
class Trial:
    claimed_subject: str
    probe_subject: str
    probe_session: str
    block_index: int
    epoch_indices: tuple[int, ...]
    genuine: bool
    delta_days: int
    enroll_device: str
    probe_device: str
    probe_date: datetime.date


@dataclass
class TrialSet:
    feature_id: str
    config: ProtocolConfig
    metric: str
    templates: dict[str, Template]
    session_features: dict[tuple[str, str], np.ndarray]  # (subject, session) -> (E, D)
    session_meta: dict[tuple[str, str], object]
    trials: list[Trial]

    def __len__(self) -> int:
        return len(self.trials)

    @property
    def n_genuine(self) -> int:
        return sum(t.genuine for t in self.trials)

    @property
    def n_impostor(self) -> int:
        return len(self.trials) - self.n_genuine


def generate_trials(features: list[FeatureVector], split: EvalSplit,
                    cfg: ProtocolConfig, metric: str = "euclidean") -> TrialSet:
    cfg.validate()
    fid = check_same_feature_id(features)

    by_session: dict[tuple[str, str], list[FeatureVector]] = {}
    for v in features:
        by_session.setdefault(v.meta.key, []).append(v)
    for key in by_session:
        by_session[key].sort(key=lambda v: v.epoch_index)

    subjects = split.subject_ids()
    for subj in subjects:
        sp = split.subjects[subj]
        for meta in sp.enroll + sp.verify:
            if meta.key not in by_session:
                raise ValidationError(f"no features for split session {meta.key}")

    templates: dict[str, Template] = {}
    enroll_info: dict[str, tuple[datetime.date, str]] = {}
    for subj in subjects:
        sp = split.subjects[subj]
        vecs = [v for meta in sp.enroll for v in by_session[meta.key]]
        templates[subj] = build_template(subj, vecs, metric=metric)
        last = max(sp.enroll, key=lambda m: m.date)
        enroll_info[subj] = (last.date, last.device_id)

    session_features = {}
    session_meta = {}
    n = cfg.verification_samples
    trials: list[Trial] = []
    for claimed in subjects:
        enroll_date, enroll_device = enroll_info[claimed]
        enrolled_keys = {m.key for m in split.subjects[claimed].enroll}
        for probe_subj in subjects:
            for meta in split.subjects[probe_subj].verify:
                if meta.key in enrolled_keys:
                    raise ValidationError(
                        f"probe session {meta.key} is an enrollment session of {claimed}"
                    )
                vecs = by_session[meta.key]
                n_blocks = len(vecs) // n
                if n_blocks and meta.key not in session_features:
                    session_features[meta.key] = np.stack([v.vec for v in vecs])
                    session_meta[meta.key] = meta
                for b in range(n_blocks):
                    block = vecs[b * n:(b + 1) * n]
                    trials.append(Trial(
                        claimed_subject=claimed,
                        probe_subject=probe_subj,
                        probe_session=meta.session_id,
                        block_index=b,
                        epoch_indices=tuple(v.epoch_index for v in block),
                        genuine=probe_subj == claimed,
                        delta_days=(meta.date - enroll_date).days,
                        enroll_device=enroll_device,
                        probe_device=meta.device_id,
                        probe_date=meta.date,
                    ))
    return TrialSet(feature_id=fid, config=cfg, metric=metric, templates=templates,
                    session_features=session_features, session_meta=session_meta, trials=trials)


def _block_probes(mat: np.ndarray, n: int) -> np.ndarray:
    n_blocks = mat.shape[0] // n
    return mat[:n_blocks * n].reshape(n_blocks, n, -1).mean(axis=1)


def _distance_scores(probes: np.ndarray, template: Template, rule: str) -> np.ndarray:
    if rule == "centroid":
        return score_distance_batch(probes, template)
    enroll = np.stack([v.vec for v in template.enrollment_vectors])
    metric = {"euclidean": "euclidean", "manhattan": "cityblock", "cosine": "cosine"}[template.metric]
    return -cdist(probes, enroll, metric).mean(axis=1)


def score_trials(ts: TrialSet, scorer_cfg: ScorerConfig | None = None,
                 negatives: np.ndarray | None = None) -> np.ndarray:
    """Score every trial; output is aligned with ts.trials."""
    cfg = scorer_cfg or ScorerConfig(metric=ts.metric)
    cfg.validate()
    n = ts.config.verification_samples
    scores = np.empty(len(ts.trials))
    # group contiguous work by (claimed, session) so scoring is vectorized
    order: dict[tuple[str, tuple[str, str]], list[int]] = {}
    for i, t in enumerate(ts.trials):
        order.setdefault((t.claimed_subject, (t.probe_subject, t.probe_session)), []).append(i)
    scorers: dict[str, object] = {}
    for (claimed, key), idxs in order.items():
        template = ts.templates[claimed]
        mat = ts.session_features[key]
        if cfg.kind == "distance":
            score_fn = lambda p: _distance_scores(p, template, ts.config.template_rule)
        else:
            if claimed not in scorers:
                scorers[claimed] = make_scorer(template, cfg, negatives)
            score_fn = scorers[claimed]
        if ts.config.probe_rule == "mean-embedding":
            block_scores = score_fn(_block_probes(mat, n))
        else:
            per_epoch = score_fn(mat)
            n_blocks = mat.shape[0] // n
            block_scores = per_epoch[:n_blocks * n].reshape(n_blocks, n).mean(axis=1)
        for j, i in enumerate(idxs):
            scores[i] = block_scores[ts.trials[i].block_index]
    return scores


def filter_by_device_pair(trials: list[Trial], scores: np.ndarray,
                          enroll_device: str, probe_device: str):
    """Keep trials whose (enrollment, probe) devices match the ordered pair.

    Returns (trials, scores, no_data) where no_data flags an empty result.
    """
    mask = [t.enroll_device == enroll_device and t.probe_device == probe_device
            for t in trials]
    kept = [t for t, m in zip(trials, mask) if m]
    kept_scores = np.asarray(scores)[np.asarray(mask, dtype=bool)] if len(trials) else np.empty(0)
    return kept, kept_scores, len(kept) == 0


def bin_by_interval(trials: list[Trial], scores: np.ndarray, bins=None):
    """Partition trials into interval bins by delta_days (closed intervals).

    Impostor trials use the same rule, with delta_days already computed
    against the claimed subject's enrollment date. Trials falling in no
    bin are dropped; their count is returned.
    """
    from .config import DEFAULT_INTERVAL_BINS
    bins = tuple(bins) if bins is not None else DEFAULT_INTERVAL_BINS
    validate_bins(bins)
    scores = np.asarray(scores)
    out = {label: ([], []) for label, _, _ in bins}
    unbinned = 0
    for t, s in zip(trials, scores):
        for label, lo, hi in bins:
            if lo <= t.delta_days <= hi:
                out[label][0].append(t)
                out[label][1].append(float(s))
                break
        else:
            unbinned += 1
    result = {label: (ts_, np.asarray(sc)) for label, (ts_, sc) in out.items()}
    return result, unbinned


TRIAL_TABLE_HEADER = ("claimed", "probe_subject", "probe_session", "block", "genuine",
                      "score", "delta_days", "enroll_device", "probe_device", "probe_date")


def export_trial_table(trials: list[Trial], scores: np.ndarray, path):
    """Write the audit table: one row per scored trial, tab-separated."""
    scores = np.asarray(scores)
    if len(trials) != scores.shape[0]:
        raise ValidationError("trials and scores are not aligned")
    with open(path, "w") as f:
        f.write("\t".join(TRIAL_TABLE_HEADER) + "\n")
        for t, s in zip(trials, scores):
            f.write("\t".join([
                t.claimed_subject, t.probe_subject, t.probe_session, str(t.block_index),
                "1" if t.genuine else "0", repr(float(s)), str(t.delta_days),
                t.enroll_device, t.probe_device, t.probe_date.isoformat(),
            ]) + "\n")


def import_trial_table(path):
    """Read an audit table back as (trials, scores)."""
    trials: list[Trial] = []
    scores: list[float] = []
    try:
        with open(path) as f:
            header = f.readline().rstrip("\n").split("\t")
            if tuple(header) != TRIAL_TABLE_HEADER:
                raise DataError(f"trial table {path}: unexpected header {header}")
            for lineno, line in enumerate(f, start=2):
                parts = line.rstrip("\n").split("\t")
                if len(parts) != len(TRIAL_TABLE_HEADER):
                    raise DataError(f"trial table {path} line {lineno}: {len(parts)} fields")
                trials.append(Trial(
                    claimed_subject=parts[0], probe_subject=parts[1], probe_session=parts[2],
                    block_index=int(parts[3]), epoch_indices=(),
                    genuine=parts[4] == "1", delta_days=int(parts[6]),
                    enroll_device=parts[7], probe_device=parts[8],
                    probe_date=datetime.date.fromisoformat(parts[9]),
                ))
                scores.append(float(parts[5]))
    except FileNotFoundError:
        raise DataError(f"trial table not found: {path}")
    return trials, np.asarray(scores)
