"""Per-subject aggregation and evaluation reports.

The report mirrors a scenario grid: one row per (enrollment rule,
verification rule, verification samples), each carrying global EER,
per-subject EER mean +/- std (population std), and FRR at the 1%, 0.1%
and 0.01% FAR operating points, per-subject and global.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError
from .roc import compute_eer, frr_at_far, roc_curve

FAR_TARGETS = ((0.01, "1%"), (0.001, "0.1%"), (0.0001, "0.01%"))


@dataclass
class SubjectScores:
    """Scores grouped by claimed subject for one scenario."""

    genuine: dict[str, np.ndarray]
    impostor: dict[str, np.ndarray]

    @classmethod
    def from_rows(cls, claimed, genuine_flags, scores) -> "SubjectScores":
        claimed = np.asarray(claimed)
        flags = np.asarray(genuine_flags, dtype=bool)
        scores = np.asarray(scores, dtype=np.float64)
        gen: dict[str, np.ndarray] = {}
        imp: dict[str, np.ndarray] = {}
        for subj in sorted(set(claimed.tolist())):
            m = claimed == subj
            gen[subj] = scores[m & flags]
            imp[subj] = scores[m & ~flags]
        return cls(genuine=gen, impostor=imp)

    def pooled(self) -> tuple[np.ndarray, np.ndarray]:
        g = np.concatenate([v for v in self.genuine.values() if v.size]) \
            if any(v.size for v in self.genuine.values()) else np.empty(0)
        i = np.concatenate([v for v in self.impostor.values() if v.size]) \
            if any(v.size for v in self.impostor.values()) else np.empty(0)
        return g, i


def per_subject_eer(subject_scores: SubjectScores):
    """EER per claimed subject; (mean, population std, table, excluded)."""
    table: dict[str, float] = {}
    excluded: list[str] = []
    for subj in subject_scores.genuine:
        g = subject_scores.genuine[subj]
        i = subject_scores.impostor[subj]
        if g.size == 0 or i.size == 0:
            excluded.append(subj)
            continue
        table[subj] = compute_eer(roc_curve(g, i))
    if not table:
        raise ValidationError("no subject has both genuine and impostor trials")
    vals = np.array(list(table.values()))
    return float(vals.mean()), float(vals.std()), table, excluded


@dataclass
class ScenarioResult:
    name: str
    global_eer: float
    subject_eer_mean: float
    subject_eer_std: float
    frr: dict[str, dict[str, float]]  # label -> {global, mean, std}
    n_genuine: int
    n_impostor: int
    n_subjects: int
    excluded_subjects: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "global_eer": self.global_eer,
            "subject_eer_mean": self.subject_eer_mean,
            "subject_eer_std": self.subject_eer_std,
            "frr_at_far": self.frr,
            "n_genuine": self.n_genuine,
            "n_impostor": self.n_impostor,
            "n_subjects": self.n_subjects,
            "excluded_subjects": self.excluded_subjects,
        }


@dataclass
class EvalReport:
    rows: list[ScenarioResult]
    protocol: dict

    def to_dict(self) -> dict:
        return {"protocol": self.protocol, "scenarios": [r.to_dict() for r in self.rows]}

    def render_text(self) -> str:
        # std across subjects is the population std
        head = ["scenario", "EER", "subj EER",
                "FRR@1%", "FRR@0.1%", "FRR@0.01%", "genuine", "impostor"]
        lines = []
        for r in self.rows:
            lines.append([
                r.name,
                f"{100 * r.global_eer:.2f}",
                f"{100 * r.subject_eer_mean:.2f} ± {100 * r.subject_eer_std:.2f}",
                *(f"{100 * r.frr[label]['global']:.2f}" for _, label in FAR_TARGETS),
                str(r.n_genuine),
                str(r.n_impostor),
            ])
        widths = [max(len(head[i]), *(len(row[i]) for row in lines)) if lines else len(head[i])
                  for i in range(len(head))]
        def fmt(row):
            return "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
        out = [fmt(head), fmt(["-" * w for w in widths])]
        out += [fmt(row) for row in lines]
        return "\n".join(out) + "\n"


def summarize_scenario(name: str, subject_scores: SubjectScores) -> ScenarioResult:
    g, i = subject_scores.pooled()
    roc = roc_curve(g, i)
    mean, std, table, excluded = per_subject_eer(subject_scores)
    frr: dict[str, dict[str, float]] = {}
    for target, label in FAR_TARGETS:
        per = []
        for subj, eer in table.items():
            sroc = roc_curve(subject_scores.genuine[subj], subject_scores.impostor[subj])
            per.append(frr_at_far(sroc, target))
        per = np.array(per)
        frr[label] = {
            "global": frr_at_far(roc, target),
            "mean": float(per.mean()),
            "std": float(per.std()),
        }
    return ScenarioResult(
        name=name,
        global_eer=compute_eer(roc),
        subject_eer_mean=mean,
        subject_eer_std=std,
        frr=frr,
        n_genuine=int(g.size),
        n_impostor=int(i.size),
        n_subjects=len(table),
        excluded_subjects=excluded,
    )


def summarize(scenarios: dict[str, SubjectScores], protocol_echo: dict) -> EvalReport:
    rows = [summarize_scenario(name, ss) for name, ss in scenarios.items()]
    return EvalReport(rows=rows, protocol=dict(protocol_echo))


def roc_points(genuine_scores, impostor_scores) -> np.ndarray:
    """(far, frr) pairs for external plotting, one row per threshold."""
    roc = roc_curve(genuine_scores, impostor_scores)
    return np.column_stack([roc.far, roc.frr])
