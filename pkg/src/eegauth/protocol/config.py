"""Evaluation protocol configuration."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ValidationError

DEFAULT_INTERVAL_BINS: tuple[tuple[str, int, int], ...] = tuple(
    [(f"D{d}", d, d) for d in range(1, 8)]
    + [("W1", 8, 14), ("W2", 15, 21), ("W3", 22, 28)]
    + [(f"M{m}", 29 + 30 * (m - 1), 58 + 30 * (m - 1)) for m in range(1, 11)]
    + [("M11", 329, 336)]
    + [(f"Y{y}", 337 + 364 * (y - 1), 700 + 364 * (y - 1)) for y in range(1, 6)]
)


@dataclass(frozen=True)
class ProtocolConfig:
    enroll_rule: str = "first_k"          # first_k | explicit
    enroll_k: int = 1
    enroll_explicit: dict = field(default_factory=dict)  # subject -> [session ids]
    subjects: tuple[str, ...] | None = None  # evaluation cohort; None = all in corpus
    verify_rule: str = "all_remaining"    # all_remaining | next_session_only
    verification_samples: int = 1
    probe_rule: str = "mean-embedding"    # mean-embedding | mean-score
    template_rule: str = "centroid"       # centroid | mean-pairwise
    device_pair_filter: tuple[str, str] | None = None
    interval_bins: tuple[tuple[str, int, int], ...] = DEFAULT_INTERVAL_BINS
    channel_subset: str | None = None
    seed: int = 0

    def validate(self) -> "ProtocolConfig":
        if self.enroll_rule not in ("first_k", "explicit"):
            raise ValidationError(f"unknown enroll_rule {self.enroll_rule!r}")
        if self.enroll_rule == "first_k" and self.enroll_k < 1:
            raise ValidationError("enroll_k must be >= 1")
        if self.enroll_rule == "explicit" and not self.enroll_explicit:
            raise ValidationError("explicit enrollment requires a subject -> sessions map")
        if self.verify_rule not in ("all_remaining", "next_session_only"):
            raise ValidationError(f"unknown verify_rule {self.verify_rule!r}")
        if self.verification_samples < 1:
            raise ValidationError("verification_samples must be >= 1")
        if self.probe_rule not in ("mean-embedding", "mean-score"):
            raise ValidationError(f"unknown probe_rule {self.probe_rule!r}")
        if self.template_rule not in ("centroid", "mean-pairwise"):
            raise ValidationError(f"unknown template_rule {self.template_rule!r}")
        validate_bins(self.interval_bins)
        return self

    def echo(self) -> dict:
        return {
            "enroll_rule": self.enroll_rule,
            "enroll_k": self.enroll_k,
            "subjects": list(self.subjects) if self.subjects else None,
            "verify_rule": self.verify_rule,
            "verification_samples": self.verification_samples,
            "probe_rule": self.probe_rule,
            "template_rule": self.template_rule,
            "device_pair_filter": list(self.device_pair_filter) if self.device_pair_filter else None,
            "channel_subset": self.channel_subset,
            "seed": self.seed,
        }


def validate_bins(bins) -> None:
    prev_hi = 0
    for label, lo, hi in bins:
        if lo > hi:
            raise ValidationError(f"bin {label}: lo {lo} > hi {hi}")
        if lo <= prev_hi and prev_hi != 0:
            raise ValidationError(f"bin {label} overlaps or is out of order (starts at {lo})")
        if prev_hi == 0 and lo < 1:
            raise ValidationError(f"bin {label}: intervals start at day 1")
        prev_hi = hi
