"""Declarative run configuration for the CLI.

One JSON file configures every command; command-line flags override
single values. Every stochastic step draws from the single `seed`.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

from ..errors import DataError, ValidationError
from ..features.spec import ArSpec, FeatureSpec, PsdSpec
from ..matching.scorers import LogRegConfig, ScorerConfig
from ..preprocess.fir import bandpass_spec, notch_spec
from ..preprocess.pipeline import PreprocessConfig
from ..protocol.config import DEFAULT_INTERVAL_BINS, ProtocolConfig

ENV_CONFIG = "EEGAUTH_CONFIG"


@dataclass
class RunConfig:
    seed: int = 0
    paths: dict = field(default_factory=dict)
    synth: dict = field(default_factory=dict)
    preprocess: dict = field(default_factory=dict)
    features: dict = field(default_factory=dict)
    scorer: dict = field(default_factory=dict)
    protocol: dict = field(default_factory=dict)
    analysis: dict = field(default_factory=dict)
    report: dict = field(default_factory=lambda: {"formats": ["text", "json"]})

    def to_dict(self) -> dict:
        return {
            "seed": self.seed, "paths": self.paths, "synth": self.synth,
            "preprocess": self.preprocess, "features": self.features,
            "scorer": self.scorer, "protocol": self.protocol,
            "analysis": self.analysis, "report": self.report,
        }

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:8]

    # -- section builders -------------------------------------------------

    def path(self, name: str, required: bool = True) -> str | None:
        value = self.paths.get(name)
        if value is None and required:
            raise ValidationError(f"config paths.{name} is required for this command")
        return value

    def synth_config(self):
        from ..corpus.synth import DeviceSpec, SubjectSignature, SynthConfig
        s = dict(self.synth)
        devices = tuple(
            DeviceSpec(device_id=d["device_id"],
                       gain_range=tuple(d.get("gain_range", (0.9, 1.1))),
                       offset_range=tuple(d.get("offset_range", (-0.1, 0.1))))
            for d in s.get("devices", [{"device_id": "synth-A"}])
        )
        sig = SubjectSignature(**s.get("subject_signature", {}))
        return SynthConfig(
            n_subjects=int(s.get("n_subjects", 20)),
            sessions_per_subject=int(s.get("sessions_per_subject", 3)),
            epochs_per_session=int(s.get("epochs_per_session", 16)),
            session_gap_days=tuple(s.get("session_gap_days", (6, 18))),
            devices=devices,
            subject_signature=sig,
            session_drift_scale=float(s.get("session_drift_scale", 0.1)),
            noise_scale=float(s.get("noise_scale", 3.0)),
            rate_hz=float(s.get("rate_hz", 500.0)),
            seed=int(self.seed),
        ).validate()

    def preprocess_config(self) -> PreprocessConfig:
        p = dict(self.preprocess)
        bp = bandpass_spec(**p.get("bandpass", {}))
        nt = notch_spec(**p.get("notch", {}))
        return PreprocessConfig(bandpass=bp, notch=nt)

    def feature_spec(self) -> FeatureSpec:
        f = dict(self.features)
        return FeatureSpec(
            kind=f.get("kind", "psd+ar"),
            psd=PsdSpec(**{k: tuple(v) if k == "band_hz" else v
                           for k, v in f.get("psd", {}).items()}),
            ar=ArSpec(**f.get("ar", {})),
            post_norm=f.get("post_norm", "none"),
        ).validate()

    def reference_subjects(self) -> list[str]:
        return list(self.features.get("reference_subjects", []))

    def scorer_config(self) -> ScorerConfig:
        s = dict(self.scorer)
        return ScorerConfig(
            kind=s.get("kind", "distance"),
            metric=s.get("metric", "euclidean"),
            logreg=LogRegConfig(**s.get("logreg", {})),
            lda_shrinkage=float(s.get("lda_shrinkage", 0.1)),
            negative_cohort=tuple(s.get("negative_cohort", [])),
        ).validate()

    def protocol_config(self, **overrides) -> ProtocolConfig:
        p = dict(self.protocol)
        p.update({k: v for k, v in overrides.items() if v is not None})
        bins = tuple(tuple(b) for b in p["interval_bins"]) if "interval_bins" in p \
            else DEFAULT_INTERVAL_BINS
        return ProtocolConfig(
            enroll_rule=p.get("enroll_rule", "first_k"),
            enroll_k=int(p.get("enroll_k", 1)),
            enroll_explicit=dict(p.get("enroll_explicit", {})),
            subjects=tuple(p["subjects"]) if p.get("subjects") else None,
            verify_rule=p.get("verify_rule", "all_remaining"),
            verification_samples=int(p.get("verification_samples", 1)),
            probe_rule=p.get("probe_rule", "mean-embedding"),
            template_rule=p.get("template_rule", "centroid"),
            device_pair_filter=tuple(p["device_pair_filter"]) if p.get("device_pair_filter") else None,
            interval_bins=bins,
            channel_subset=p.get("channel_subset"),
            seed=int(self.seed),
        ).validate()


def load_config(path: str | None) -> RunConfig:
    if path is None:
        path = os.environ.get(ENV_CONFIG)
    if path is None:
        return RunConfig()
    try:
        with open(path) as f:
            doc = json.load(f)
    except FileNotFoundError:
        raise DataError(f"config file not found: {path}")
    except json.JSONDecodeError as e:
        raise ValidationError(f"config file {path} is not valid JSON: {e}")
    known = {"seed", "paths", "synth", "preprocess", "features", "scorer",
             "protocol", "analysis", "report"}
    unknown = set(doc) - known
    if unknown:
        raise ValidationError(f"config file {path} has unknown sections: {sorted(unknown)}")
    cfg = RunConfig()
    for key, value in doc.items():
        setattr(cfg, key, value)
    return cfg
