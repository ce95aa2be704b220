"""Enrollment/verification session splits."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..corpus.model import CorpusIndex, SessionMeta
from ..errors import ValidationError
from .config import ProtocolConfig


@dataclass
class SubjectSplit:
    subject_id: str
    enroll: list[SessionMeta]
    verify: list[SessionMeta]


@dataclass
class EvalSplit:
    subjects: dict[str, SubjectSplit]
    excluded: list[str] = field(default_factory=list)  # too few sessions

    def subject_ids(self) -> list[str]:
        return sorted(self.subjects)


def split_enroll_verify(index: CorpusIndex, cfg: ProtocolConfig) -> EvalSplit:
    """Assign each subject's sessions to enrollment and verification.

    Enrollment takes the k chronologically earliest sessions (or an
    explicit list); verification is either every remaining session or
    only the first one after enrollment. Subjects without enough
    sessions for a non-empty verify set are excluded and reported.
    """
    cfg.validate()
    pool = index.subjects()
    if cfg.subjects is not None:
        wanted = set(cfg.subjects)
        unknown = sorted(wanted - set(pool))
        if unknown:
            raise ValidationError(f"protocol names subjects absent from the corpus: {unknown}")
        pool = [s for s in pool if s in wanted]
    subjects: dict[str, SubjectSplit] = {}
    excluded: list[str] = []
    for subject in pool:
        sessions = [r.meta for r in index.sessions_of(subject)]
        if cfg.enroll_rule == "first_k":
            k = cfg.enroll_k
            if len(sessions) < k + 1:
                excluded.append(subject)
                continue
            enroll = sessions[:k]
            remaining = sessions[k:]
        else:
            wanted = set(cfg.enroll_explicit.get(subject, []))
            if not wanted:
                excluded.append(subject)
                continue
            enroll = [s for s in sessions if s.session_id in wanted]
            if len(enroll) != len(wanted):
                missing = sorted(wanted - {s.session_id for s in enroll})
                raise ValidationError(
                    f"explicit enrollment for {subject} names unknown sessions: {missing}"
                )
            last = max(s.date for s in enroll)
            remaining = [s for s in sessions if s.session_id not in wanted and s.date >= last]
        if not remaining:
            excluded.append(subject)
            continue
        verify = remaining if cfg.verify_rule == "all_remaining" else remaining[:1]
        subjects[subject] = SubjectSplit(subject_id=subject, enroll=enroll, verify=verify)
    if not subjects:
        raise ValidationError("no subject has enough sessions for this protocol")
    return EvalSplit(subjects=subjects, excluded=excluded)
