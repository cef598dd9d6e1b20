"""The complete explainability record behind every classification.

An audit record contains everything needed to check a decision by hand:
which cues fired and how often, their raw and effective weights with the
reason for every divergence, the evidence vector and distribution, the
computed level, any dehumanization override or exemption, and the exact
lexicon/model/policy versions. Re-running the pipeline on the recorded
inputs reproduces the record byte for byte; records are canonical JSON
(sorted keys) so two records diff cleanly.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import TYPE_CHECKING, Any, Optional

from .canonical import canonical_json, format_timestamp
from .policy import Exemption, PolicyConfig, SuppressionEvent, apply_policy
from .scoring import WeightModel
from .taxonomy import Level, Lexicon

if TYPE_CHECKING:  # pragma: no cover
    from .profiler import ActorProfile


@dataclass(frozen=True)
class AuditFiredCue:
    cue_id: str
    count: int
    raw_weight: float
    multiplier: float
    effective_weight: float
    weighted_contribution: float
    adjustment_reason: Optional[str] = None
    suppressed: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "cue_id": self.cue_id,
            "count": self.count,
            "raw_weight": self.raw_weight,
            "multiplier": self.multiplier,
            "effective_weight": self.effective_weight,
            "weighted_contribution": self.weighted_contribution,
            "adjustment_reason": self.adjustment_reason,
            "suppressed": self.suppressed,
        }


@dataclass(frozen=True)
class AuditRecord:
    actor_id: str
    timestamp: datetime
    window: tuple[datetime, datetime]
    lexicon_version: str
    model_version: str
    policy_version: str
    thresholds: tuple[float, float, float]
    n_items: int
    confidence: float
    fired_cues: tuple[AuditFiredCue, ...]
    level_evidence: tuple[float, float, float, float]
    level_distribution: tuple[float, float, float, float]
    computed_level: Level
    effective_level: Level
    dehumanization: Optional[dict[str, Any]]
    dehumanization_override: bool
    exemption: Optional[dict[str, Any]]
    suppression_events: tuple[SuppressionEvent, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "actor_id": self.actor_id,
            "timestamp": format_timestamp(self.timestamp),
            "window_start": format_timestamp(self.window[0]),
            "window_end": format_timestamp(self.window[1]),
            "versions": {
                "lexicon": self.lexicon_version,
                "model": self.model_version,
                "policy": self.policy_version,
            },
            "thresholds": list(self.thresholds),
            "n_items": self.n_items,
            "confidence": self.confidence,
            "fired_cues": [fc.to_dict() for fc in self.fired_cues],
            "level_evidence": list(self.level_evidence),
            "level_distribution": list(self.level_distribution),
            "computed_level": int(self.computed_level),
            "computed_level_name": self.computed_level.label,
            "effective_level": int(self.effective_level),
            "effective_level_name": self.effective_level.label,
            "dehumanization": self.dehumanization,
            "dehumanization_override": self.dehumanization_override,
            "exemption": self.exemption,
            "suppression_events": [s.to_dict() for s in self.suppression_events],
        }

    def canonical(self) -> str:
        return canonical_json(self.to_dict())


def build_audit_record(
    profile: "ActorProfile",
    model: WeightModel,
    policy: PolicyConfig,
    lex: Lexicon,
    thresholds: tuple[float, float, float],
    computed_level: Level,
    effective_level: Level,
    dehumanization_override: bool,
    exemption: Optional[Exemption],
) -> AuditRecord:
    table = apply_policy(policy, lex)
    adjustment_by_cue = {adj.cue_id: adj for adj in profile.policy_adjustments}

    fired: list[AuditFiredCue] = []
    for agg in profile.fired_cue_totals:
        cue = lex.get(agg.cue_id)
        base = cue.base_weight if cue is not None else 0.0
        raw = model.cue_weight(agg.cue_id, base)
        multiplier = table.get(agg.cue_id)
        adj = adjustment_by_cue.get(agg.cue_id)
        fired.append(
            AuditFiredCue(
                cue_id=agg.cue_id,
                count=agg.count,
                raw_weight=raw,
                multiplier=multiplier,
                effective_weight=agg.effective_weight,
                weighted_contribution=agg.weighted_contribution,
                adjustment_reason=adj.reason if adj is not None else None,
                suppressed=adj.suppressed if adj is not None else False,
            )
        )

    return AuditRecord(
        actor_id=profile.actor_id,
        timestamp=profile.window[1],
        window=profile.window,
        lexicon_version=profile.lexicon_version or lex.version,
        model_version=profile.model_version or model.version,
        policy_version=profile.policy_version or policy.version,
        thresholds=thresholds,
        n_items=profile.n_items,
        confidence=profile.confidence,
        fired_cues=tuple(fired),
        level_evidence=profile.level_evidence,
        level_distribution=profile.level_distribution,
        computed_level=computed_level,
        effective_level=effective_level,
        dehumanization=(
            profile.dehumanization.to_dict() if profile.dehumanization else None
        ),
        dehumanization_override=dehumanization_override,
        exemption=exemption.to_dict() if exemption is not None else None,
        suppression_events=table.suppressions,
    )
