"""Turning cue hits into per-level and per-type evidence.

The combiner is deliberately plain: evidence is a weighted linear sum
(count x effective weight x dimension weight), normalized L1 into a
distribution. No softmax, no interactions. A moderator reading an audit
record can check every number by hand, and scaling all weights by a
constant provably changes nothing about the ranking of levels.

Zero evidence maps to the uniform distribution, and the classifier treats
that as Level 0: absence of evidence must never escalate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Any, Mapping, Optional, Sequence

from . import config
from .matcher import ContentItem, CueHit, CueScanner
from .policy import MultiplierTable, PolicyConfig, apply_policy
from .taxonomy import (
    CUE_DIMENSIONS,
    CueDimension,
    IdeologyType,
    Lexicon,
    cues_in_effect,
)

UNIFORM_DISTRIBUTION = (0.25, 0.25, 0.25, 0.25)


class UnknownCue(KeyError):
    def __init__(self, cue_id: str):
        super().__init__(cue_id)
        self.cue_id = cue_id

    def __str__(self) -> str:
        return f"hit references cue {self.cue_id!r} not present in the lexicon"


@dataclass(frozen=True)
class WeightModel:
    """Calibratable scoring parameters.

    ``cue_weights`` overrides lexicon base weights per cue id; missing ids
    fall back to ``base_weight``. ``level_thresholds`` are the minimum
    aggregate evidence beyond which levels 1..3 become eligible.
    """

    version: str
    cue_weights: Mapping[str, float] = field(default_factory=dict)
    dimension_weights: Mapping[CueDimension, float] = field(
        default_factory=lambda: {d: 1.0 for d in CUE_DIMENSIONS}
    )
    level_thresholds: tuple[float, float, float] = config.DEFAULT_THRESHOLDS

    def __post_init__(self) -> None:
        t1, t2, t3 = self.level_thresholds
        if not (t1 <= t2 <= t3):
            raise ValueError(
                f"level_thresholds must be ordered, got {self.level_thresholds}"
            )
        for cue_id, w in self.cue_weights.items():
            if not math.isfinite(w) or w < 0:
                raise ValueError(f"cue weight for {cue_id!r} must be finite and >= 0")
        for dim, w in self.dimension_weights.items():
            if not math.isfinite(w) or w <= 0:
                raise ValueError(f"dimension weight for {dim} must be positive")

    def cue_weight(self, cue_id: str, base_weight: float) -> float:
        return self.cue_weights.get(cue_id, base_weight)

    def dimension_weight(self, dimension: CueDimension) -> float:
        return self.dimension_weights.get(dimension, 1.0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": "1",
            "version": self.version,
            "cue_weights": dict(sorted(self.cue_weights.items())),
            "dimension_weights": {
                d.value: self.dimension_weights.get(d, 1.0) for d in CUE_DIMENSIONS
            },
            "level_thresholds": list(self.level_thresholds),
        }

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "WeightModel":
        return cls(
            version=str(raw["version"]),
            cue_weights={str(k): float(v) for k, v in raw.get("cue_weights", {}).items()},
            dimension_weights={
                CueDimension(k): float(v)
                for k, v in raw.get("dimension_weights", {}).items()
            },
            level_thresholds=tuple(
                float(t) for t in raw.get("level_thresholds", config.DEFAULT_THRESHOLDS)
            ),
        )


def default_model(version: str = "base-weights-1") -> WeightModel:
    """Model that scores with lexicon base weights and default cut-offs."""
    return WeightModel(version=version)


@dataclass(frozen=True)
class FiredCue:
    """Provenance for one cue's contribution to one content item.

    ``contribution`` = count x effective_weight x dimension_weight; the sum
    of contributions per level reproduces ``level_evidence`` exactly.
    """

    cue_id: str
    count: int
    effective_weight: float
    contribution: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "cue_id": self.cue_id,
            "count": self.count,
            "effective_weight": self.effective_weight,
            "contribution": self.contribution,
        }


@dataclass(frozen=True)
class PolicyAdjustment:
    """A policy multiplier that touched (or tried to touch) a fired cue."""

    cue_id: str
    multiplier: float
    reason: str
    suppressed: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "cue_id": self.cue_id,
            "multiplier": self.multiplier,
            "reason": self.reason,
            "suppressed": self.suppressed,
        }


@dataclass(frozen=True)
class ContentScore:
    content_id: str
    timestamp: datetime
    level_evidence: tuple[float, float, float, float]
    level_distribution: tuple[float, float, float, float]
    type_evidence: Mapping[IdeologyType, float]
    fired_cues: tuple[FiredCue, ...]
    policy_adjustments: tuple[PolicyAdjustment, ...]
    requires_human_review: bool = False


def _normalize(evidence: Sequence[float]) -> tuple[float, float, float, float]:
    total = sum(evidence)
    if total <= 0:
        return UNIFORM_DISTRIBUTION
    return tuple(e / total for e in evidence)  # type: ignore[return-value]


def score_content(
    hits: Sequence[CueHit],
    model: WeightModel,
    policy: PolicyConfig,
    lex: Lexicon,
    *,
    content_id: str = "",
    timestamp: Optional[datetime] = None,
    multiplier_table: Optional[MultiplierTable] = None,
) -> ContentScore:
    """Score one item's hits under a model and policy.

    ``multiplier_table`` may be passed to reuse a precomputed
    ``apply_policy`` result across a corpus pass.
    """
    table = multiplier_table if multiplier_table is not None else apply_policy(policy, lex)
    suppressed = table.suppressed_ids()

    level_evidence = [0.0, 0.0, 0.0, 0.0]
    type_evidence: dict[IdeologyType, float] = {}
    fired: list[FiredCue] = []
    adjustments: list[PolicyAdjustment] = []
    needs_review = False

    for hit in sorted(hits, key=lambda h: h.cue_id):
        cue = lex.get(hit.cue_id)
        if cue is None:
            raise UnknownCue(hit.cue_id)
        multiplier = table.get(cue.id)
        effective = model.cue_weight(cue.id, cue.base_weight) * multiplier
        contribution = hit.count * effective * model.dimension_weight(cue.dimension)
        level_evidence[int(cue.level_affinity)] += contribution
        for ideology in cue.type_affinities:
            type_evidence[ideology] = type_evidence.get(ideology, 0.0) + contribution
        fired.append(
            FiredCue(
                cue_id=cue.id,
                count=hit.count,
                effective_weight=effective,
                contribution=contribution,
            )
        )
        if cue.requires_human_review:
            needs_review = True

        requested = policy.cue_multipliers.get(cue.id)
        if requested is not None and requested.value != 1.0:
            adjustments.append(
                PolicyAdjustment(
                    cue_id=cue.id,
                    multiplier=requested.value,
                    reason=requested.reason,
                    suppressed=cue.id in suppressed,
                )
            )

    return ContentScore(
        content_id=content_id,
        timestamp=(
            timestamp if timestamp is not None else datetime.fromtimestamp(0, tz=timezone.utc)
        ),
        level_evidence=tuple(level_evidence),  # type: ignore[arg-type]
        level_distribution=_normalize(level_evidence),
        type_evidence=type_evidence,
        fired_cues=tuple(fired),
        policy_adjustments=tuple(adjustments),
        requires_human_review=needs_review,
    )


def score_item(
    item: ContentItem,
    hits: Sequence[CueHit],
    model: WeightModel,
    policy: PolicyConfig,
    lex: Lexicon,
    *,
    multiplier_table: Optional[MultiplierTable] = None,
) -> ContentScore:
    return score_content(
        hits,
        model,
        policy,
        lex,
        content_id=item.id,
        timestamp=item.timestamp,
        multiplier_table=multiplier_table,
    )


def score_corpus(
    items: Sequence[ContentItem],
    lex: Lexicon,
    model: WeightModel,
    policy: PolicyConfig,
) -> list[tuple[ContentItem, ContentScore]]:
    """Scan and score a batch of items.

    Cues in effect can differ per item (region and time constraints), so
    scanners are compiled per distinct effective cue set and reused.
    """
    table = apply_policy(policy, lex)
    scanners: dict[tuple[str, ...], CueScanner] = {}
    out: list[tuple[ContentItem, ContentScore]] = []
    for item in sorted(items, key=lambda i: (i.timestamp, i.id)):
        effective = cues_in_effect(lex, item.region, item.timestamp)
        key = tuple(cue.id for cue in effective)
        scanner = scanners.get(key)
        if scanner is None:
            scanner = CueScanner(effective)
            scanners[key] = scanner
        hits = scanner.scan(item)
        out.append(
            (item, score_item(item, hits, model, policy, lex, multiplier_table=table))
        )
    return out


@dataclass(frozen=True)
class DehumanizationAssessment:
    """Serial/systematic dehumanization over an actor's recent items.

    ``serial`` is true when dehumanization-form cues fired (with nonzero
    effective weight) in at least N distinct items on at least D distinct
    days within the trailing window. The thresholds come from policy and
    are echoed back so audit records are self-describing.
    """

    serial: bool
    distinct_items: int
    distinct_days: int
    rate: float
    window_days: int
    threshold_items: int
    threshold_days: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "serial": self.serial,
            "distinct_items": self.distinct_items,
            "distinct_days": self.distinct_days,
            "rate": self.rate,
            "window_days": self.window_days,
            "threshold_items": self.threshold_items,
            "threshold_days": self.threshold_days,
        }


def assess_dehumanization(
    items: Sequence[tuple[ContentItem, ContentScore]],
    window_days: int,
    lex: Lexicon,
    policy: PolicyConfig,
) -> DehumanizationAssessment:
    """Assess one actor's scored items for serial dehumanization.

    The window trails the newest item: items older than ``window_days``
    before it are ignored. A fully suppressed cue (multiplier 0 with the
    floor off) does not count; the floor-on default makes full suppression
    impossible.
    """
    if window_days < 1:
        raise ValueError("window_days must be >= 1")
    dehum_ids = lex.dehumanization_cue_ids()
    if not items:
        return DehumanizationAssessment(
            serial=False,
            distinct_items=0,
            distinct_days=0,
            rate=0.0,
            window_days=window_days,
            threshold_items=policy.serial_N,
            threshold_days=policy.serial_D,
        )

    newest = max(item.timestamp for item, _ in items)
    cutoff = newest - timedelta(days=window_days)
    in_window = [(item, score) for item, score in items if item.timestamp > cutoff]

    dehumanizing_items = 0
    days: set[str] = set()
    for item, score in in_window:
        fired_dehum = any(
            fc.cue_id in dehum_ids and fc.count > 0 and fc.effective_weight > 0
            for fc in score.fired_cues
        )
        if fired_dehum:
            dehumanizing_items += 1
            days.add(item.timestamp.date().isoformat())

    rate = dehumanizing_items / len(in_window) if in_window else 0.0
    return DehumanizationAssessment(
        serial=(dehumanizing_items >= policy.serial_N and len(days) >= policy.serial_D),
        distinct_items=dehumanizing_items,
        distinct_days=len(days),
        rate=rate,
        window_days=window_days,
        threshold_items=policy.serial_N,
        threshold_days=policy.serial_D,
    )
