"""Actor-level aggregation and classification.

Content scores roll up into an actor profile: a recency-weighted evidence
vector per level, ideology-type memberships, and a confidence that grows
with evidence volume. Classification over the profile is conservative by
construction: a level is assigned only when total evidence clears its
cut-off AND the majority of distribution mass sits at or above it, with
all ties resolved downward. The single exception is serial dehumanization,
which forces at least the violent-extremism level; that override is always
visible in the audit record.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum
from typing import Mapping, Optional, Sequence

from . import config
from .audit import AuditRecord, build_audit_record
from .policy import PolicyConfig, apply_policy
from .scoring import (
    ContentScore,
    DehumanizationAssessment,
    PolicyAdjustment,
    UnknownCue,
    WeightModel,
    UNIFORM_DISTRIBUTION,
)
from .taxonomy import IDEOLOGY_TYPES, IdeologyType, Level, Lexicon

LN2 = math.log(2.0)


class ActorKind(str, Enum):
    INDIVIDUAL = "Individual"
    GROUP = "Group"
    MOVEMENT = "Movement"


_NESTING_ORDER = {ActorKind.INDIVIDUAL: 0, ActorKind.GROUP: 1, ActorKind.MOVEMENT: 2}


@dataclass(frozen=True)
class Actor:
    id: str
    kind: ActorKind
    display_name: str
    region: str
    parent_id: Optional[str] = None


def validate_actor_hierarchy(actors: Mapping[str, Actor]) -> list[str]:
    """Check parent links: acyclic, and parent kind strictly larger."""
    problems: list[str] = []
    for actor in actors.values():
        if actor.parent_id is None:
            continue
        parent = actors.get(actor.parent_id)
        if parent is None:
            problems.append(f"{actor.id}: parent {actor.parent_id!r} unknown")
            continue
        if _NESTING_ORDER[parent.kind] <= _NESTING_ORDER[actor.kind]:
            problems.append(
                f"{actor.id}: parent {parent.id!r} must be a strictly larger "
                f"kind ({actor.kind.value} -> {parent.kind.value})"
            )
        seen = {actor.id}
        node: Optional[Actor] = parent
        while node is not None:
            if node.id in seen:
                problems.append(f"{actor.id}: parent chain contains a cycle")
                break
            seen.add(node.id)
            node = actors.get(node.parent_id) if node.parent_id else None
    return problems


class Trend(str, Enum):
    RISING = "Rising"
    STABLE = "Stable"
    FALLING = "Falling"


@dataclass(frozen=True)
class AggregatedCue:
    """One cue's totals across a window: counts and decayed contribution."""

    cue_id: str
    count: int
    effective_weight: float
    weighted_contribution: float


@dataclass(frozen=True)
class ActorProfile:
    actor_id: str
    window: tuple[datetime, datetime]
    half_life_days: float
    level_evidence: tuple[float, float, float, float]
    level_distribution: tuple[float, float, float, float]
    type_evidence: Mapping[IdeologyType, float]
    type_memberships: Mapping[IdeologyType, float]
    member_types: tuple[IdeologyType, ...]
    confidence: float
    n_items: int
    fired_cue_totals: tuple[AggregatedCue, ...] = ()
    policy_adjustments: tuple[PolicyAdjustment, ...] = ()
    serial_dehumanization: bool = False
    dehumanization: Optional[DehumanizationAssessment] = None
    classification: Optional[Level] = None
    trend: Trend = Trend.STABLE
    model_version: str = ""
    policy_version: str = ""
    lexicon_version: str = ""

    @property
    def total_evidence(self) -> float:
        return sum(self.level_evidence)

    @property
    def expected_level(self) -> float:
        return sum(
            level * p for level, p in zip(range(4), self.level_distribution)
        )


def _decay_weight(age_days: float, half_life_days: float) -> float:
    return math.exp(-LN2 * age_days / half_life_days)


def _memberships(
    type_evidence: Mapping[IdeologyType, float], threshold: float
) -> tuple[dict[IdeologyType, float], tuple[IdeologyType, ...]]:
    total = sum(type_evidence.values())
    if total <= 0:
        return {}, ()
    normalized = {t: v / total for t, v in type_evidence.items() if v > 0}
    members = tuple(
        t for t in IDEOLOGY_TYPES if normalized.get(t, 0.0) >= threshold
    )
    return normalized, members


def aggregate_actor(
    scores: Sequence[ContentScore],
    window: tuple[datetime, datetime],
    half_life_days: float,
    *,
    actor_id: str = "",
    membership_threshold: float = config.MEMBERSHIP_THRESHOLD,
    confidence_k: float = config.CONFIDENCE_K,
    model_version: str = "",
    policy_version: str = "",
    lexicon_version: str = "",
) -> ActorProfile:
    """Fold one actor's content scores over ``window`` = [start, end).

    Each item's raw evidence is decayed by ``exp(-ln2 * age / half_life)``
    with age measured back from the window end, then summed; the level
    distribution is the L1 normalization of that sum. An empty window
    yields the uniform distribution with confidence 0.
    """
    start, end = window
    if not start < end:
        raise ValueError("window must be nonempty (start < end)")
    if half_life_days <= 0:
        raise ValueError("half_life_days must be positive")

    in_window = sorted(
        (s for s in scores if start <= s.timestamp < end),
        key=lambda s: (s.timestamp, s.content_id),
    )

    level_sums = [0.0, 0.0, 0.0, 0.0]
    type_sums: dict[IdeologyType, float] = {}
    cue_totals: dict[str, list] = {}
    adjustments: dict[str, PolicyAdjustment] = {}
    for score in in_window:
        age_days = (end - score.timestamp).total_seconds() / 86400.0
        w = _decay_weight(age_days, half_life_days)
        for level in range(4):
            level_sums[level] += w * score.level_evidence[level]
        for ideology, value in score.type_evidence.items():
            type_sums[ideology] = type_sums.get(ideology, 0.0) + w * value
        for fc in score.fired_cues:
            entry = cue_totals.setdefault(fc.cue_id, [0, fc.effective_weight, 0.0])
            entry[0] += fc.count
            entry[2] += w * fc.contribution
        for adj in score.policy_adjustments:
            adjustments.setdefault(adj.cue_id, adj)

    n_items = len(in_window)
    total = sum(level_sums)
    if total > 0:
        distribution = tuple(v / total for v in level_sums)
    else:
        distribution = UNIFORM_DISTRIBUTION
    confidence = 1.0 - math.exp(-n_items / confidence_k) if n_items else 0.0
    memberships, members = _memberships(type_sums, membership_threshold)

    return ActorProfile(
        actor_id=actor_id,
        window=window,
        half_life_days=half_life_days,
        level_evidence=tuple(level_sums),  # type: ignore[arg-type]
        level_distribution=distribution,  # type: ignore[arg-type]
        type_evidence=type_sums,
        type_memberships=memberships,
        member_types=members,
        confidence=confidence,
        n_items=n_items,
        fired_cue_totals=tuple(
            AggregatedCue(cue_id, entry[0], entry[1], entry[2])
            for cue_id, entry in sorted(cue_totals.items())
        ),
        policy_adjustments=tuple(
            adjustments[k] for k in sorted(adjustments)
        ),
        model_version=model_version,
        policy_version=policy_version,
        lexicon_version=lexicon_version,
    )


def merge_aggregates(
    parts: Sequence[ActorProfile],
    *,
    membership_threshold: float = config.MEMBERSHIP_THRESHOLD,
    confidence_k: float = config.CONFIDENCE_K,
) -> ActorProfile:
    """Decay-weight-correct merge of aggregates over adjacent subwindows.

    Each part's raw sums were decayed relative to its own window end; they
    are rescaled to the merged window end before summing, so the merge is
    associative and commutative and equals a single aggregation over the
    whole window. Dehumanization fields do not merge; re-assess over the
    merged item set if needed.
    """
    if not parts:
        raise ValueError("nothing to merge")
    half_life = parts[0].half_life_days
    if any(p.half_life_days != half_life for p in parts):
        raise ValueError("parts were aggregated under different half-lives")
    start = min(p.window[0] for p in parts)
    end = max(p.window[1] for p in parts)

    level_sums = [0.0, 0.0, 0.0, 0.0]
    type_sums: dict[IdeologyType, float] = {}
    cue_totals: dict[str, list] = {}
    n_items = 0
    for part in sorted(parts, key=lambda p: p.window[0]):
        shift = (end - part.window[1]).total_seconds() / 86400.0
        scale = _decay_weight(shift, half_life)
        for level in range(4):
            level_sums[level] += scale * part.level_evidence[level]
        for ideology, value in part.type_evidence.items():
            type_sums[ideology] = type_sums.get(ideology, 0.0) + scale * value
        for agg in part.fired_cue_totals:
            entry = cue_totals.setdefault(agg.cue_id, [0, agg.effective_weight, 0.0])
            entry[0] += agg.count
            entry[2] += scale * agg.weighted_contribution
        n_items += part.n_items

    total = sum(level_sums)
    distribution = (
        tuple(v / total for v in level_sums) if total > 0 else UNIFORM_DISTRIBUTION
    )
    confidence = 1.0 - math.exp(-n_items / confidence_k) if n_items else 0.0
    memberships, members = _memberships(type_sums, membership_threshold)
    first = parts[0]
    return replace(
        first,
        window=(start, end),
        level_evidence=tuple(level_sums),
        level_distribution=distribution,
        type_evidence=type_sums,
        type_memberships=memberships,
        member_types=members,
        confidence=confidence,
        n_items=n_items,
        fired_cue_totals=tuple(
            AggregatedCue(cue_id, entry[0], entry[1], entry[2])
            for cue_id, entry in sorted(cue_totals.items())
        ),
        serial_dehumanization=False,
        dehumanization=None,
        classification=None,
    )


class ModelMismatch(ValueError):
    """Profile was aggregated under a different model version."""


@dataclass(frozen=True)
class ClassificationOutcome:
    computed_level: Level
    effective_level: Level
    confidence: float
    dehumanization_override: bool
    audit: AuditRecord

    @property
    def level(self) -> Level:
        return self.effective_level


def classify_actor(
    profile: ActorProfile,
    model: WeightModel,
    policy: PolicyConfig,
    lex: Lexicon,
) -> ClassificationOutcome:
    """Classify a profile under level cut-offs, with full audit provenance.

    Candidate level = highest L in {1,2,3} whose cut-off the total evidence
    clears while the distribution mass at >= L exceeds 0.5; anything else,
    including the zero-evidence uniform fallback, is Level 0. Serial
    dehumanization forces at least Level 2. An exemption changes only the
    effective level; the computed level stays in the record.
    """
    if profile.model_version and profile.model_version != model.version:
        raise ModelMismatch(
            f"profile built under model {profile.model_version!r}, "
            f"classifying with {model.version!r}"
        )
    thresholds = (
        policy.thresholds_override
        if policy.thresholds_override is not None
        else model.level_thresholds
    )
    total = profile.total_evidence
    dist = profile.level_distribution

    computed = Level.PARTISANSHIP
    if total > 0:
        for candidate in (3, 2, 1):
            mass_at_or_above = sum(dist[candidate:])
            if total >= thresholds[candidate - 1] and mass_at_or_above > 0.5:
                computed = Level(candidate)
                break

    override_fired = False
    if profile.serial_dehumanization and computed < Level.VIOLENT_EXTREMISM:
        computed = Level.VIOLENT_EXTREMISM
        override_fired = True

    exemption = policy.exemption_for(profile.actor_id)
    if exemption is not None and exemption.effective_level_override is not None:
        effective = exemption.effective_level_override
    else:
        effective = computed

    audit = build_audit_record(
        profile=profile,
        model=model,
        policy=policy,
        lex=lex,
        thresholds=thresholds,
        computed_level=computed,
        effective_level=effective,
        dehumanization_override=override_fired,
        exemption=exemption,
    )
    return ClassificationOutcome(
        computed_level=computed,
        effective_level=effective,
        confidence=profile.confidence,
        dehumanization_override=override_fired,
        audit=audit,
    )


@dataclass(frozen=True)
class HolisticProfile:
    """Evidence shares across the full level x ideology-type grid.

    ``grid[level][t]`` follows the canonical ideology order; contributions
    of multi-affinity cues split equally across their types. Type-agnostic
    cues are reported in the separate ``general`` column, not in the grid.
    """

    actor_id: str
    grid: tuple[tuple[float, float, float, float, float], ...]
    general: tuple[float, float, float, float]


def holistic_profile(
    scores: Sequence[ContentScore], lex: Lexicon, *, actor_id: str = ""
) -> HolisticProfile:
    grid = [[0.0] * len(IDEOLOGY_TYPES) for _ in range(4)]
    general = [0.0, 0.0, 0.0, 0.0]
    type_index = {t: i for i, t in enumerate(IDEOLOGY_TYPES)}
    for score in sorted(scores, key=lambda s: (s.timestamp, s.content_id)):
        for fc in score.fired_cues:
            cue = lex.get(fc.cue_id)
            if cue is None:
                raise UnknownCue(fc.cue_id)
            row = int(cue.level_affinity)
            if cue.type_affinities:
                share = fc.contribution / len(cue.type_affinities)
                for ideology in sorted(cue.type_affinities, key=lambda t: t.value):
                    grid[row][type_index[ideology]] += share
            else:
                general[row] += fc.contribution
    return HolisticProfile(
        actor_id=actor_id,
        grid=tuple(tuple(row) for row in grid),  # type: ignore[arg-type]
        general=tuple(general),  # type: ignore[arg-type]
    )


def jensen_shannon(p: Sequence[float], q: Sequence[float]) -> float:
    """Jensen-Shannon divergence (natural log), bounded by [0, ln 2]."""
    if len(p) != len(q):
        raise ValueError("distributions must have equal length")
    sp, sq = sum(p), sum(q)
    if sp <= 0 or sq <= 0:
        raise ValueError("distributions must have positive mass")
    p = [x / sp for x in p]
    q = [x / sq for x in q]
    div = 0.0
    for pi, qi in zip(p, q):
        mi = 0.5 * (pi + qi)
        if pi > 0:
            div += 0.5 * pi * math.log(pi / mi)
        if qi > 0:
            div += 0.5 * qi * math.log(qi / mi)
    return max(0.0, min(div, LN2))


def detect_splinter(parent: ActorProfile, child: ActorProfile) -> float:
    """Divergence between a child actor's level profile and its parent's."""
    return jensen_shannon(parent.level_distribution, child.level_distribution)


def is_potential_splinter(
    divergence: float, threshold: float = config.SPLINTER_THRESHOLD
) -> bool:
    return divergence > threshold
