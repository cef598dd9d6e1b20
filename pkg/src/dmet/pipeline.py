"""End-to-end orchestration: items in, classified profile and audit out.

The CLI, the HTTP service, and the exports all call through here, so every
surface sees the same numbers. Profile windows are anchored to the UTC
midnight after the newest item rather than to wall-clock now; the same
corpus therefore always produces the same profile, which is what makes
audit records replayable.
"""

from __future__ import annotations

from dataclasses import replace
from datetime import datetime, timedelta, timezone
from typing import Any, Mapping, Optional, Sequence

from . import config
from .audit import AuditRecord
from .canonical import format_timestamp
from .matcher import ContentItem
from .policy import PolicyConfig, apply_policy
from .profiler import (
    ActorProfile,
    ClassificationOutcome,
    aggregate_actor,
    classify_actor,
    holistic_profile,
)
from .scoring import (
    ContentScore,
    WeightModel,
    assess_dehumanization,
    score_corpus,
)
from .taxonomy import IDEOLOGY_TYPES, Lexicon


def anchor_after(newest: datetime) -> datetime:
    """The UTC midnight strictly after ``newest``; the default window end."""
    newest = newest.astimezone(timezone.utc)
    floor = newest.replace(hour=0, minute=0, second=0, microsecond=0)
    return floor + timedelta(days=1)


def default_window(
    items: Sequence[ContentItem], window_days: Optional[int] = None
) -> tuple[datetime, datetime]:
    if not items:
        raise ValueError("cannot derive a window from an empty item list")
    newest = max(item.timestamp for item in items)
    end = anchor_after(newest)
    if window_days is not None:
        return end - timedelta(days=window_days), end
    oldest = min(item.timestamp for item in items)
    floor = oldest.astimezone(timezone.utc).replace(
        hour=0, minute=0, second=0, microsecond=0
    )
    return floor, end


def profile_actor(
    actor_id: str,
    items: Sequence[ContentItem],
    lex: Lexicon,
    model: WeightModel,
    policy: PolicyConfig,
    *,
    window: Optional[tuple[datetime, datetime]] = None,
    window_days: Optional[int] = None,
    half_life_days: float = config.DEFAULT_HALF_LIFE_DAYS,
    serial_window_days: int = config.DEFAULT_SERIAL_WINDOW_DAYS,
) -> tuple[ActorProfile, list[tuple[ContentItem, ContentScore]]]:
    """Scan, score, and aggregate one actor's items into a profile."""
    own = [item for item in items if item.actor_id == actor_id]
    if window is None and own:
        window = default_window(own, window_days)
    elif window is None:
        now = datetime.now(tz=timezone.utc).replace(
            hour=0, minute=0, second=0, microsecond=0
        )
        window = (now - timedelta(days=window_days or 30), now)

    scored = score_corpus(own, lex, model, policy)
    in_window = [
        (item, score)
        for item, score in scored
        if window[0] <= item.timestamp < window[1]
    ]
    profile = aggregate_actor(
        [score for _, score in in_window],
        window,
        half_life_days,
        actor_id=actor_id,
        model_version=model.version,
        policy_version=policy.version,
        lexicon_version=lex.version,
    )
    assessment = assess_dehumanization(in_window, serial_window_days, lex, policy)
    profile = replace(
        profile, serial_dehumanization=assessment.serial, dehumanization=assessment
    )
    return profile, in_window


def classify_and_explain(
    actor_id: str,
    items: Sequence[ContentItem],
    lex: Lexicon,
    model: WeightModel,
    policy: PolicyConfig,
    **profile_kwargs: Any,
) -> tuple[ActorProfile, ClassificationOutcome]:
    """The full pipeline for one actor; returns the classified profile and
    the outcome whose audit record explains it."""
    profile, _ = profile_actor(actor_id, items, lex, model, policy, **profile_kwargs)
    outcome = classify_actor(profile, model, policy, lex)
    profile = replace(profile, classification=outcome.effective_level)
    return profile, outcome


def explain(
    actor_id: str,
    items: Sequence[ContentItem],
    lex: Lexicon,
    model: WeightModel,
    policy: PolicyConfig,
    **profile_kwargs: Any,
) -> AuditRecord:
    _, outcome = classify_and_explain(
        actor_id, items, lex, model, policy, **profile_kwargs
    )
    return outcome.audit


def profile_payload(
    profile: ActorProfile, outcome: Optional[ClassificationOutcome] = None
) -> dict[str, Any]:
    """The canonical JSON-facing view of a profile.

    Used verbatim by both the CLI and the HTTP service so the two outputs
    are byte-identical.
    """
    payload: dict[str, Any] = {
        "actor_id": profile.actor_id,
        "window_start": format_timestamp(profile.window[0]),
        "window_end": format_timestamp(profile.window[1]),
        "half_life_days": profile.half_life_days,
        "level_evidence": list(profile.level_evidence),
        "level_distribution": list(profile.level_distribution),
        "type_memberships": {
            t.value: profile.type_memberships[t]
            for t in IDEOLOGY_TYPES
            if t in profile.type_memberships
        },
        "member_types": [t.value for t in profile.member_types],
        "confidence": profile.confidence,
        "n_items": profile.n_items,
        "serial_dehumanization": profile.serial_dehumanization,
        "dehumanization": (
            profile.dehumanization.to_dict() if profile.dehumanization else None
        ),
        "classification": (
            int(profile.classification) if profile.classification is not None else None
        ),
        "classification_name": (
            profile.classification.label if profile.classification is not None else None
        ),
        "trend": profile.trend.value,
        "versions": {
            "lexicon": profile.lexicon_version,
            "model": profile.model_version,
            "policy": profile.policy_version,
        },
    }
    if outcome is not None:
        payload["computed_level"] = int(outcome.computed_level)
        payload["effective_level"] = int(outcome.effective_level)
        payload["dehumanization_override"] = outcome.dehumanization_override
    return payload


def holistic_payload(
    actor_id: str,
    items: Sequence[ContentItem],
    lex: Lexicon,
    model: WeightModel,
    policy: PolicyConfig,
) -> dict[str, Any]:
    scored = score_corpus(
        [item for item in items if item.actor_id == actor_id], lex, model, policy
    )
    grid = holistic_profile([score for _, score in scored], lex, actor_id=actor_id)
    return {
        "actor_id": actor_id,
        "types": [t.value for t in IDEOLOGY_TYPES],
        "grid": [list(row) for row in grid.grid],
        "general": list(grid.general),
    }


class VersionUnresolvable(KeyError):
    """An audit record references a lexicon/model/policy version that the
    store cannot produce."""


def replay_audit(store: Any, record: Mapping[str, Any]) -> AuditRecord:
    """Re-run the pipeline on a stored audit record's inputs and versions.

    The record is replayable by contract: the returned record serializes
    byte-identically to the stored one. Raises :class:`VersionUnresolvable`
    when a referenced version cannot be materialized from the store (the
    bundled starter lexicon and the built-in default model/policy resolve
    without being stored).
    """
    from .canonical import parse_timestamp
    from .policy import default_policy
    from .scoring import default_model
    from .taxonomy import starter_lexicon

    versions = record["versions"]

    lex = store.active_lexicon()
    if lex.version != versions["lexicon"]:
        lex = starter_lexicon()
        if lex.version != versions["lexicon"]:
            raise VersionUnresolvable(f"lexicon {versions['lexicon']!r}")

    model = store.get_model(versions["model"])
    if model is None:
        model = default_model()
        if model.version != versions["model"]:
            raise VersionUnresolvable(f"model {versions['model']!r}")

    policy = store.get_policy(versions["policy"])
    if policy is None:
        policy = default_policy()
        if policy.version != versions["policy"]:
            raise VersionUnresolvable(f"policy {versions['policy']!r}")

    window = (
        parse_timestamp(record["window_start"]),
        parse_timestamp(record["window_end"]),
    )
    _, outcome = classify_and_explain(
        record["actor_id"],
        store.items(record["actor_id"]),
        lex,
        model,
        policy,
        window=window,
    )
    return outcome.audit


def what_if(
    items_by_actor: Mapping[str, Sequence[ContentItem]],
    lex: Lexicon,
    model: WeightModel,
    active_policy: PolicyConfig,
    candidate_policy: PolicyConfig,
    **profile_kwargs: Any,
) -> dict[str, Any]:
    """Preview reclassification under a candidate policy. Pure computation:
    nothing here persists or mutates anything."""
    active_table = apply_policy(active_policy, lex)
    candidate_table = apply_policy(candidate_policy, lex)

    changed_cues = []
    for cue in lex.cues:
        before_w = model.cue_weight(cue.id, cue.base_weight) * active_table.get(cue.id)
        after_w = model.cue_weight(cue.id, cue.base_weight) * candidate_table.get(cue.id)
        if before_w != after_w:
            changed_cues.append(
                {
                    "cue_id": cue.id,
                    "effective_weight_before": before_w,
                    "effective_weight_after": after_w,
                }
            )

    actor_diffs = []
    for actor_id in sorted(items_by_actor):
        items = items_by_actor[actor_id]
        _, before = classify_and_explain(
            actor_id, items, lex, model, active_policy, **profile_kwargs
        )
        _, after = classify_and_explain(
            actor_id, items, lex, model, candidate_policy, **profile_kwargs
        )
        actor_diffs.append(
            {
                "actor_id": actor_id,
                "computed_level_before": int(before.computed_level),
                "computed_level_after": int(after.computed_level),
                "effective_level_before": int(before.effective_level),
                "effective_level_after": int(after.effective_level),
                "changed": before.effective_level != after.effective_level
                or before.computed_level != after.computed_level,
            }
        )

    return {
        "candidate_policy_version": candidate_policy.version,
        "active_policy_version": active_policy.version,
        "changed_cues": changed_cues,
        "suppression_events": [s.to_dict() for s in candidate_table.suppressions],
        "actors": actor_diffs,
    }
