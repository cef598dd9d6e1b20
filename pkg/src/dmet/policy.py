"""Regional norm configuration, exemptions, and the rules for applying them.

A policy is the audited surface through which operators adjust the engine
to local norms: per-cue weight multipliers, serial-dehumanization
thresholds, optional level cut-off overrides, and actor exemptions. Every
departure from neutral defaults must carry a reason; configurations
without reasons are rejected at load time, not flagged later.

The dehumanization floor is the one rule that overrides operator intent:
while it is on, no multiplier below 1.0 can reduce a dehumanization cue's
effective weight. The attempt is still recorded as a suppression event, so
the audit trail shows both what was asked and what was done.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from . import config
from .canonical import canonical_json, format_timestamp, parse_timestamp
from .taxonomy import Level, Lexicon


class ExemptionScope(str, Enum):
    STATE_ACTOR = "StateActor"
    SELF_DETERMINATION = "SelfDetermination"
    ARMED_CONFLICT_ICRC = "ArmedConflictICRC"
    JOURNALISTIC = "Journalistic"
    OTHER = "Other"


class MissingReason(ValueError):
    """A non-default policy entry lacks its mandatory reason."""


@dataclass(frozen=True)
class Exemption:
    """A reasoned override of an actor's effective level.

    The computed level is never altered; an exemption changes only the
    effective level, and both always appear in the audit record.
    """

    actor_id: str
    scope: ExemptionScope
    reason: str
    granted_by: str
    granted_at: datetime
    effective_level_override: Optional[Level] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "actor_id": self.actor_id,
            "scope": self.scope.value,
            "reason": self.reason,
            "granted_by": self.granted_by,
            "granted_at": format_timestamp(self.granted_at),
            "effective_level_override": (
                self.effective_level_override.label
                if self.effective_level_override is not None
                else None
            ),
        }


@dataclass(frozen=True)
class CueMultiplier:
    value: float
    reason: str


@dataclass(frozen=True)
class PolicyConfig:
    region: str
    version: str
    author: str
    rationale: str
    cue_multipliers: Mapping[str, CueMultiplier] = field(default_factory=dict)
    dehumanization_floor: bool = True
    serial_N: int = config.SERIAL_N
    serial_D: int = config.SERIAL_D
    exemptions: tuple[Exemption, ...] = ()
    thresholds_override: Optional[tuple[float, float, float]] = None

    def __post_init__(self) -> None:
        if not self.rationale.strip():
            raise MissingReason(f"policy {self.version!r} has an empty rationale")
        for cue_id, mult in self.cue_multipliers.items():
            if mult.value < 0:
                raise ValueError(
                    f"policy {self.version!r}: negative multiplier for {cue_id!r}"
                )
            if mult.value != 1.0 and not mult.reason.strip():
                raise MissingReason(
                    f"policy {self.version!r}: multiplier {mult.value} on "
                    f"{cue_id!r} has no reason"
                )
        for ex in self.exemptions:
            if not ex.reason.strip():
                raise MissingReason(
                    f"policy {self.version!r}: exemption for {ex.actor_id!r} "
                    "has no reason"
                )
        if self.thresholds_override is not None:
            t1, t2, t3 = self.thresholds_override
            if not (t1 <= t2 <= t3):
                raise ValueError(
                    f"policy {self.version!r}: thresholds_override must be ordered"
                )

    def exemption_for(self, actor_id: str) -> Optional[Exemption]:
        for ex in self.exemptions:
            if ex.actor_id == actor_id:
                return ex
        return None


@dataclass(frozen=True)
class SuppressionEvent:
    """A requested downweigh of a dehumanization cue blocked by the floor."""

    cue_id: str
    requested_multiplier: float
    reason: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "cue_id": self.cue_id,
            "requested_multiplier": self.requested_multiplier,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class MultiplierTable:
    """Effective per-cue multipliers after floor enforcement."""

    multipliers: Mapping[str, float]
    suppressions: tuple[SuppressionEvent, ...]

    def get(self, cue_id: str) -> float:
        return self.multipliers.get(cue_id, 1.0)

    def suppressed_ids(self) -> frozenset[str]:
        return frozenset(s.cue_id for s in self.suppressions)


def apply_policy(policy: PolicyConfig, lex: Lexicon) -> MultiplierTable:
    """Resolve the policy's multipliers against a lexicon.

    Downweighs (< 1.0) of dehumanization-form cues are forced back to 1.0
    while the floor is on; each forced entry becomes a suppression event.
    Upweighs pass through: the floor prevents reduction only.
    """
    table: dict[str, float] = {}
    suppressions: list[SuppressionEvent] = []
    for cue_id, mult in policy.cue_multipliers.items():
        cue = lex.get(cue_id)
        dehumanizing = cue is not None and cue.dehumanization_form is not None
        if (
            dehumanizing
            and policy.dehumanization_floor
            and mult.value < 1.0
        ):
            table[cue_id] = 1.0
            suppressions.append(
                SuppressionEvent(
                    cue_id=cue_id,
                    requested_multiplier=mult.value,
                    reason=mult.reason,
                )
            )
        else:
            table[cue_id] = mult.value
    suppressions.sort(key=lambda s: s.cue_id)
    return MultiplierTable(multipliers=table, suppressions=tuple(suppressions))


def default_policy(region: str = "GLOBAL") -> PolicyConfig:
    return PolicyConfig(
        region=region,
        version="default-1",
        author="system",
        rationale="Neutral defaults: no adjustments, floor on.",
    )


def policy_to_dict(policy: PolicyConfig) -> dict[str, Any]:
    return {
        "schema_version": "1",
        "region": policy.region,
        "version": policy.version,
        "author": policy.author,
        "rationale": policy.rationale,
        "cue_multipliers": {
            cue_id: {"multiplier": m.value, "reason": m.reason}
            for cue_id, m in sorted(policy.cue_multipliers.items())
        },
        "dehumanization_floor": policy.dehumanization_floor,
        "serial_N": policy.serial_N,
        "serial_D": policy.serial_D,
        "exemptions": [ex.to_dict() for ex in policy.exemptions],
        "thresholds_override": (
            list(policy.thresholds_override)
            if policy.thresholds_override is not None
            else None
        ),
    }


def policy_to_json(policy: PolicyConfig) -> str:
    return canonical_json(policy_to_dict(policy))


def load_policy(source: Union[str, Path, Mapping[str, Any]]) -> PolicyConfig:
    """Parse a policy document; raises MissingReason/ValueError on bad config."""
    if isinstance(source, Mapping):
        doc: Any = source
    else:
        if isinstance(source, Path) or (
            isinstance(source, str)
            and source.lstrip()[:1] not in ("{", "[")
            and Path(source).exists()
        ):
            text = Path(source).read_text(encoding="utf-8")
        else:
            text = str(source)
        doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ValueError("policy document must be a JSON object")

    multipliers = {}
    for cue_id, raw in (doc.get("cue_multipliers") or {}).items():
        if isinstance(raw, dict):
            multipliers[str(cue_id)] = CueMultiplier(
                value=float(raw.get("multiplier", 1.0)),
                reason=str(raw.get("reason", "")),
            )
        else:
            # Bare numbers are accepted only for the neutral value.
            multipliers[str(cue_id)] = CueMultiplier(value=float(raw), reason="")

    exemptions = []
    for raw in doc.get("exemptions") or []:
        override = raw.get("effective_level_override")
        exemptions.append(
            Exemption(
                actor_id=str(raw["actor_id"]),
                scope=ExemptionScope(raw.get("scope", "Other")),
                reason=str(raw.get("reason", "")),
                granted_by=str(raw.get("granted_by", "")),
                granted_at=parse_timestamp(raw["granted_at"]),
                effective_level_override=(
                    Level.parse(override) if override is not None else None
                ),
            )
        )

    thresholds = doc.get("thresholds_override")
    return PolicyConfig(
        region=str(doc.get("region", "GLOBAL")),
        version=str(doc["version"]),
        author=str(doc.get("author", "")),
        rationale=str(doc.get("rationale", "")),
        cue_multipliers=multipliers,
        dehumanization_floor=bool(doc.get("dehumanization_floor", True)),
        serial_N=int(doc.get("serial_N", config.SERIAL_N)),
        serial_D=int(doc.get("serial_D", config.SERIAL_D)),
        exemptions=tuple(exemptions),
        thresholds_override=(
            tuple(float(t) for t in thresholds) if thresholds is not None else None
        ),
    )
