"""Profile tracking over time: cadenced windows, drift, and alerts.

An actor's stream is cut into contiguous windows of fixed cadence from the
first item to the last; each window gets its own profile and
classification. Empty windows are kept (uniform distribution, zero
confidence) so gaps are visible, and the trailing partial window is kept
so the newest behavior is never invisible.

Alerts fire only between consecutive windows that are both confident
enough; a classification change in a noisy window is not an alert.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from datetime import datetime, timedelta
from enum import Enum
from typing import Optional, Sequence

from . import config
from .canonical import format_timestamp
from .matcher import ContentItem
from .policy import PolicyConfig
from .profiler import (
    ActorProfile,
    Trend,
    aggregate_actor,
    classify_actor,
    is_potential_splinter,
    jensen_shannon,
)
from .scoring import (
    WeightModel,
    assess_dehumanization,
    score_corpus,
)
from .taxonomy import Level, Lexicon


class AlertKind(str, Enum):
    ESCALATION = "Escalation"
    DEESCALATION = "Deescalation"
    SPLINTER_SUSPECTED = "SplinterSuspected"


@dataclass(frozen=True)
class TrendAlert:
    actor_id: str
    kind: AlertKind
    from_level: Level
    to_level: Level
    at: datetime
    evidence: str

    def to_dict(self) -> dict:
        return {
            "actor_id": self.actor_id,
            "kind": self.kind.value,
            "from_level": int(self.from_level),
            "to_level": int(self.to_level),
            "at": format_timestamp(self.at),
            "evidence": self.evidence,
        }


@dataclass(frozen=True)
class ProfileSeries:
    actor_id: str
    points: tuple[tuple[tuple[datetime, datetime], ActorProfile], ...]
    cadence_days: int

    def profiles(self) -> list[ActorProfile]:
        return [profile for _, profile in self.points]


def window_count(first: datetime, last: datetime, cadence_days: int) -> int:
    """Windows needed to cover [first, last]; the trailing partial counts."""
    span_days = (last - first).total_seconds() / 86400.0
    return int(math.floor(span_days / cadence_days)) + 1


def build_series(
    items: Sequence[ContentItem],
    lex: Lexicon,
    model: WeightModel,
    policy: PolicyConfig,
    cadence_days: int,
    *,
    half_life_days: float = config.DEFAULT_HALF_LIFE_DAYS,
    serial_window_days: int = config.DEFAULT_SERIAL_WINDOW_DAYS,
    origin: Optional[datetime] = None,
    until: Optional[datetime] = None,
) -> ProfileSeries:
    """One classified profile per cadence window.

    Windows run from the first item to the last by default; pass ``origin``
    and/or ``until`` to pin the grid independently of the data (windows
    with no items then show up as uniform, zero-confidence profiles).
    """
    if cadence_days < 1:
        raise ValueError("cadence_days must be >= 1")
    if not items:
        return ProfileSeries(actor_id="", points=(), cadence_days=cadence_days)

    actor_id = items[0].actor_id
    scored = score_corpus(items, lex, model, policy)
    first = origin if origin is not None else min(item.timestamp for item in items)
    last = until if until is not None else max(item.timestamp for item in items)
    n_windows = window_count(first, last, cadence_days)

    points = []
    for k in range(n_windows):
        start = first + timedelta(days=k * cadence_days)
        end = first + timedelta(days=(k + 1) * cadence_days)
        in_window = [
            (item, score) for item, score in scored if start <= item.timestamp < end
        ]
        profile = aggregate_actor(
            [score for _, score in in_window],
            (start, end),
            half_life_days,
            actor_id=actor_id,
            model_version=model.version,
            policy_version=policy.version,
            lexicon_version=lex.version,
        )
        assessment = assess_dehumanization(
            in_window, serial_window_days, lex, policy
        )
        profile = replace(
            profile,
            serial_dehumanization=assessment.serial,
            dehumanization=assessment,
        )
        outcome = classify_actor(profile, model, policy, lex)
        profile = replace(profile, classification=outcome.effective_level)
        points.append(((start, end), profile))

    points = _with_latest_trend(points)
    return ProfileSeries(actor_id=actor_id, points=tuple(points), cadence_days=cadence_days)


def expected_level_slope(profiles: Sequence[ActorProfile]) -> float:
    """Least-squares slope (per window) of expected level over the last
    TREND_WINDOWS windows; for 3 equally spaced points this is (p3 - p1)/2."""
    tail = list(profiles)[-config.TREND_WINDOWS:]
    n = len(tail)
    if n < 2:
        return 0.0
    ys = [p.expected_level for p in tail]
    xs = range(n)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    return sxy / sxx if sxx else 0.0


def _with_latest_trend(points: list) -> list:
    if not points:
        return points
    slope = expected_level_slope([profile for _, profile in points])
    if slope > config.TREND_SLOPE_THRESHOLD:
        trend = Trend.RISING
    elif slope < -config.TREND_SLOPE_THRESHOLD:
        trend = Trend.FALLING
    else:
        trend = Trend.STABLE
    window, latest = points[-1]
    return points[:-1] + [(window, replace(latest, trend=trend))]


def detect_trends(
    series: ProfileSeries, min_confidence: float = config.DEFAULT_MIN_CONFIDENCE
) -> list[TrendAlert]:
    """Escalation/de-escalation alerts between confident consecutive windows."""
    alerts: list[TrendAlert] = []
    for (w_prev, prev), (w_cur, cur) in zip(series.points, series.points[1:]):
        if prev.confidence <= min_confidence or cur.confidence <= min_confidence:
            continue
        if prev.classification is None or cur.classification is None:
            continue
        if cur.classification == prev.classification:
            continue
        kind = (
            AlertKind.ESCALATION
            if cur.classification > prev.classification
            else AlertKind.DEESCALATION
        )
        alerts.append(
            TrendAlert(
                actor_id=series.actor_id,
                kind=kind,
                from_level=prev.classification,
                to_level=cur.classification,
                at=w_cur[0],
                evidence=f"{series.actor_id}@{format_timestamp(w_cur[0])}",
            )
        )
    return alerts


def detect_splinter_alerts(
    parent: ProfileSeries,
    child: ProfileSeries,
    threshold: float = config.SPLINTER_THRESHOLD,
) -> list[TrendAlert]:
    """Flag windows where a child actor's profile diverges from its parent's.

    Windows are matched by start time; only pairs present in both series
    are compared.
    """
    parent_by_start = {w[0]: p for w, p in parent.points}
    alerts: list[TrendAlert] = []
    for (start, _end), child_profile in child.points:
        parent_profile = parent_by_start.get(start)
        if parent_profile is None or child_profile.n_items == 0:
            continue
        divergence = jensen_shannon(
            parent_profile.level_distribution, child_profile.level_distribution
        )
        if is_potential_splinter(divergence, threshold):
            alerts.append(
                TrendAlert(
                    actor_id=child.actor_id,
                    kind=AlertKind.SPLINTER_SUSPECTED,
                    from_level=parent_profile.classification or Level.PARTISANSHIP,
                    to_level=child_profile.classification or Level.PARTISANSHIP,
                    at=start,
                    evidence=f"jsd={divergence:.6f} vs {parent.actor_id}",
                )
            )
    return alerts


def series_to_csv(series: ProfileSeries) -> str:
    """One row per window: window_start, p0..p3, classification, confidence."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["window_start", "p0", "p1", "p2", "p3", "classification", "confidence"]
    )
    for (start, _end), profile in series.points:
        dist = profile.level_distribution
        writer.writerow(
            [
                format_timestamp(start),
                repr(dist[0]),
                repr(dist[1]),
                repr(dist[2]),
                repr(dist[3]),
                int(profile.classification) if profile.classification is not None else "",
                repr(profile.confidence),
            ]
        )
    return buf.getvalue()
