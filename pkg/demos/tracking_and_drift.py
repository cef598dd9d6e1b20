"""Walkthrough: tracking an actor over time and catching escalation.

Builds a cadenced profile series for an actor whose rhetoric drifts from
fringe dogmatism into dehumanizing language, prints the per-window CSV,
and shows the escalation alert the drift produces.
"""

from datetime import datetime, timezone

from dmet import ContentItem, build_series, default_model, default_policy, detect_trends, starter_lexicon
from dmet.temporal import series_to_csv


def day(n: int) -> datetime:
    return datetime(2024, 3, n, 9, tzinfo=timezone.utc)


early = [
    ContentItem(f"e{n}", "drifting-group", day(n), "GLOBAL",
                "They always lie and never listen; the villain is obvious.")
    for n in range(1, 8)
]
late = [
    ContentItem(f"l{n}", "drifting-group", day(n), "GLOBAL",
                "These vermin are an infestation; they are an existential threat.")
    for n in range(8, 15)
]

series = build_series(early + late, starter_lexicon(), default_model(), default_policy(), cadence_days=7)

print("=== per-window series (CSV) ===")
print(series_to_csv(series))

print("=== alerts ===")
for alert in detect_trends(series, min_confidence=0.1):
    print(f"{alert.kind.value}: level {int(alert.from_level)} -> {int(alert.to_level)} at {alert.at.isoformat()}")

latest = series.points[-1][1]
print("\nlatest window trend:", latest.trend.value)
print("serial dehumanization:", latest.serial_dehumanization)
