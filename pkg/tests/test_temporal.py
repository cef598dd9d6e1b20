from __future__ import annotations

import random
from datetime import timedelta

import pytest

from dmet.canonical import canonical_json
from dmet.profiler import ActorProfile, Trend
from dmet.scoring import UNIFORM_DISTRIBUTION, default_model
from dmet.taxonomy import Level
from dmet.temporal import (
    AlertKind,
    build_series,
    detect_splinter_alerts,
    detect_trends,
    expected_level_slope,
    series_to_csv,
    window_count,
)

from .conftest import make_cue, make_item, make_lexicon, ts


def tracking_lexicon():
    # Non-dehumanizing L2 cue keeps the serial override out of these tests.
    return make_lexicon(
        [
            make_cue("t0", 0, words=["we"], weight=1.0),
            make_cue("t1", 1, words=["always", "never"], weight=1.0),
            make_cue("t2", 2, words=["silencing"], phrases=["existential threat"], weight=1.5),
            make_cue("t3", 3, words=["attack"], weight=2.0),
        ]
    )


def items_on_days(day_texts, actor_id="actor"):
    return [
        make_item(f"i{i:03d}", text, actor_id=actor_id, day=day)
        for i, (day, text) in enumerate(day_texts)
    ]


def profile_with_distribution(dist, confidence=1.0, n_items=5, classification=None):
    return ActorProfile(
        actor_id="synthetic",
        window=(ts(1), ts(2)),
        half_life_days=30.0,
        level_evidence=tuple(dist),
        level_distribution=tuple(dist),
        type_evidence={},
        type_memberships={},
        member_types=(),
        confidence=confidence,
        n_items=n_items,
        classification=classification,
    )


class TestBuildSeries:
    def test_thirty_days_cadence_seven_gives_five_windows(self, policy):
        lex = tracking_lexicon()
        items = items_on_days([(d, "we talk") for d in range(1, 31)])
        series = build_series(items, lex, default_model(), policy, 7)
        assert len(series.points) == 5  # trailing partial window included

    def test_empty_items_empty_series(self, policy):
        series = build_series([], tracking_lexicon(), default_model(), policy, 7)
        assert series.points == ()

    def test_empty_windows_are_uniform_zero_confidence(self, policy):
        lex = tracking_lexicon()
        items = items_on_days([(16, "we always"), (17, "we never"), (18, "we")])
        series = build_series(
            items,
            lex,
            default_model(),
            policy,
            7,
            origin=ts(1, hour=0),
            until=ts(28, hour=0),
        )
        assert len(series.points) == 4
        occupied = [p.n_items > 0 for _, p in series.points]
        assert occupied == [False, False, True, False]
        for idx in (0, 1, 3):
            profile = series.points[idx][1]
            assert profile.level_distribution == UNIFORM_DISTRIBUTION
            assert profile.confidence == 0.0

    def test_windows_are_contiguous_and_cadenced(self, policy):
        lex = tracking_lexicon()
        items = items_on_days([(d, "we") for d in range(1, 20)])
        series = build_series(items, lex, default_model(), policy, 5)
        for (w1, _), (w2, _) in zip(series.points, series.points[1:]):
            assert w1[1] == w2[0]
            assert (w1[1] - w1[0]) == timedelta(days=5)

    def test_window_count_arithmetic(self):
        assert window_count(ts(1), ts(1), 7) == 1
        assert window_count(ts(1), ts(8), 7) == 2  # exactly one cadence later
        assert window_count(ts(1, hour=0), ts(30, hour=0), 7) == 5


class TestTrendSlope:
    def test_closed_form_three_points(self):
        profiles = [
            profile_with_distribution((0.2, 0.8, 0, 0)),  # E = 0.8
            profile_with_distribution((0.0, 1.0, 0, 0)),  # E = 1.0
            profile_with_distribution((0.0, 0.8, 0.2, 0)),  # E = 1.2
        ]
        slope = expected_level_slope(profiles)
        assert slope == pytest.approx(0.2, rel=1e-12)
        assert slope == pytest.approx(
            (profiles[-1].expected_level - profiles[0].expected_level) / 2, rel=1e-12
        )

    def test_random_three_point_slope_matches_closed_form(self):
        rng = random.Random(41)
        for _ in range(100):
            dists = []
            for _ in range(3):
                raw = [rng.random() for _ in range(4)]
                total = sum(raw)
                dists.append(tuple(v / total for v in raw))
            profiles = [profile_with_distribution(d) for d in dists]
            expected = (profiles[2].expected_level - profiles[0].expected_level) / 2
            assert expected_level_slope(profiles) == pytest.approx(expected, abs=1e-12)

    def test_trend_labels(self, policy):
        lex = tracking_lexicon()
        rising = items_on_days(
            [(1, "we"), (2, "we")]
            + [(8, "always we"), (9, "always")]
            + [(15, "silencing always"), (16, "existential threat")]
        )
        series = build_series(rising, lex, default_model(), policy, 7)
        assert series.points[-1][1].trend is Trend.RISING

        flat = items_on_days([(d, "we talk") for d in range(1, 22)])
        series = build_series(flat, lex, default_model(), policy, 7)
        assert series.points[-1][1].trend is Trend.STABLE


class TestDetectTrends:
    def drift_items(self):
        fringe = [(d, "always never we always") for d in range(1, 8)]
        violent = [
            (d, "silencing and more silencing, an existential threat")
            for d in range(8, 15)
        ]
        return items_on_days(fringe + violent)

    def test_constant_classification_no_alerts(self, policy):
        lex = tracking_lexicon()
        items = items_on_days([(d, "always never") for d in range(1, 15)])
        series = build_series(items, lex, default_model(), policy, 7)
        assert detect_trends(series, 0.1) == []

    def test_escalation_fires_exactly_once(self, policy):
        lex = tracking_lexicon()
        series = build_series(self.drift_items(), lex, default_model(), policy, 7)
        alerts = detect_trends(series, 0.1)
        assert len(alerts) == 1
        alert = alerts[0]
        assert alert.kind is AlertKind.ESCALATION
        assert alert.from_level is Level.FRINGE
        assert alert.to_level is Level.VIOLENT_EXTREMISM

    def test_deescalation(self, policy):
        lex = tracking_lexicon()
        items = items_on_days(
            [(d, "silencing existential threat silencing") for d in range(1, 8)]
            + [(d, "we vote, we rally, we talk") for d in range(8, 15)]
        )
        series = build_series(items, lex, default_model(), policy, 7)
        alerts = detect_trends(series, 0.1)
        assert [a.kind for a in alerts] == [AlertKind.DEESCALATION]

    def test_low_confidence_windows_never_alert(self, policy):
        lex = tracking_lexicon()
        # One item per window: confidence 1-exp(-0.1) ~= 0.095 < 0.1.
        items = items_on_days([(1, "always never"), (9, "silencing existential threat")])
        series = build_series(items, lex, default_model(), policy, 7)
        assert all(p.confidence <= 0.1 for _, p in series.points)
        assert detect_trends(series, 0.1) == []

    def test_alerts_reproducible_byte_identical(self, policy):
        lex = tracking_lexicon()
        runs = []
        for _ in range(2):
            series = build_series(self.drift_items(), lex, default_model(), policy, 7)
            alerts = detect_trends(series, 0.1)
            runs.append(canonical_json([a.to_dict() for a in alerts]))
        assert runs[0] == runs[1]


class TestSplinterAlerts:
    def test_divergent_child_flagged(self, policy):
        lex = tracking_lexicon()
        parent_items = items_on_days([(d, "we vote") for d in range(1, 15)], "movement")
        child_items = items_on_days(
            [(d, "attack the gates attack") for d in range(1, 15)], "cell"
        )
        parent = build_series(parent_items, lex, default_model(), policy, 7)
        child = build_series(child_items, lex, default_model(), policy, 7)
        alerts = detect_splinter_alerts(parent, child)
        assert alerts and all(a.kind is AlertKind.SPLINTER_SUSPECTED for a in alerts)

    def test_aligned_child_not_flagged(self, policy):
        lex = tracking_lexicon()
        parent_items = items_on_days([(d, "we vote") for d in range(1, 15)], "movement")
        child_items = items_on_days([(d, "we rally") for d in range(1, 15)], "cell")
        parent = build_series(parent_items, lex, default_model(), policy, 7)
        child = build_series(child_items, lex, default_model(), policy, 7)
        assert detect_splinter_alerts(parent, child) == []


class TestSeriesCsv:
    def test_shape_and_headers(self, policy):
        lex = tracking_lexicon()
        items = items_on_days([(d, "we") for d in range(1, 31)])
        series = build_series(items, lex, default_model(), policy, 7)
        csv_doc = series_to_csv(series)
        lines = csv_doc.strip().split("\n")
        assert lines[0] == "window_start,p0,p1,p2,p3,classification,confidence"
        assert len(lines) == 1 + 5
