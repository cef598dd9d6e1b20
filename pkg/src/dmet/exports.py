"""CSV exports backing the standard profile and tracking charts.

Every exported number is computed by the same pipeline functions the CLI
and service use, and floats are written with full round-trip precision, so
a chart can always be traced back to the exact stored inputs.
"""

from __future__ import annotations

import csv
import io
from enum import Enum
from typing import Optional, Sequence

from . import config
from .pipeline import classify_and_explain, holistic_payload
from .policy import PolicyConfig
from .scoring import UNIFORM_DISTRIBUTION, WeightModel
from .store import CorpusStore
from .taxonomy import IDEOLOGY_TYPES, Lexicon
from .temporal import build_series, series_to_csv


class ExportKind(str, Enum):
    LEVEL_PREVALENCE = "LevelPrevalence"
    TIME_SERIES = "TimeSeries"
    HOLISTIC_GRID = "HolisticGrid"
    REGIONAL_BAROMETER = "RegionalBarometer"


class UnknownSelector(KeyError):
    pass


def _require_actor(store: CorpusStore, actor_id: Optional[str]) -> str:
    if not actor_id:
        raise UnknownSelector("this export kind requires an actor selector")
    if store.get_actor(actor_id) is None:
        raise UnknownSelector(f"unknown actor: {actor_id!r}")
    return actor_id


def export_plot_data(
    store: CorpusStore,
    kind: ExportKind,
    lex: Lexicon,
    model: WeightModel,
    policy: PolicyConfig,
    *,
    actor_id: Optional[str] = None,
    regions: Optional[Sequence[str]] = None,
    cadence_days: int = 7,
    window_days: Optional[int] = None,
) -> str:
    kind = ExportKind(kind)
    if kind is ExportKind.LEVEL_PREVALENCE:
        actor = _require_actor(store, actor_id)
        profile, _ = classify_and_explain(
            actor, store.items(actor), lex, model, policy, window_days=window_days
        )
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["level", "share"])
        for level, share in enumerate(profile.level_distribution):
            writer.writerow([level, repr(share)])
        return buf.getvalue()

    if kind is ExportKind.TIME_SERIES:
        actor = _require_actor(store, actor_id)
        series = build_series(store.items(actor), lex, model, policy, cadence_days)
        return series_to_csv(series)

    if kind is ExportKind.HOLISTIC_GRID:
        actor = _require_actor(store, actor_id)
        payload = holistic_payload(actor, store.items(actor), lex, model, policy)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["level", "type", "value"])
        for level in range(4):
            for t_index, type_name in enumerate(payload["types"]):
                writer.writerow([level, type_name, repr(payload["grid"][level][t_index])])
            writer.writerow([level, "General", repr(payload["general"][level])])
        return buf.getvalue()

    if kind is ExportKind.REGIONAL_BAROMETER:
        wanted = list(regions) if regions else store.regions()
        known = set(store.regions())
        for region in wanted:
            if region not in known:
                raise UnknownSelector(f"unknown region: {region!r}")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["region", "p0", "p1", "p2", "p3", "n_actors"])
        for region in wanted:
            members = [a for a in store.actors() if a.region == region]
            sums = [0.0, 0.0, 0.0, 0.0]
            for actor in members:
                profile, _ = classify_and_explain(
                    actor.id,
                    store.items(actor.id),
                    lex,
                    model,
                    policy,
                    window_days=window_days,
                )
                for level in range(4):
                    sums[level] += profile.level_evidence[level]
            total = sum(sums)
            dist = (
                [v / total for v in sums] if total > 0 else list(UNIFORM_DISTRIBUTION)
            )
            writer.writerow(
                [region] + [repr(v) for v in dist] + [len(members)]
            )
        return buf.getvalue()

    raise UnknownSelector(f"unknown export kind: {kind!r}")
