from __future__ import annotations

from datetime import datetime, timezone

import pytest

from dmet.matcher import ContentItem
from dmet.policy import default_policy
from dmet.scoring import default_model
from dmet.taxonomy import (
    CueDefinition,
    CueDimension,
    DehumanizationForm,
    IdeologyType,
    Level,
    Lexicon,
    MatcherKind,
    MatcherSpec,
    starter_lexicon,
)


def ts(day: int, hour: int = 12, month: int = 3, year: int = 2024) -> datetime:
    return datetime(year, month, day, hour, tzinfo=timezone.utc)


def make_cue(
    cue_id: str,
    level: int,
    words: list[str] | None = None,
    phrases: list[str] | None = None,
    dimension: CueDimension = CueDimension.COGNITIVE,
    weight: float = 1.0,
    types: set[IdeologyType] | None = None,
    dehumanization: DehumanizationForm | None = None,
    **kwargs,
) -> CueDefinition:
    matchers = []
    if words:
        matchers.append(MatcherSpec(kind=MatcherKind.WORD_LIST, phrases=tuple(words)))
    if phrases:
        matchers.append(MatcherSpec(kind=MatcherKind.PHRASE, phrases=tuple(phrases)))
    return CueDefinition(
        id=cue_id,
        dimension=dimension,
        level_affinity=Level(level),
        matchers=tuple(matchers),
        base_weight=weight,
        type_affinities=frozenset(types or ()),
        dehumanization_form=dehumanization,
        **kwargs,
    )


def make_lexicon(cues, version: str = "test-1") -> Lexicon:
    return Lexicon(
        version=version,
        region_default="GLOBAL",
        created_at=ts(1, month=1),
        cues=tuple(cues),
        protected_characteristics=("religion", "ethnicity"),
    )


def make_item(
    item_id: str,
    text: str,
    actor_id: str = "actor",
    day: int = 1,
    hour: int = 12,
    region: str = "GLOBAL",
) -> ContentItem:
    return ContentItem(
        id=item_id,
        actor_id=actor_id,
        timestamp=ts(day, hour),
        region=region,
        text=text,
    )


@pytest.fixture(scope="session")
def starter():
    return starter_lexicon()


@pytest.fixture()
def model():
    return default_model()


@pytest.fixture()
def policy():
    return default_policy()
