"""The classification matrix and the cue lexicon that operationalizes it.

The matrix crosses four ordinal levels of ideological engagement with five
ideology types. Content never maps to a cell directly; it fires *cues* --
declarative indicator patterns, each tied to exactly one level and one cue
dimension -- and downstream scoring turns fired cues into evidence.

A loaded :class:`Lexicon` is immutable. Updating cues means loading a new
versioned lexicon, never mutating the old one, so concurrent readers and
recorded audits stay coherent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum, IntEnum
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Union

from .canonical import canonical_json, format_timestamp, parse_timestamp

SCHEMA_VERSION = "1"


class Level(IntEnum):
    """Ordinal level of ideological engagement, least to most severe."""

    PARTISANSHIP = 0
    FRINGE = 1
    VIOLENT_EXTREMISM = 2
    TERRORISM = 3

    @property
    def label(self) -> str:
        return _LEVEL_LABELS[self]

    @classmethod
    def parse(cls, value: Union[int, str, "Level"]) -> "Level":
        if isinstance(value, Level):
            return value
        if isinstance(value, int):
            return cls(value)
        for level, label in _LEVEL_LABELS.items():
            if value == label:
                return level
        raise ValueError(f"unknown level: {value!r}")


_LEVEL_LABELS = {
    Level.PARTISANSHIP: "Partisanship",
    Level.FRINGE: "Fringe",
    Level.VIOLENT_EXTREMISM: "ViolentExtremism",
    Level.TERRORISM: "Terrorism",
}

LEVELS = tuple(Level)


class IdeologyType(str, Enum):
    """Ideological arena of an actor or a cue. Actors may hold several."""

    RIGHT_WING = "RightWing"
    LEFT_WING = "LeftWing"
    RELIGIOUS = "Religious"
    SEPARATIST = "Separatist"
    SINGLE_ISSUE = "SingleIssue"


IDEOLOGY_TYPES = tuple(IdeologyType)


class CueDimension(str, Enum):
    """What kind of signal a cue observes."""

    COGNITIVE = "Cognitive"
    BEHAVIORAL = "Behavioral"
    GROUP_DYNAMIC = "GroupDynamic"


CUE_DIMENSIONS = tuple(CueDimension)


class DehumanizationForm(str, Enum):
    """The two recognized forms of dehumanizing content.

    ``Language``: material casting a protected class as animal, disease,
    object, or supernatural threat. ``Discourse``: sustained curation of
    content implying the class pollutes society, lacks human feeling, acts
    in concert to harm, or deserves collective punishment.
    """

    LANGUAGE = "Language"
    DISCOURSE = "Discourse"


class MatcherKind(str, Enum):
    PHRASE = "Phrase"
    WORD_LIST = "WordList"
    HOSTILE_VERB_NEAR_IDENTITY_TERM = "HostileVerbNearIdentityTerm"


@dataclass(frozen=True)
class MatcherSpec:
    """One pattern family inside a cue.

    ``Phrase`` matches any of its entries as a contiguous token sequence,
    ``WordList`` matches single tokens, and the co-occurrence kind fires
    when a hostile verb and an identity term fall inside a shared window
    of ``window`` tokens.
    """

    kind: MatcherKind
    phrases: tuple[str, ...] = ()
    verbs: tuple[str, ...] = ()
    identity_terms: tuple[str, ...] = ()
    window: int = 0

    def to_payload(self) -> Any:
        if self.kind is MatcherKind.HOSTILE_VERB_NEAR_IDENTITY_TERM:
            return {
                "verbs": list(self.verbs),
                "identity_terms": list(self.identity_terms),
                "window": self.window,
            }
        return list(self.phrases)


@dataclass(frozen=True)
class CueDefinition:
    """One indicator: the atom the matrix is operationalized with.

    Every cue instantiates exactly one (level, dimension) cell. Type
    affinities are optional; a cue with none is type-agnostic and counts
    toward every ideology equally little (it feeds no type evidence).
    """

    id: str
    dimension: CueDimension
    level_affinity: Level
    matchers: tuple[MatcherSpec, ...]
    base_weight: float
    type_affinities: frozenset[IdeologyType] = frozenset()
    dehumanization_form: Optional[DehumanizationForm] = None
    region_validity: Optional[frozenset[str]] = None
    valid_from: Optional[datetime] = None
    valid_to: Optional[datetime] = None
    description: str = ""
    requires_human_review: bool = False

    def in_effect(self, region: str, at: datetime) -> bool:
        """True when neither the regional nor the temporal constraint excludes
        the cue; absent constraints always pass."""
        if self.region_validity is not None and region not in self.region_validity:
            return False
        if self.valid_from is not None and at < self.valid_from:
            return False
        if self.valid_to is not None and at >= self.valid_to:
            return False
        return True


@dataclass(frozen=True)
class Lexicon:
    version: str
    region_default: str
    created_at: datetime
    cues: tuple[CueDefinition, ...]
    protected_characteristics: tuple[str, ...] = ()
    _by_id: Mapping[str, CueDefinition] = field(
        init=False, repr=False, compare=False, default=None
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_id", {cue.id: cue for cue in self.cues})

    def cue(self, cue_id: str) -> CueDefinition:
        return self._by_id[cue_id]

    def get(self, cue_id: str) -> Optional[CueDefinition]:
        return self._by_id.get(cue_id)

    def dehumanization_cue_ids(self) -> frozenset[str]:
        return frozenset(
            cue.id for cue in self.cues if cue.dehumanization_form is not None
        )


@dataclass(frozen=True)
class Diagnostic:
    """A validation finding; never fatal by itself."""

    message: str
    cue_id: Optional[str] = None

    def __str__(self) -> str:
        return f"[{self.cue_id}] {self.message}" if self.cue_id else self.message


class LexiconError(ValueError):
    """Base class for lexicon load failures."""


class SchemaError(LexiconError):
    """The document does not parse against the published lexicon schema."""


class DuplicateCueId(LexiconError):
    def __init__(self, cue_id: str):
        super().__init__(f"duplicate cue id: {cue_id!r}")
        self.cue_id = cue_id


class EmptyLevel(LexiconError):
    def __init__(self, level: Level):
        super().__init__(f"no cues for level {int(level)} ({level.label})")
        self.level = level


class InvalidWeight(LexiconError):
    def __init__(self, cue_id: str, weight: float):
        super().__init__(f"cue {cue_id!r} has negative base_weight {weight}")
        self.cue_id = cue_id
        self.weight = weight


def _parse_matcher(raw: Any, cue_id: str) -> MatcherSpec:
    if not isinstance(raw, dict) or "kind" not in raw:
        raise SchemaError(f"cue {cue_id!r}: matcher must be an object with a 'kind'")
    try:
        kind = MatcherKind(raw["kind"])
    except ValueError:
        raise SchemaError(f"cue {cue_id!r}: unknown matcher kind {raw['kind']!r}")
    payload = raw.get("payload")
    if kind is MatcherKind.HOSTILE_VERB_NEAR_IDENTITY_TERM:
        if not isinstance(payload, dict):
            raise SchemaError(
                f"cue {cue_id!r}: co-occurrence payload must be an object"
            )
        try:
            verbs = tuple(str(v) for v in payload["verbs"])
            identity_terms = tuple(str(t) for t in payload["identity_terms"])
            window = int(payload["window"])
        except (KeyError, TypeError, ValueError):
            raise SchemaError(
                f"cue {cue_id!r}: co-occurrence payload needs verbs, "
                "identity_terms, and window"
            )
        return MatcherSpec(
            kind=kind, verbs=verbs, identity_terms=identity_terms, window=window
        )
    if not isinstance(payload, list):
        raise SchemaError(f"cue {cue_id!r}: {kind.value} payload must be a list")
    return MatcherSpec(kind=kind, phrases=tuple(str(p) for p in payload))


def _parse_cue(raw: Any) -> CueDefinition:
    if not isinstance(raw, dict):
        raise SchemaError("cue entries must be objects")
    try:
        cue_id = str(raw["id"])
        dimension = CueDimension(raw["dimension"])
        level = Level.parse(raw["level_affinity"])
        base_weight = float(raw["base_weight"])
        matchers = tuple(_parse_matcher(m, cue_id) for m in raw["matchers"])
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed cue entry: {exc}") from exc
    dehum = raw.get("dehumanization_form")
    region_validity = raw.get("region_validity")
    return CueDefinition(
        id=cue_id,
        dimension=dimension,
        level_affinity=level,
        matchers=matchers,
        base_weight=base_weight,
        type_affinities=frozenset(
            IdeologyType(t) for t in raw.get("type_affinities", [])
        ),
        dehumanization_form=DehumanizationForm(dehum) if dehum else None,
        region_validity=(
            frozenset(str(r) for r in region_validity)
            if region_validity is not None
            else None
        ),
        valid_from=(
            parse_timestamp(raw["valid_from"]) if raw.get("valid_from") else None
        ),
        valid_to=parse_timestamp(raw["valid_to"]) if raw.get("valid_to") else None,
        description=str(raw.get("description", "")),
        requires_human_review=bool(raw.get("requires_human_review", False)),
    )


def load_lexicon(source: Union[str, Path, Mapping[str, Any]]) -> Lexicon:
    """Parse and validate a lexicon document.

    ``source`` may be a parsed mapping, a JSON string, or a path to a JSON
    file. Raises :class:`SchemaError` for malformed documents or broken
    invariants, and the more specific :class:`DuplicateCueId`,
    :class:`EmptyLevel`, or :class:`InvalidWeight` where they apply.
    """
    if isinstance(source, Mapping):
        doc: Any = source
    else:
        text = None
        if isinstance(source, Path):
            text = source.read_text(encoding="utf-8")
        elif isinstance(source, str):
            candidate = Path(source)
            is_doc = source.lstrip()[:1] in ("{", "[")
            if not is_doc and candidate.exists():
                text = candidate.read_text(encoding="utf-8")
            else:
                text = source
        else:
            raise SchemaError(f"unsupported lexicon source: {type(source)!r}")
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"lexicon is not valid JSON: {exc}") from exc

    if not isinstance(doc, dict):
        raise SchemaError("lexicon document must be a JSON object")
    if str(doc.get("schema_version")) != SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported schema_version {doc.get('schema_version')!r}; "
            f"expected {SCHEMA_VERSION!r}"
        )
    try:
        version = str(doc["version"])
        region_default = str(doc["region_default"])
        created_at = parse_timestamp(doc["created_at"])
        raw_cues = doc["cues"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"missing or malformed lexicon field: {exc}") from exc
    if not isinstance(raw_cues, list):
        raise SchemaError("'cues' must be a list")

    cues = []
    seen: set[str] = set()
    for raw in raw_cues:
        cue = _parse_cue(raw)
        if cue.id in seen:
            raise DuplicateCueId(cue.id)
        seen.add(cue.id)
        if cue.base_weight < 0:
            raise InvalidWeight(cue.id, cue.base_weight)
        cues.append(cue)

    covered = {cue.level_affinity for cue in cues}
    for level in LEVELS:
        if level not in covered:
            raise EmptyLevel(level)

    lexicon = Lexicon(
        version=version,
        region_default=region_default,
        created_at=created_at,
        cues=tuple(cues),
        protected_characteristics=tuple(
            str(p) for p in doc.get("protected_characteristics", [])
        ),
    )
    problems = validate_lexicon(lexicon)
    if problems:
        raise SchemaError(
            "lexicon violates invariants: " + "; ".join(str(p) for p in problems)
        )
    return lexicon


def validate_lexicon(lex: Lexicon) -> list[Diagnostic]:
    """Check all lexicon invariants; returns diagnostics instead of raising.

    Useful for linting lexicons assembled in memory, where a hard failure
    would hide the full list of problems.
    """
    out: list[Diagnostic] = []
    seen: set[str] = set()
    for cue in lex.cues:
        if cue.id in seen:
            out.append(Diagnostic("duplicate cue id", cue.id))
        seen.add(cue.id)
        if cue.base_weight < 0:
            out.append(Diagnostic(f"negative base_weight {cue.base_weight}", cue.id))
        if cue.valid_from is not None and cue.valid_to is not None:
            if cue.valid_from >= cue.valid_to:
                out.append(Diagnostic("valid_from is not before valid_to", cue.id))
        if not cue.matchers:
            out.append(Diagnostic("cue has no matchers", cue.id))
        for matcher in cue.matchers:
            if matcher.kind is MatcherKind.HOSTILE_VERB_NEAR_IDENTITY_TERM:
                if matcher.window < 1:
                    out.append(Diagnostic("co-occurrence window must be >= 1", cue.id))
                if not matcher.verbs or not matcher.identity_terms:
                    out.append(
                        Diagnostic("co-occurrence matcher needs both word lists", cue.id)
                    )
                empties = [w for w in matcher.verbs + matcher.identity_terms if not w.strip()]
            else:
                if not matcher.phrases:
                    out.append(Diagnostic("matcher payload is empty", cue.id))
                empties = [p for p in matcher.phrases if not p.strip()]
                if matcher.kind is MatcherKind.WORD_LIST:
                    multiword = [p for p in matcher.phrases if len(p.split()) > 1]
                    if multiword:
                        out.append(
                            Diagnostic(
                                "WordList entries should be single tokens: "
                                + ", ".join(repr(m) for m in multiword),
                                cue.id,
                            )
                        )
            if empties:
                out.append(Diagnostic("matcher contains empty payload strings", cue.id))

    covered = {cue.level_affinity for cue in lex.cues}
    for level in LEVELS:
        if level not in covered:
            out.append(Diagnostic(f"no cues for level {int(level)} ({level.label})"))

    has_dehum = any(cue.dehumanization_form is not None for cue in lex.cues)
    if has_dehum and not lex.protected_characteristics:
        out.append(
            Diagnostic(
                "lexicon defines dehumanization cues but lists no "
                "protected characteristics"
            )
        )
    return out


def cues_in_effect(lex: Lexicon, region: str, at: datetime) -> list[CueDefinition]:
    """The cues applicable to content from ``region`` at instant ``at``.

    A pure, order-preserving filter over ``lex.cues``; idempotent.
    """
    return [cue for cue in lex.cues if cue.in_effect(region, at)]


def cue_to_dict(cue: CueDefinition) -> dict[str, Any]:
    return {
        "id": cue.id,
        "dimension": cue.dimension.value,
        "level_affinity": cue.level_affinity.label,
        "type_affinities": sorted(t.value for t in cue.type_affinities),
        "matchers": [
            {"kind": m.kind.value, "payload": m.to_payload()} for m in cue.matchers
        ],
        "base_weight": cue.base_weight,
        "dehumanization_form": (
            cue.dehumanization_form.value if cue.dehumanization_form else None
        ),
        "region_validity": (
            sorted(cue.region_validity) if cue.region_validity is not None else None
        ),
        "valid_from": format_timestamp(cue.valid_from) if cue.valid_from else None,
        "valid_to": format_timestamp(cue.valid_to) if cue.valid_to else None,
        "description": cue.description,
        "requires_human_review": cue.requires_human_review,
    }


def lexicon_to_dict(lex: Lexicon) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "version": lex.version,
        "region_default": lex.region_default,
        "created_at": format_timestamp(lex.created_at),
        "protected_characteristics": list(lex.protected_characteristics),
        "cues": [cue_to_dict(cue) for cue in lex.cues],
    }


def lexicon_to_json(lex: Lexicon) -> str:
    return canonical_json(lexicon_to_dict(lex))


def starter_lexicon() -> Lexicon:
    """The bundled starter lexicon.

    Seeded with illustrative indicator vocabulary for every matrix cell.
    It exists so the engine is runnable and testable out of the box; it is
    NOT an operational moderation lexicon and must be replaced with a
    regionally calibrated one before any real use.
    """
    data = resources.files("dmet").joinpath("data/starter_lexicon.json")
    return load_lexicon(json.loads(data.read_text(encoding="utf-8")))


def starter_lexicon_document() -> dict[str, Any]:
    data = resources.files("dmet").joinpath("data/starter_lexicon.json")
    return json.loads(data.read_text(encoding="utf-8"))
