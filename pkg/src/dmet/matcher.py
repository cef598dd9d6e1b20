"""Deterministic scanning of content text against cue patterns.

Matching is defined over tokens, not characters: text is tokenized once,
cue payloads are tokenized the same way, and a multi-pattern automaton
(Aho-Corasick over token sequences) finds every occurrence in one pass.
Per cue, occurrences are reduced to leftmost non-overlapping matches so
that counts are reproducible regardless of how patterns overlap.

Tokenization is fixed, not configurable: audit records must be replayable
across deployments, so there is exactly one way to read a text.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Any, Iterable, Optional, Sequence

from .canonical import format_timestamp, parse_timestamp
from .taxonomy import CueDefinition, MatcherKind

_TOKEN_EXTRA = {"'", "’"}  # ASCII apostrophe and right single quote


class SourceKind(str, Enum):
    POST = "Post"
    COMMENT = "Comment"
    EXTERNAL_PAGE = "ExternalPage"
    MANIFESTO = "Manifesto"
    OTHER = "Other"


@dataclass(frozen=True)
class ContentItem:
    """A timestamped, region-tagged text unit attributed to an actor."""

    id: str
    actor_id: str
    timestamp: datetime
    region: str
    text: str
    source_kind: SourceKind = SourceKind.POST

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "actor_id": self.actor_id,
            "timestamp": format_timestamp(self.timestamp),
            "region": self.region,
            "text": self.text,
            "source_kind": self.source_kind.value,
        }

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "ContentItem":
        return cls(
            id=str(raw["id"]),
            actor_id=str(raw["actor_id"]),
            timestamp=parse_timestamp(raw["timestamp"]),
            region=str(raw["region"]),
            text=str(raw["text"]),
            source_kind=SourceKind(raw.get("source_kind", "Post")),
        )


@dataclass(frozen=True)
class CueHit:
    """All matches of one cue in one text.

    Spans are half-open ``[start_token, end_token)`` pairs, non-overlapping
    and sorted; ``count`` always equals ``len(spans)``.
    """

    cue_id: str
    spans: tuple[tuple[int, int], ...]
    count: int

    @classmethod
    def from_spans(cls, cue_id: str, spans: Sequence[tuple[int, int]]) -> "CueHit":
        ordered = tuple(sorted(spans))
        return cls(cue_id=cue_id, spans=ordered, count=len(ordered))


def _is_token_char(ch: str) -> bool:
    return ch.isalpha() or ch.isdigit() or ch in _TOKEN_EXTRA


def tokenize_with_offsets(text: str) -> list[tuple[str, int, int]]:
    """Case-folded tokens with their character offsets.

    Tokens are maximal runs of letters, digits, and apostrophes; everything
    else (including hyphens) separates tokens and is discarded.
    """
    out: list[tuple[str, int, int]] = []
    start: Optional[int] = None
    for i, ch in enumerate(text):
        if _is_token_char(ch):
            if start is None:
                start = i
        elif start is not None:
            out.append((text[start:i].casefold(), start, i))
            start = None
    if start is not None:
        out.append((text[start:].casefold(), start, len(text)))
    return out


def tokenize(text: str) -> list[str]:
    return [tok for tok, _, _ in tokenize_with_offsets(text)]


class _TokenAutomaton:
    """Aho-Corasick over token sequences.

    Patterns are tuples of tokens; each carries an opaque tag. ``scan``
    reports every occurrence of every pattern as ``(start, end, tag)``.
    """

    def __init__(self, patterns: Iterable[tuple[tuple[str, ...], Any]]):
        # Node storage: children as dicts keyed by token, fail links by index.
        self._children: list[dict[str, int]] = [{}]
        self._fail: list[int] = [0]
        self._outputs: list[list[tuple[int, Any]]] = [[]]  # (pattern_len, tag)
        for pattern, tag in patterns:
            if not pattern:
                continue
            self._insert(pattern, tag)
        self._build_fail_links()

    def _insert(self, pattern: tuple[str, ...], tag: Any) -> None:
        node = 0
        for token in pattern:
            nxt = self._children[node].get(token)
            if nxt is None:
                nxt = len(self._children)
                self._children.append({})
                self._fail.append(0)
                self._outputs.append([])
                self._children[node][token] = nxt
            node = nxt
        self._outputs[node].append((len(pattern), tag))

    def _build_fail_links(self) -> None:
        queue: deque[int] = deque()
        for child in self._children[0].values():
            self._fail[child] = 0
            queue.append(child)
        while queue:
            node = queue.popleft()
            for token, child in self._children[node].items():
                fail = self._fail[node]
                while fail and token not in self._children[fail]:
                    fail = self._fail[fail]
                self._fail[child] = self._children[fail].get(token, 0)
                self._outputs[child] = (
                    self._outputs[child] + self._outputs[self._fail[child]]
                )
                queue.append(child)

    def scan(self, tokens: Sequence[str]) -> list[tuple[int, int, Any]]:
        found: list[tuple[int, int, Any]] = []
        node = 0
        for i, token in enumerate(tokens):
            while node and token not in self._children[node]:
                node = self._fail[node]
            node = self._children[node].get(token, 0)
            for length, tag in self._outputs[node]:
                found.append((i + 1 - length, i + 1, tag))
        return found


def _leftmost_nonoverlapping(
    candidates: Iterable[tuple[int, int]],
) -> list[tuple[int, int]]:
    """Greedy selection: earliest start wins; at equal start, shortest wins.

    The short-match preference keeps selections stable when longer patterns
    subsume shorter ones at the same position.
    """
    chosen: list[tuple[int, int]] = []
    last_end = 0
    for start, end in sorted(candidates):
        if start >= last_end:
            chosen.append((start, end))
            last_end = end
    return chosen


def _cooccurrence_candidates(
    verb_spans: Sequence[tuple[int, int]],
    identity_spans: Sequence[tuple[int, int]],
    window: int,
) -> list[tuple[int, int]]:
    # A verb span and an identity span co-occur when one window of `window`
    # consecutive tokens covers both; the candidate span is their union.
    out = []
    for vs, ve in verb_spans:
        for ts, te in identity_spans:
            start = min(vs, ts)
            end = max(ve, te)
            if end - start <= window:
                out.append((start, end))
    return out


class CueScanner:
    """Precompiled scanner for a fixed cue set.

    Building the automaton is the expensive part; reuse one scanner across
    a whole corpus pass. Instances are immutable after construction and
    safe to share across threads.
    """

    def __init__(self, cues: Sequence[CueDefinition]):
        self._cues = tuple(cues)
        patterns: list[tuple[tuple[str, ...], Any]] = []
        # Tags identify which bucket an occurrence belongs to:
        # (cue_id, "direct") for Phrase/WordList payloads,
        # (cue_id, idx, "verb"/"identity") for co-occurrence word lists.
        self._window_matchers: dict[str, list[int]] = {}
        for cue in self._cues:
            for m_idx, matcher in enumerate(cue.matchers):
                if matcher.kind is MatcherKind.HOSTILE_VERB_NEAR_IDENTITY_TERM:
                    self._window_matchers.setdefault(cue.id, []).append(m_idx)
                    for verb in matcher.verbs:
                        seq = tuple(tokenize(verb))
                        patterns.append((seq, (cue.id, m_idx, "verb")))
                    for term in matcher.identity_terms:
                        seq = tuple(tokenize(term))
                        patterns.append((seq, (cue.id, m_idx, "identity")))
                else:
                    for phrase in matcher.phrases:
                        seq = tuple(tokenize(phrase))
                        patterns.append((seq, (cue.id, "direct")))
        self._automaton = _TokenAutomaton(patterns)

    def scan_tokens(self, tokens: Sequence[str]) -> list[CueHit]:
        direct: dict[str, list[tuple[int, int]]] = {}
        verbs: dict[tuple[str, int], list[tuple[int, int]]] = {}
        identities: dict[tuple[str, int], list[tuple[int, int]]] = {}
        for start, end, tag in self._automaton.scan(tokens):
            if tag[1] == "direct":
                direct.setdefault(tag[0], []).append((start, end))
            elif tag[2] == "verb":
                verbs.setdefault((tag[0], tag[1]), []).append((start, end))
            else:
                identities.setdefault((tag[0], tag[1]), []).append((start, end))

        hits: list[CueHit] = []
        for cue in self._cues:
            candidates = list(direct.get(cue.id, ()))
            for m_idx in self._window_matchers.get(cue.id, ()):
                matcher = cue.matchers[m_idx]
                candidates.extend(
                    _cooccurrence_candidates(
                        verbs.get((cue.id, m_idx), ()),
                        identities.get((cue.id, m_idx), ()),
                        matcher.window,
                    )
                )
            spans = _leftmost_nonoverlapping(candidates)
            if spans:
                hits.append(CueHit.from_spans(cue.id, spans))
        hits.sort(key=lambda h: h.cue_id)
        return hits

    def scan(self, item: ContentItem) -> list[CueHit]:
        return self.scan_tokens(tokenize(item.text))


def scan_content(item: ContentItem, cues: Sequence[CueDefinition]) -> list[CueHit]:
    """One-shot scan of a single item.

    ``cues`` should be the output of ``cues_in_effect`` for the item's
    region and timestamp. For corpus passes, build a :class:`CueScanner`
    once instead.
    """
    return CueScanner(cues).scan(item)
