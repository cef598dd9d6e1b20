"""Filesystem-backed corpus store.

Desk-scale persistence with no database dependency: content items and
audit records are canonical JSON lines, lexicons/policies/models are one
JSON document per version. Everything round-trips exactly. Ingest is
idempotent by content id; audits are append-only by design (there is no
mutation API for them at all).
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterable, Optional, Union

from .audit import AuditRecord
from .canonical import canonical_json
from .matcher import ContentItem
from .policy import PolicyConfig, load_policy, policy_to_dict
from .profiler import Actor, ActorKind
from .scoring import WeightModel
from .taxonomy import Lexicon, lexicon_to_dict, load_lexicon, starter_lexicon

STORE_ENV_VAR = "DMET_STORE"


@dataclass(frozen=True)
class IngestReport:
    new: int
    duplicate: int
    rejected: int
    diagnostics: tuple[tuple[int, str], ...]  # (line number, reason)

    def to_dict(self) -> dict:
        return {
            "new": self.new,
            "duplicate": self.duplicate,
            "rejected": self.rejected,
            "diagnostics": [
                {"line": line, "reason": reason} for line, reason in self.diagnostics
            ],
        }


def store_root_from_env(default: str = "dmet-store") -> Path:
    return Path(os.environ.get(STORE_ENV_VAR, default))


class CorpusStore:
    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        for sub in ("lexicons", "policies", "models"):
            (self.root / sub).mkdir(exist_ok=True)
        self._items: dict[str, ContentItem] = {}
        self._actors: dict[str, Actor] = {}
        self._load()

    # -- paths ---------------------------------------------------------

    @property
    def items_path(self) -> Path:
        return self.root / "items.jsonl"

    @property
    def actors_path(self) -> Path:
        return self.root / "actors.jsonl"

    @property
    def audits_path(self) -> Path:
        return self.root / "audits.jsonl"

    # -- loading -------------------------------------------------------

    def _load(self) -> None:
        if self.items_path.exists():
            with open(self.items_path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        item = ContentItem.from_dict(json.loads(line))
                        self._items[item.id] = item
        if self.actors_path.exists():
            with open(self.actors_path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        raw = json.loads(line)
                        actor = Actor(
                            id=raw["id"],
                            kind=ActorKind(raw.get("kind", "Individual")),
                            display_name=raw.get("display_name", raw["id"]),
                            region=raw.get("region", "GLOBAL"),
                            parent_id=raw.get("parent_id"),
                        )
                        self._actors[actor.id] = actor

    # -- items ---------------------------------------------------------

    def ingest(self, path: Union[str, Path]) -> IngestReport:
        """Ingest a JSON-lines file of content items.

        Lines that fail to parse are reported with their line number and
        reason; they never abort the rest of the file. Re-ingesting a file
        counts every already-present id as a duplicate and writes nothing.
        """
        new = duplicate = rejected = 0
        diagnostics: list[tuple[int, str]] = []
        accepted: list[ContentItem] = []
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    item = ContentItem.from_dict(json.loads(line))
                except Exception as exc:
                    rejected += 1
                    diagnostics.append((line_no, str(exc)))
                    continue
                if item.id in self._items:
                    duplicate += 1
                    continue
                self._items[item.id] = item
                accepted.append(item)
                new += 1

        if accepted:
            with open(self.items_path, "a", encoding="utf-8") as fh:
                for item in accepted:
                    fh.write(canonical_json(item.to_dict()) + "\n")
            for item in accepted:
                if item.actor_id not in self._actors:
                    self.put_actor(
                        Actor(
                            id=item.actor_id,
                            kind=ActorKind.INDIVIDUAL,
                            display_name=item.actor_id,
                            region=item.region,
                        )
                    )
        return IngestReport(new, duplicate, rejected, tuple(diagnostics))

    def items(
        self,
        actor_id: Optional[str] = None,
        start: Optional[datetime] = None,
        end: Optional[datetime] = None,
    ) -> list[ContentItem]:
        out = [
            item
            for item in self._items.values()
            if (actor_id is None or item.actor_id == actor_id)
            and (start is None or item.timestamp >= start)
            and (end is None or item.timestamp < end)
        ]
        out.sort(key=lambda i: (i.timestamp, i.id))
        return out

    def get_item(self, item_id: str) -> Optional[ContentItem]:
        return self._items.get(item_id)

    # -- actors --------------------------------------------------------

    def put_actor(self, actor: Actor) -> None:
        self._actors[actor.id] = actor
        with open(self.actors_path, "w", encoding="utf-8") as fh:
            for a in sorted(self._actors.values(), key=lambda a: a.id):
                fh.write(
                    canonical_json(
                        {
                            "id": a.id,
                            "kind": a.kind.value,
                            "display_name": a.display_name,
                            "region": a.region,
                            "parent_id": a.parent_id,
                        }
                    )
                    + "\n"
                )

    def actors(self) -> list[Actor]:
        return sorted(self._actors.values(), key=lambda a: a.id)

    def get_actor(self, actor_id: str) -> Optional[Actor]:
        return self._actors.get(actor_id)

    def regions(self) -> list[str]:
        return sorted({a.region for a in self._actors.values()})

    # -- audits (append-only) -------------------------------------------

    def append_audit(self, record: AuditRecord) -> None:
        with open(self.audits_path, "a", encoding="utf-8") as fh:
            fh.write(record.canonical() + "\n")

    def audits(self, actor_id: Optional[str] = None) -> list[dict]:
        if not self.audits_path.exists():
            return []
        out = []
        with open(self.audits_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                raw = json.loads(line)
                if actor_id is None or raw.get("actor_id") == actor_id:
                    out.append(raw)
        return out

    # -- versioned documents --------------------------------------------

    def save_lexicon(self, lex: Lexicon) -> None:
        path = self.root / "lexicons" / f"{lex.version}.json"
        path.write_text(canonical_json(lexicon_to_dict(lex)), encoding="utf-8")

    def active_lexicon(self) -> Lexicon:
        """Latest stored lexicon by version string, else the bundled starter."""
        versions = sorted(p.stem for p in (self.root / "lexicons").glob("*.json"))
        if not versions:
            return starter_lexicon()
        return load_lexicon((self.root / "lexicons" / f"{versions[-1]}.json"))

    def save_policy(self, policy: PolicyConfig) -> Path:
        path = self.root / "policies" / f"{policy.version}.json"
        path.write_text(canonical_json(policy_to_dict(policy)), encoding="utf-8")
        return path

    def policy_versions(self) -> list[str]:
        return sorted(p.stem for p in (self.root / "policies").glob("*.json"))

    def get_policy(self, version: str) -> Optional[PolicyConfig]:
        path = self.root / "policies" / f"{version}.json"
        if not path.exists():
            return None
        return load_policy(path)

    def active_policy(self) -> Optional[PolicyConfig]:
        versions = self.policy_versions()
        return self.get_policy(versions[-1]) if versions else None

    def save_model(self, model: WeightModel) -> None:
        path = self.root / "models" / f"{model.version}.json"
        path.write_text(canonical_json(model.to_dict()), encoding="utf-8")

    def get_model(self, version: str) -> Optional[WeightModel]:
        path = self.root / "models" / f"{version}.json"
        if not path.exists():
            return None
        return WeightModel.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def active_model(self) -> Optional[WeightModel]:
        versions = sorted(p.stem for p in (self.root / "models").glob("*.json"))
        return self.get_model(versions[-1]) if versions else None

    # -- integrity -------------------------------------------------------

    def state_hash(self) -> str:
        """SHA-256 over every stored byte; used to prove what-if previews
        leave the store untouched."""
        digest = hashlib.sha256()
        for path in sorted(self.root.rglob("*")):
            if path.is_file():
                digest.update(str(path.relative_to(self.root)).encode("utf-8"))
                digest.update(path.read_bytes())
        return digest.hexdigest()
