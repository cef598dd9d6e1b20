"""Canonical serialization helpers.

Every document the engine emits (profiles, audit records, policies, API
responses) goes through :func:`canonical_json` so that identical inputs
always produce byte-identical output. Records are diffable and replayable
only if serialization is a pure function of the data.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import Any


def canonical_json(obj: Any) -> str:
    """Serialize to canonical JSON: sorted keys, compact separators, UTF-8."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def format_timestamp(ts: datetime) -> str:
    """UTC instant as ``YYYY-MM-DDTHH:MM:SS[.ffffff]Z``."""
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    ts = ts.astimezone(timezone.utc)
    base = ts.strftime("%Y-%m-%dT%H:%M:%S")
    if ts.microsecond:
        base += f".{ts.microsecond:06d}"
    return base + "Z"


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO-8601 instant; naive values are taken as UTC.

    Accepts the trailing-``Z`` form on Python 3.10, where
    ``datetime.fromisoformat`` does not.
    """
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)
