"""Regenerate the console's test fixtures from the real service.

The console's snapshot tests assert that rendered values equal service
payloads; those payloads are captured here, from the actual FastAPI app
running over the fixture corpus, never written by hand.

Run from the repository root:

    python3 frontend/scripts/capture_fixtures.py
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from dmet.service import create_app
from dmet.store import CorpusStore

REPO = Path(__file__).resolve().parents[2]
OUT = REPO / "frontend" / "src" / "__fixtures__"


def main() -> None:
    root = Path(tempfile.mkdtemp()) / "store"
    store = CorpusStore(root)
    store.ingest(REPO / "tests" / "fixtures" / "corpus.jsonl")
    client = TestClient(create_app(store))
    OUT.mkdir(parents=True, exist_ok=True)

    def save(name: str, resp) -> None:
        assert resp.status_code == 200, (name, resp.status_code, resp.text)
        (OUT / name).write_text(resp.text, encoding="utf-8")
        print(f"{name}: {len(resp.text)} bytes")

    save("actors.json", client.get("/api/v1/actors"))
    save(
        "profile_westboro.json",
        client.get("/api/v1/actors/westboro-style-church/profile"),
    )
    save(
        "profile_party.json",
        client.get("/api/v1/actors/one-nation-style-party/profile"),
    )
    save(
        "series_base.json",
        client.get(
            "/api/v1/actors/base-style-network/series", params={"cadence_days": 2}
        ),
    )
    save(
        "holistic_militia.json",
        client.get("/api/v1/actors/oathkeeper-style-militia/holistic"),
    )
    save("policies.json", client.get("/api/v1/policies"))

    regional = json.loads(
        (REPO / "tests" / "fixtures" / "policy_regional_qld.json").read_text("utf-8")
    )
    save("whatif_regional.json", client.post("/api/v1/whatif", json={"policy": regional}))

    dehum = dict(regional)
    dehum["version"] = "draft-dehum-attempt"
    dehum["cue_multipliers"] = dict(regional["cue_multipliers"])
    dehum["cue_multipliers"]["l2-beh-dehumanizing-coded"] = {
        "multiplier": 0.0,
        "reason": "operator request",
    }
    save("whatif_dehum_suppressed.json", client.post("/api/v1/whatif", json={"policy": dehum}))

    zero = {
        "schema_version": "1",
        "region": "GLOBAL",
        "version": "zero-delta-draft",
        "author": "analyst",
        "rationale": "no changes, baseline check",
        "cue_multipliers": {},
        "dehumanization_floor": True,
        "serial_N": 3,
        "serial_D": 2,
        "exemptions": [],
        "thresholds_override": None,
    }
    save("whatif_zero_delta.json", client.post("/api/v1/whatif", json={"policy": zero}))

    # One stored audit record, for the audit-link view.
    from dmet.pipeline import classify_and_explain
    from dmet.policy import default_policy
    from dmet.scoring import default_model

    _, outcome = classify_and_explain(
        "oathkeeper-style-militia",
        store.items("oathkeeper-style-militia"),
        store.active_lexicon(),
        default_model(),
        default_policy(),
    )
    store.append_audit(outcome.audit)
    save(
        "audits_militia.json",
        client.get("/api/v1/actors/oathkeeper-style-militia/audits"),
    )


if __name__ == "__main__":
    main()
