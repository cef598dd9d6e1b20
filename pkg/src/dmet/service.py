"""HTTP API consumed by the review console.

Single source of truth: every payload is built by the same pipeline
functions the CLI uses and serialized with the same canonical JSON, so
the two surfaces are byte-identical for the same entity. Each response
embeds the lexicon/model/policy versions it was computed under.

The what-if endpoint is strictly side-effect-free; only the policy-commit
endpoint persists anything, and it refuses configurations whose
adjustments or exemptions lack reasons.
"""

from __future__ import annotations

from typing import Any, Optional

from fastapi import Body, FastAPI, HTTPException, Query, Response

from .canonical import canonical_json
from .exports import ExportKind, UnknownSelector, export_plot_data
from .pipeline import (
    classify_and_explain,
    holistic_payload,
    profile_payload,
    what_if,
)
from .policy import MissingReason, default_policy, load_policy, policy_to_dict
from .scoring import default_model
from .store import CorpusStore
from .taxonomy import lexicon_to_dict
from .temporal import build_series, detect_trends, series_to_csv


def _json(payload: Any, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(payload),
        media_type="application/json",
        status_code=status_code,
    )


def create_app(store: CorpusStore) -> FastAPI:
    app = FastAPI(title="dmet", docs_url=None, redoc_url=None)

    def context():
        lex = store.active_lexicon()
        model = store.active_model() or default_model()
        policy = store.active_policy() or default_policy()
        return lex, model, policy

    def versions(lex, model, policy) -> dict[str, str]:
        return {
            "lexicon": lex.version,
            "model": model.version,
            "policy": policy.version,
        }

    def require_actor(actor_id: str) -> None:
        if store.get_actor(actor_id) is None:
            raise HTTPException(status_code=404, detail=f"unknown actor: {actor_id}")

    @app.get("/api/v1/actors")
    def list_actors() -> Response:
        lex, model, policy = context()
        return _json(
            {
                "versions": versions(lex, model, policy),
                "actors": [
                    {
                        "id": a.id,
                        "kind": a.kind.value,
                        "display_name": a.display_name,
                        "region": a.region,
                        "parent_id": a.parent_id,
                    }
                    for a in store.actors()
                ],
            }
        )

    @app.get("/api/v1/actors/{actor_id}/profile")
    def actor_profile(
        actor_id: str, window_days: Optional[int] = Query(default=None)
    ) -> Response:
        require_actor(actor_id)
        lex, model, policy = context()
        prof, outcome = classify_and_explain(
            actor_id, store.items(actor_id), lex, model, policy, window_days=window_days
        )
        return _json(profile_payload(prof, outcome))

    @app.get("/api/v1/actors/{actor_id}/series")
    def actor_series(
        actor_id: str, cadence_days: int = Query(default=7, ge=1)
    ) -> Response:
        require_actor(actor_id)
        lex, model, policy = context()
        series = build_series(
            store.items(actor_id), lex, model, policy, cadence_days
        )
        points = []
        for (start, end), prof in series.points:
            points.append(profile_payload(prof))
        return _json(
            {
                "versions": versions(lex, model, policy),
                "actor_id": actor_id,
                "cadence_days": cadence_days,
                "points": points,
                "alerts": [a.to_dict() for a in detect_trends(series)],
                "csv": series_to_csv(series),
            }
        )

    @app.get("/api/v1/actors/{actor_id}/holistic")
    def actor_holistic(actor_id: str) -> Response:
        require_actor(actor_id)
        lex, model, policy = context()
        payload = holistic_payload(actor_id, store.items(actor_id), lex, model, policy)
        payload["versions"] = versions(lex, model, policy)
        return _json(payload)

    @app.get("/api/v1/actors/{actor_id}/audits")
    def actor_audits(actor_id: str) -> Response:
        require_actor(actor_id)
        lex, model, policy = context()
        return _json(
            {
                "versions": versions(lex, model, policy),
                "actor_id": actor_id,
                "records": store.audits(actor_id),
            }
        )

    @app.get("/api/v1/lexicon")
    def get_lexicon() -> Response:
        lex, model, policy = context()
        doc = lexicon_to_dict(lex)
        doc["versions"] = versions(lex, model, policy)
        return _json(doc)

    @app.get("/api/v1/policies")
    def list_policies() -> Response:
        lex, model, policy = context()
        return _json(
            {
                "versions": versions(lex, model, policy),
                "policy_versions": store.policy_versions(),
                "active": policy.version,
            }
        )

    @app.get("/api/v1/policies/{version}")
    def get_policy(version: str) -> Response:
        stored = store.get_policy(version)
        if stored is None:
            raise HTTPException(status_code=404, detail=f"unknown policy: {version}")
        return _json(policy_to_dict(stored))

    @app.get("/api/v1/exports/{kind}")
    def get_export(
        kind: str,
        actor: Optional[str] = Query(default=None),
        cadence_days: int = Query(default=7, ge=1),
    ) -> Response:
        lex, model, policy = context()
        try:
            doc = export_plot_data(
                store,
                ExportKind(kind),
                lex,
                model,
                policy,
                actor_id=actor,
                cadence_days=cadence_days,
            )
        except (UnknownSelector, ValueError) as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return Response(content=doc, media_type="text/csv")

    @app.post("/api/v1/whatif")
    def whatif(body: dict = Body(...)) -> Response:
        lex, model, active = context()
        raw_policy = body.get("policy")
        if not isinstance(raw_policy, dict):
            raise HTTPException(status_code=422, detail="body must include a policy")
        try:
            candidate = load_policy(raw_policy)
        except (MissingReason, ValueError, KeyError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        actor_ids = body.get("actors") or [a.id for a in store.actors()]
        items_by_actor = {aid: store.items(aid) for aid in actor_ids}
        preview = what_if(items_by_actor, lex, model, active, candidate)
        preview["versions"] = versions(lex, model, active)
        return _json(preview)

    @app.post("/api/v1/policies")
    def commit_policy(body: dict = Body(...)) -> Response:
        try:
            policy = load_policy(body)
        except (MissingReason, ValueError, KeyError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        if not policy.author.strip():
            raise HTTPException(status_code=422, detail="policy author is required")
        if policy.version in store.policy_versions():
            raise HTTPException(
                status_code=409, detail=f"policy version {policy.version!r} exists"
            )
        store.save_policy(policy)
        lex, model, active = context()
        return _json(
            {
                "committed": policy.version,
                "versions": versions(lex, model, active),
            },
            status_code=201,
        )

    return app
