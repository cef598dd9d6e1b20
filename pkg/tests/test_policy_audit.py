from __future__ import annotations

import json
import random

import pytest

from dmet.canonical import canonical_json
from dmet.pipeline import classify_and_explain, explain
from dmet.policy import (
    CueMultiplier,
    Exemption,
    ExemptionScope,
    MissingReason,
    PolicyConfig,
    apply_policy,
    default_policy,
    load_policy,
    policy_to_dict,
    policy_to_json,
)
from dmet.scoring import WeightModel, default_model, score_content
from dmet.taxonomy import Level

from .conftest import make_item, ts
from .test_scoring import four_level_lexicon, hit, policy_with


class TestPolicyValidation:
    def test_multiplier_without_reason_rejected(self):
        with pytest.raises(MissingReason):
            PolicyConfig(
                region="AU",
                version="p1",
                author="x",
                rationale="r",
                cue_multipliers={"c": CueMultiplier(0.5, "  ")},
            )

    def test_neutral_multiplier_needs_no_reason(self):
        PolicyConfig(
            region="AU",
            version="p1",
            author="x",
            rationale="r",
            cue_multipliers={"c": CueMultiplier(1.0, "")},
        )

    def test_empty_rationale_rejected(self):
        with pytest.raises(MissingReason):
            PolicyConfig(region="AU", version="p1", author="x", rationale="")

    def test_exemption_without_reason_rejected(self):
        with pytest.raises(MissingReason):
            PolicyConfig(
                region="AU",
                version="p1",
                author="x",
                rationale="r",
                exemptions=(
                    Exemption(
                        actor_id="a",
                        scope=ExemptionScope.STATE_ACTOR,
                        reason="",
                        granted_by="ops",
                        granted_at=ts(1),
                    ),
                ),
            )

    def test_negative_multiplier_rejected(self):
        with pytest.raises(ValueError):
            PolicyConfig(
                region="AU",
                version="p1",
                author="x",
                rationale="r",
                cue_multipliers={"c": CueMultiplier(-0.1, "why")},
            )

    def test_load_rejects_missing_reason(self):
        doc = {
            "version": "p2",
            "rationale": "tuning",
            "author": "x",
            "cue_multipliers": {"c": {"multiplier": 0.3}},
        }
        with pytest.raises(MissingReason):
            load_policy(doc)

    def test_roundtrip(self):
        policy = policy_with(
            {"a": (0.3, "locally mainstream"), "b": (2.0, "regionally deviant")},
            floor=False,
            thresholds_override=(1.0, 2.0, 3.0),
        )
        again = load_policy(policy_to_dict(policy))
        assert policy_to_json(again) == policy_to_json(policy)


class TestApplyPolicy:
    def test_defaults_identity(self):
        lex = four_level_lexicon()
        table = apply_policy(default_policy(), lex)
        assert all(table.get(c.id) == 1.0 for c in lex.cues)
        assert table.suppressions == ()

    def test_non_dehumanization_downweigh_passes(self):
        lex = four_level_lexicon()
        table = apply_policy(policy_with({"c0": (0.3, "mainstream here")}), lex)
        assert table.get("c0") == 0.3
        assert table.suppressions == ()

    def test_dehumanization_floor_forces_one_and_records(self):
        lex = four_level_lexicon()
        table = apply_policy(policy_with({"c2": (0.0, "pressure to allow")}), lex)
        assert table.get("c2") == 1.0
        (event,) = table.suppressions
        assert event.cue_id == "c2" and event.requested_multiplier == 0.0

    def test_floor_off_allows_downweigh(self):
        lex = four_level_lexicon()
        table = apply_policy(
            policy_with({"c2": (0.2, "regional judgment")}, floor=False), lex
        )
        assert table.get("c2") == 0.2
        assert table.suppressions == ()

    def test_floor_lets_upweigh_through(self):
        lex = four_level_lexicon()
        table = apply_policy(policy_with({"c2": (1.5, "priority harm")}), lex)
        assert table.get("c2") == 1.5
        assert table.suppressions == ()

    def test_floor_dominance_never_below_calibrated(self):
        rng = random.Random(89)
        lex = four_level_lexicon()
        model = default_model()
        for _ in range(50):
            m = round(rng.uniform(0, 0.99), 3)
            policy = policy_with({"c2": (m, "attempt")}, floor=True)
            score = score_content([hit("c2")], model, policy, lex)
            fired = next(fc for fc in score.fired_cues if fc.cue_id == "c2")
            calibrated = model.cue_weight("c2", lex.cue("c2").base_weight)
            assert fired.effective_weight >= calibrated


class TestAuditRecords:
    def corpus(self):
        return [
            make_item("m1", "always never we", day=1),
            make_item("m2", "vermin always", day=2),
            make_item("m3", "we oppose always", day=3),
        ]

    def test_level_zero_record_has_no_overrides(self, model, policy):
        lex = four_level_lexicon()
        record = explain("actor", [make_item("m0", "hello there", day=1)], lex, model, policy)
        doc = record.to_dict()
        assert doc["computed_level"] == 0
        assert doc["effective_level"] == 0
        assert doc["exemption"] is None
        assert not doc["dehumanization_override"]

    def test_state_actor_exemption_shows_both_levels(self, model):
        lex = four_level_lexicon()
        policy = PolicyConfig(
            region="GLOBAL",
            version="p-state",
            author="ops",
            rationale="state speech handled out of band",
            serial_N=2,
            serial_D=2,
            exemptions=(
                Exemption(
                    actor_id="minister",
                    scope=ExemptionScope.STATE_ACTOR,
                    reason="sitting government official",
                    granted_by="policy-team",
                    granted_at=ts(1),
                    effective_level_override=Level.PARTISANSHIP,
                ),
            ),
        )
        items = [
            make_item("s1", "vermin in our midst", day=1, actor_id="minister"),
            make_item("s2", "these vermin again", day=2, actor_id="minister"),
        ]
        record = explain("minister", items, lex, model, policy)
        doc = record.to_dict()
        assert doc["computed_level"] == 2
        assert doc["dehumanization"]["serial"] is True
        assert doc["effective_level"] == 0
        assert doc["exemption"]["scope"] == "StateActor"
        assert doc["exemption"]["reason"]

    def test_replay_is_byte_identical(self, model, policy):
        lex = four_level_lexicon()
        one = explain("actor", self.corpus(), lex, model, policy).canonical()
        two = explain("actor", self.corpus(), lex, model, policy).canonical()
        assert one == two

    def test_canonical_serialization_sorted_keys(self, model, policy):
        lex = four_level_lexicon()
        record = explain("actor", self.corpus(), lex, model, policy)
        text = record.canonical()
        parsed = json.loads(text)
        assert canonical_json(parsed) == text
        assert list(parsed.keys()) == sorted(parsed.keys())

    def test_fired_cues_carry_raw_and_effective_weights(self, model):
        lex = four_level_lexicon()
        policy = policy_with({"c1": (0.5, "tolerated rhetoric")})
        _, outcome = classify_and_explain("actor", self.corpus(), lex, model, policy)
        by_id = {fc.cue_id: fc for fc in outcome.audit.fired_cues}
        assert by_id["c1"].raw_weight == 1.0
        assert by_id["c1"].multiplier == 0.5
        assert by_id["c1"].effective_weight == 0.5
        assert by_id["c1"].adjustment_reason == "tolerated rhetoric"

    def test_no_silent_policy_effects(self, model):
        # Every divergence between raw and effective weight carries a reason.
        lex = four_level_lexicon()
        policy = policy_with(
            {"c0": (0.4, "mainstream identification"), "c2": (0.0, "attempted")}
        )
        _, outcome = classify_and_explain("actor", self.corpus(), lex, model, policy)
        for fc in outcome.audit.fired_cues:
            if fc.effective_weight != fc.raw_weight:
                assert fc.adjustment_reason
        assert any(s.cue_id == "c2" for s in outcome.audit.suppression_events)

    def test_regional_downweigh_reclassifies(self, model):
        # Fringe-leaning rhetoric classifies L1 nationally; a regional
        # policy that downweighs those cues with reasons yields L0.
        lex = four_level_lexicon()
        items = [
            make_item("r1", "always never always we", day=1, actor_id="party"),
            make_item("r2", "never always we oppose", day=2, actor_id="party"),
        ]
        national = default_policy()
        _, nat = classify_and_explain("party", items, lex, model, national)
        assert nat.computed_level is Level.FRINGE
        regional = policy_with({"c1": (0.1, "locally mainstream political talk")})
        _, reg = classify_and_explain("party", items, lex, model, regional)
        assert reg.computed_level is Level.PARTISANSHIP
        by_id = {fc.cue_id: fc for fc in reg.audit.fired_cues}
        assert by_id["c1"].adjustment_reason == "locally mainstream political talk"
