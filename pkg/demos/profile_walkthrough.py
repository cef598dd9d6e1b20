"""Walkthrough: from raw text to a classified, fully explained actor profile.

Scans a handful of posts with the starter lexicon, scores them, aggregates
them into a profile, classifies it, and prints the audit record that
justifies the outcome.
"""

from datetime import datetime, timezone

from dmet import (
    ContentItem,
    classify_and_explain,
    cues_in_effect,
    default_model,
    default_policy,
    scan_content,
    starter_lexicon,
)


def day(n: int) -> datetime:
    return datetime(2024, 3, n, 12, tzinfo=timezone.utc)


posts = [
    ContentItem("p1", "demo-group", day(1), "GLOBAL",
                "We are right and they are wrong; rally with us and vote."),
    ContentItem("p2", "demo-group", day(2), "GLOBAL",
                "The godless are wicked; never compromise, always resist."),
    ContentItem("p3", "demo-group", day(3), "GLOBAL",
                "Purity above all. Shun the traitor and cut ties with the fallen."),
]

lex = starter_lexicon()
model = default_model()
policy = default_policy()

print("=== cue hits per post ===")
for post in posts:
    hits = scan_content(post, cues_in_effect(lex, post.region, post.timestamp))
    summary = ", ".join(f"{h.cue_id} x{h.count}" for h in hits) or "(none)"
    print(f"{post.id}: {summary}")

profile, outcome = classify_and_explain("demo-group", posts, lex, model, policy)

print("\n=== profile ===")
print("level distribution:", [round(p, 3) for p in profile.level_distribution])
print("confidence:        ", round(profile.confidence, 3))
print("computed level:    ", outcome.computed_level.label)

print("\n=== audit record (canonical JSON) ===")
print(outcome.audit.canonical())
