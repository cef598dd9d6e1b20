"""Walkthrough: calibrating cue weights and level cut-offs from labels.

Generates a synthetic labeled set whose cue firing correlates with the
gold level, fits logistic weights at the violent-extremism boundary,
derives all three cut-offs by ROC analysis, and prints item statistics.
"""

import random

from dmet import Level, calibrate, item_stats
from dmet.calibration import LabeledExample

rng = random.Random(2024)

examples = []
for i in range(80):
    gold = rng.randint(0, 3)
    features = {
        "identification": rng.uniform(0.5, 3.0),
        "dogmatism": rng.uniform(0, 1.0) + (1.5 if gold >= 1 else 0.0),
        "dehumanization": rng.uniform(0, 0.4) + (2.0 if gold >= 2 else 0.0),
        "incitement": rng.uniform(0, 0.2) + (2.5 if gold >= 3 else 0.0),
    }
    examples.append(LabeledExample(features=features, gold_level=Level(gold), actor_id=f"actor-{i}"))

result = calibrate(examples, boundary=Level.VIOLENT_EXTREMISM, l2=0.1)

print("=== fitted weights (boundary: at-or-above ViolentExtremism) ===")
for cue_id, w in sorted(result.fit.weights.items()):
    print(f"{cue_id:16s} {w:+.4f}")
print(f"converged: {result.fit.converged} after {result.fit.iterations} steps")

print("\n=== calibrated cut-offs (isotonic-clipped) ===")
t1, t2, t3 = result.model.level_thresholds
print(f"theta1={t1:.4f}  theta2={t2:.4f}  theta3={t3:.4f}")
print("per-boundary ROC AUCs:", [round(a, 4) for a in result.threshold_calibration.aucs])
if result.diagnostics:
    print("diagnostics:", *result.diagnostics, sep="\n  ")

print("\n=== item statistics at the same boundary ===")
print(f"{'cue':16s} {'difficulty':>10s} {'discrimination':>15s}")
for stat in item_stats(examples, Level.VIOLENT_EXTREMISM):
    flag = " (degenerate)" if stat.degenerate else ""
    print(f"{stat.cue_id:16s} {stat.difficulty:10.3f} {stat.discrimination:15.3f}{flag}")
