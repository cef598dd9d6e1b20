"""Fitting cue weights and level cut-offs from labeled data.

The fit is a plain L2-regularized logistic regression, written out
explicitly (loss, gradient, backtracking line search) rather than wrapped
around a library optimizer: calibration artifacts feed moderation
decisions, so the arithmetic must be auditable and bit-reproducible.
Zero initialization plus a deterministic line search means the same data
always yields the same weights.

Cut-offs come from ROC analysis on the fitted evidence scale, one binary
task per level boundary (at-or-above L1/L2/L3), then isotonic clipping
repairs any ordering violation upward, the conservative direction.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .scoring import WeightModel
from .taxonomy import Level

ARMIJO_C = 1e-4
BACKTRACK_FACTOR = 0.5
MAX_BACKTRACKS = 60


class DegenerateLabels(ValueError):
    """The binary task has only one class present."""


class NonFiniteFeature(ValueError):
    """A feature value is NaN or infinite."""


@dataclass(frozen=True)
class LabeledExample:
    """One training row: recency-weighted hit counts per cue, plus the
    expert-assigned gold level."""

    features: Mapping[str, float]
    gold_level: Level
    actor_id: str = ""
    region: str = ""


def _design_matrix(
    examples: Sequence[LabeledExample], cue_ids: Optional[Sequence[str]] = None
) -> tuple[np.ndarray, tuple[str, ...]]:
    if cue_ids is None:
        ids: set[str] = set()
        for ex in examples:
            ids.update(ex.features)
        cue_ids = sorted(ids)
    cols = {cue_id: j for j, cue_id in enumerate(cue_ids)}
    X = np.zeros((len(examples), len(cue_ids)))
    for i, ex in enumerate(examples):
        for cue_id, value in ex.features.items():
            if cue_id in cols:
                X[i, cols[cue_id]] = value
    if not np.all(np.isfinite(X)):
        raise NonFiniteFeature("feature matrix contains NaN or infinite values")
    if np.any(X < 0):
        raise ValueError("feature values must be nonnegative")
    return X, tuple(cue_ids)


def _binary_labels(examples: Sequence[LabeledExample], boundary: Level) -> np.ndarray:
    y = np.array([1.0 if ex.gold_level >= boundary else 0.0 for ex in examples])
    if y.min() == y.max():
        raise DegenerateLabels(
            f"all examples fall on one side of boundary >= {int(boundary)}"
        )
    return y


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logistic_loss(w: np.ndarray, X: np.ndarray, y: np.ndarray, l2: float) -> float:
    """Mean binary cross-entropy plus (l2/2)||w||^2, computed stably."""
    z = X @ w
    # log(1 + e^z) - y*z without overflow.
    per_example = np.logaddexp(0.0, z) - y * z
    return float(per_example.mean() + 0.5 * l2 * (w @ w))


def logistic_gradient(
    w: np.ndarray, X: np.ndarray, y: np.ndarray, l2: float
) -> np.ndarray:
    return X.T @ (sigmoid(X @ w) - y) / len(y) + l2 * w


@dataclass(frozen=True)
class FitResult:
    weights: dict[str, float]
    loss_history: tuple[float, ...]
    converged: bool
    iterations: int
    cue_ids: tuple[str, ...]

    def weight_vector(self) -> np.ndarray:
        return np.array([self.weights[c] for c in self.cue_ids])


def fit_weights(
    examples: Sequence[LabeledExample],
    boundary: Level,
    l2: float = 0.0,
    max_iters: int = 500,
    tol: float = 1e-8,
) -> FitResult:
    """Gradient descent with Armijo backtracking from w = 0.

    Converged when the gradient norm falls under ``tol``; otherwise stops
    at ``max_iters`` with ``converged=False``. Every accepted step strictly
    decreases the loss.
    """
    if l2 < 0:
        raise ValueError("l2 must be nonnegative")
    boundary = Level.parse(boundary)
    if boundary < Level.FRINGE:
        raise ValueError("boundary must be one of levels 1..3")
    X, cue_ids = _design_matrix(examples)
    y = _binary_labels(examples, boundary)

    w = np.zeros(X.shape[1])
    losses = [logistic_loss(w, X, y, l2)]
    converged = False
    iterations = 0
    for iterations in range(1, max_iters + 1):
        g = logistic_gradient(w, X, y, l2)
        gnorm_sq = float(g @ g)
        if math.sqrt(gnorm_sq) < tol:
            converged = True
            iterations -= 1
            break
        step = 1.0
        current = losses[-1]
        accepted = False
        for _ in range(MAX_BACKTRACKS):
            candidate = w - step * g
            loss = logistic_loss(candidate, X, y, l2)
            if loss <= current - ARMIJO_C * step * gnorm_sq:
                w = candidate
                losses.append(loss)
                accepted = True
                break
            step *= BACKTRACK_FACTOR
        if not accepted:
            # No descent step representable; gradient is numerically flat.
            converged = True
            break
    return FitResult(
        weights={cue_id: float(wj) for cue_id, wj in zip(cue_ids, w)},
        loss_history=tuple(losses),
        converged=converged,
        iterations=iterations,
        cue_ids=cue_ids,
    )


@dataclass(frozen=True)
class RocPoint:
    threshold: float
    tpr: float
    fpr: float


@dataclass(frozen=True)
class RocCurve:
    points: tuple[RocPoint, ...]
    auc: float


def roc_curve(scores: Sequence[float], labels: Sequence[bool]) -> RocCurve:
    """ROC with a threshold at every distinct score (prediction: score >= t).

    Points run from threshold +inf (0,0) down to the minimum score (1,1);
    AUC is the trapezoidal area, which equals the fraction of correctly
    ordered positive/negative pairs with ties counted half.
    """
    if len(scores) != len(labels):
        raise ValueError("scores and labels must align")
    s = np.asarray(scores, dtype=float)
    if not np.all(np.isfinite(s)):
        raise NonFiniteFeature("scores contain NaN or infinite values")
    y = np.asarray(labels, dtype=bool)
    pos = int(y.sum())
    neg = len(y) - pos
    if pos == 0 or neg == 0:
        raise DegenerateLabels("ROC requires both classes present")

    points = [RocPoint(threshold=math.inf, tpr=0.0, fpr=0.0)]
    for t in sorted(set(s.tolist()), reverse=True):
        predicted = s >= t
        tp = int((predicted & y).sum())
        fp = int((predicted & ~y).sum())
        points.append(RocPoint(threshold=t, tpr=tp / pos, fpr=fp / neg))

    auc = 0.0
    for a, b in zip(points, points[1:]):
        auc += 0.5 * (a.tpr + b.tpr) * (b.fpr - a.fpr)
    return RocCurve(points=tuple(points), auc=auc)


@dataclass(frozen=True)
class YoudenJ:
    """Maximize TPR - FPR. Ties resolve to the higher-TPR point (catch more
    true positives at equal J), then to the higher threshold among
    equivalent ones."""


@dataclass(frozen=True)
class FprCap:
    """Lowest threshold whose FPR does not exceed ``alpha``."""

    alpha: float


CutoffStrategy = Union[YoudenJ, FprCap]


def choose_cutoff(curve: RocCurve, strategy: CutoffStrategy) -> float:
    if isinstance(strategy, YoudenJ):
        best = max(curve.points, key=lambda p: (p.tpr - p.fpr, p.tpr, p.threshold))
        return best.threshold
    if isinstance(strategy, FprCap):
        eligible = [p for p in curve.points if p.fpr <= strategy.alpha]
        return min(p.threshold for p in eligible)
    raise TypeError(f"unknown cutoff strategy: {strategy!r}")


@dataclass(frozen=True)
class ItemStats:
    """Classical item analysis for one cue.

    ``difficulty`` is the endorsement proportion (how often the cue fires
    at all); ``discrimination`` is the point-biserial correlation between
    cue presence and the at-or-above-boundary label.
    """

    cue_id: str
    difficulty: float
    discrimination: float
    degenerate: bool = False


def item_stats(
    examples: Sequence[LabeledExample], boundary: Level
) -> list[ItemStats]:
    if not examples:
        raise ValueError("item_stats requires at least one example")
    boundary = Level.parse(boundary)
    X, cue_ids = _design_matrix(examples)
    y = np.array([1.0 if ex.gold_level >= boundary else 0.0 for ex in examples])
    out: list[ItemStats] = []
    for j, cue_id in enumerate(cue_ids):
        presence = (X[:, j] > 0).astype(float)
        difficulty = float(presence.mean())
        sx = presence.std()
        sy = y.std()
        if sx == 0 or sy == 0:
            out.append(ItemStats(cue_id, difficulty, 0.0, degenerate=True))
            continue
        r = float(((presence - presence.mean()) * (y - y.mean())).mean() / (sx * sy))
        out.append(ItemStats(cue_id, difficulty, r))
    return out


@dataclass(frozen=True)
class ThresholdCalibration:
    thresholds: tuple[float, float, float]
    raw_thresholds: tuple[float, float, float]
    clipped: bool
    aucs: tuple[float, float, float]
    diagnostics: tuple[str, ...]


def evidence_scores(
    examples: Sequence[LabeledExample], weights: Mapping[str, float]
) -> list[float]:
    return [
        sum(weights.get(cue_id, 0.0) * value for cue_id, value in ex.features.items())
        for ex in examples
    ]


def calibrate_thresholds(
    examples: Sequence[LabeledExample],
    weights: Mapping[str, float],
    strategy: CutoffStrategy = YoudenJ(),
) -> ThresholdCalibration:
    """Cut-offs for the three boundaries on one shared evidence scale.

    Each boundary is calibrated independently, then ordering is enforced by
    clipping upward (raising the later cut-off), with a diagnostic whenever
    clipping changed a value.
    """
    scores = evidence_scores(examples, weights)
    raw: list[float] = []
    aucs: list[float] = []
    for boundary in (Level.FRINGE, Level.VIOLENT_EXTREMISM, Level.TERRORISM):
        labels = [ex.gold_level >= boundary for ex in examples]
        if all(labels) or not any(labels):
            raise DegenerateLabels(
                f"no examples on both sides of boundary >= {int(boundary)}"
            )
        curve = roc_curve(scores, labels)
        raw.append(choose_cutoff(curve, strategy))
        aucs.append(curve.auc)

    clipped = list(raw)
    diagnostics: list[str] = []
    for i in (1, 2):
        if clipped[i] < clipped[i - 1]:
            diagnostics.append(
                f"theta{i + 1} ({clipped[i]:.6g}) below theta{i} "
                f"({clipped[i - 1]:.6g}); clipped upward"
            )
            clipped[i] = clipped[i - 1]
    return ThresholdCalibration(
        thresholds=(clipped[0], clipped[1], clipped[2]),
        raw_thresholds=(raw[0], raw[1], raw[2]),
        clipped=bool(diagnostics),
        aucs=(aucs[0], aucs[1], aucs[2]),
        diagnostics=tuple(diagnostics),
    )


@dataclass(frozen=True)
class CalibrationResult:
    fit: FitResult
    threshold_calibration: ThresholdCalibration
    model: WeightModel
    diagnostics: tuple[str, ...]


def calibrate(
    examples: Sequence[LabeledExample],
    boundary: Level,
    l2: float = 0.0,
    max_iters: int = 500,
    tol: float = 1e-8,
    strategy: CutoffStrategy = YoudenJ(),
    version: Optional[str] = None,
) -> CalibrationResult:
    """Full calibration: fit weights at one boundary, derive all cut-offs.

    Fitted coefficients can be negative (a cue that argues against the
    boundary); scoring weights must be nonnegative, so negatives are
    floored at zero in the emitted model and reported as diagnostics.
    The sign remains visible in ``fit.weights`` as a downweigh indicator.
    """
    boundary = Level.parse(boundary)
    fit = fit_weights(examples, boundary, l2=l2, max_iters=max_iters, tol=tol)
    diagnostics = []
    model_weights: dict[str, float] = {}
    for cue_id, w in fit.weights.items():
        if w < 0:
            diagnostics.append(
                f"fitted weight for {cue_id!r} is negative ({w:.6g}); "
                "floored at 0 in the scoring model"
            )
            model_weights[cue_id] = 0.0
        else:
            model_weights[cue_id] = w
    thresholds = calibrate_thresholds(examples, model_weights, strategy)
    diagnostics.extend(thresholds.diagnostics)
    model = WeightModel(
        version=version or f"calibrated-b{int(boundary)}-l2-{l2:g}",
        cue_weights=model_weights,
        level_thresholds=thresholds.thresholds,
    )
    return CalibrationResult(
        fit=fit,
        threshold_calibration=thresholds,
        model=model,
        diagnostics=tuple(diagnostics),
    )


def read_labeled_csv(path: Union[str, Path]) -> list[LabeledExample]:
    """Load labeled examples from CSV.

    Expected columns: ``actor_id``, ``region``, ``gold_level``, then one
    column per cue id holding the (recency-weighted) hit count.
    """
    out: list[LabeledExample] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty CSV")
        required = {"actor_id", "region", "gold_level"}
        missing = required - set(reader.fieldnames)
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        cue_columns = [c for c in reader.fieldnames if c not in required]
        for row in reader:
            features = {
                cue_id: float(row[cue_id]) for cue_id in cue_columns if row[cue_id]
            }
            out.append(
                LabeledExample(
                    features=features,
                    gold_level=Level.parse(
                        int(row["gold_level"])
                        if row["gold_level"].isdigit()
                        else row["gold_level"]
                    ),
                    actor_id=row["actor_id"],
                    region=row["region"],
                )
            )
    return out
