"""Classification evaluation: pooled k-fold metrics, per-family ablations,
the sentence-window curve, and deterministic CSV report emission."""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import lasso
from .corpus import Chunk, build_examples
from .features import FAMILIES, FeatureRegistry, extract_example
from .lasso import DesignMatrix, FitDiagnostics, LassoModel


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    accuracy: float
    f1: float
    confusion: tuple[int, int, int, int]  # tp, fp, fn, tn

    @classmethod
    def from_confusion(cls, tp: int, fp: int, fn: int, tn: int) -> "Metrics":
        total = tp + fp + fn + tn
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        accuracy = (tp + tn) / total if total else 0.0
        f1 = (
            2 * precision * recall / (precision + recall)
            if precision + recall
            else 0.0
        )
        return cls(precision, recall, accuracy, f1, (tp, fp, fn, tn))


@dataclass
class EvalReport:
    per_family: dict[str, Metrics]
    overall: Metrics
    window_curve: list[tuple[int, float]]
    majority_baseline: Metrics


def majority_metrics(y: np.ndarray) -> Metrics:
    """Metrics of the constant majority-class predictor (ties predict 1),
    so its accuracy equals the majority class share."""
    y = np.asarray(y, dtype=int)
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    if n_pos >= n_neg:
        return Metrics.from_confusion(tp=n_pos, fp=n_neg, fn=0, tn=0)
    return Metrics.from_confusion(tp=0, fp=0, fn=n_pos, tn=n_neg)


def kfold_cv_metrics(
    matrix: DesignMatrix,
    k: int = 10,
    seed: int = 0,
    lam: float | None = None,
    nested: bool = False,
    threshold: float = 0.5,
) -> Metrics:
    """Pooled-confusion metrics over a seeded shuffled k-fold split.

    By default the penalty is selected once on the full matrix and reused
    for every fold; nested=True instead reselects it on each fold's
    training part. Folds whose training part misses a class are skipped
    with a warning.
    """
    if matrix.n < k:
        raise ValueError(f"need at least k={k} rows, got {matrix.n}")
    if lam is None and not nested:
        lam = lasso.cv_select_lambda(matrix, k=k, seed=seed)
    tp = fp = fn = tn = 0
    for fold_num, test_idx in enumerate(lasso.fold_indices(matrix.n, k, seed)):
        mask = np.ones(matrix.n, dtype=bool)
        mask[test_idx] = False
        y_tr = matrix.y[mask]
        if len(np.unique(y_tr)) < 2:
            warnings.warn(f"fold {fold_num}: training part missing a class, skipped")
            continue
        train = matrix.subset_rows(np.flatnonzero(mask))
        fold_lam = lasso.cv_select_lambda(train, k=k, seed=seed) if nested else lam
        model = lasso.fit(train, fold_lam, seed=seed)
        probs = model.predict_proba_matrix(matrix.X[test_idx])
        pred = (probs >= threshold).astype(int)
        truth = matrix.y[test_idx]
        tp += int(np.sum((pred == 1) & (truth == 1)))
        fp += int(np.sum((pred == 1) & (truth == 0)))
        fn += int(np.sum((pred == 0) & (truth == 1)))
        tn += int(np.sum((pred == 0) & (truth == 0)))
    if tp + fp + fn + tn == 0:
        raise lasso.CVFailure("every fold was skipped")
    return Metrics.from_confusion(tp, fp, fn, tn)


def family_ablation(
    matrix: DesignMatrix,
    registry: FeatureRegistry,
    k: int = 10,
    seed: int = 0,
    lam: float | None = None,
    nested: bool = False,
) -> dict[str, Metrics]:
    """Metrics per feature family (columns restricted to that family) plus
    an "overall" run on all columns. Penalties are selected per restricted
    matrix unless a fixed lam is supplied."""
    if tuple(registry.names) != tuple(matrix.feature_names):
        raise ValueError("matrix columns do not match the registry")
    results: dict[str, Metrics] = {}
    for family in FAMILIES:
        cols = registry.columns_of_family(family)
        sub = matrix.subset_columns(cols)
        results[family] = kfold_cv_metrics(sub, k=k, seed=seed, lam=lam, nested=nested)
    results["overall"] = kfold_cv_metrics(matrix, k=k, seed=seed, lam=lam, nested=nested)
    return results


def window_experiment(
    chunks: Sequence[Chunk],
    bundle,
    registry: FeatureRegistry,
    max_window: int = 6,
    k: int = 10,
    seed: int = 0,
    nested: bool = False,
) -> list[tuple[int, float]]:
    """Accuracy of the full model as the window grows from 1 to max_window
    sentences before the applause. Window sizes with no eligible chunks are
    left out with a warning."""
    if max_window < 1:
        raise ValueError("max_window must be >= 1")
    curve: list[tuple[int, float]] = []
    for w in range(1, max_window + 1):
        examples = build_examples(chunks, w, seed)
        if not examples:
            warnings.warn(f"window {w}: no eligible chunks, point skipped")
            continue
        rows = [extract_example(ex, bundle, registry).values for ex in examples]
        y = [1 if ex.label == "pos" else 0 for ex in examples]
        matrix = DesignMatrix(np.array(rows), np.array(y), registry.names)
        metrics = kfold_cv_metrics(matrix, k=k, seed=seed, nested=nested)
        curve.append((w, metrics.accuracy))
    return curve


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def write_coefficients_csv(
    path: str | Path, model: LassoModel, diag: FitDiagnostics
) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["feature", "beta_standardized", "p_value", "q_value", "importance_weight"]
        )
        for j, name in enumerate(model.feature_names):
            beta = float(model.std_coefficients[j])
            writer.writerow([
                name,
                _fmt(beta),
                _fmt(diag.p_values[name]) if name in diag.p_values else "",
                _fmt(diag.q_values[name]) if name in diag.q_values else "",
                _fmt(diag.importance[name]) if name in diag.importance else "",
            ])


def write_ablation_csv(path: str | Path, results: dict[str, Metrics]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["family", "precision", "recall", "accuracy", "f1", "tp", "fp", "fn", "tn"]
        )
        for family, m in results.items():
            tp, fp, fn, tn = m.confusion
            writer.writerow([
                family, _fmt(m.precision), _fmt(m.recall), _fmt(m.accuracy),
                _fmt(m.f1), tp, fp, fn, tn,
            ])


def write_window_csv(path: str | Path, curve: list[tuple[int, float]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["window_size", "accuracy"])
        for w, acc in curve:
            writer.writerow([w, _fmt(acc)])


def write_importance_csv(path: str | Path, importance: dict[str, float]) -> None:
    ranked = sorted(importance.items(), key=lambda kv: (-kv[1], kv[0]))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feature", "weight"])
        for name, weight in ranked:
            writer.writerow([name, _fmt(weight)])


def emit_reports(
    report: EvalReport,
    diag: FitDiagnostics,
    model: LassoModel,
    out_dir: str | Path,
) -> list[Path]:
    """Write the four standard CSV reports; reruns with identical inputs
    produce byte-identical files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    per_family = dict(report.per_family)
    per_family["overall"] = report.overall
    per_family["baseline_majority"] = report.majority_baseline
    paths = [
        out / "coefficients.csv",
        out / "ablation.csv",
        out / "window_curve.csv",
        out / "importance.csv",
    ]
    write_coefficients_csv(paths[0], model, diag)
    write_ablation_csv(paths[1], per_family)
    write_window_csv(paths[2], report.window_curve)
    write_importance_csv(paths[3], diag.importance)
    return paths
